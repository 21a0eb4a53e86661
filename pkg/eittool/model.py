#! /usr/bin/env python3
#
# Copyright (C) 2023  Michael Gale

# Permission is hereby granted, free of charge, to any person
# obtaining a copy of this software and associated documentation
# files (the "Software"), to deal in the Software without restriction,
# including without limitation the rights to use, copy, modify, merge,
# publish, distribute, sublicense, and/or sell copies of the Software,
# and to permit persons to whom the Software is furnished to do so,
# subject to the following conditions:
#
# The above copyright notice and this permission notice shall be
# included in all copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND,
# EXPRESS OR IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES
# OF MERCHANTABILITY, FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT.
# IN NO EVENT SHALL THE AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY
# CLAIM, DAMAGES OR OTHER LIABILITY, WHETHER IN AN ACTION OF CONTRACT,
# TORT OR OTHERWISE, ARISING FROM, OUT OF OR IN CONNECTION WITH THE
# SOFTWARE OR THE USE OR OTHER DEALINGS IN THE SOFTWARE.
#
# Model parameter types, tip geometry and the SI susceptibility prefactor.
# Everything outside this module works in units of the spin frequency w0.

import math
from dataclasses import dataclass, field, replace

import numpy as np

from eittool import *


@dataclass(frozen=True)
class TipGeometry:
    """A magnetized NAMR tip.

    moment is the magnetic moment magnitude (A m^2) along x, position the
    equilibrium tip position (m) relative to the ensemble centre, mass the
    effective resonator mass (kg) and mech_freq its angular frequency (rad/s).
    """

    moment: float
    position: tuple
    mass: float
    mech_freq: float

    def __post_init__(self):
        position = tuple(float(v) for v in self.position)
        object.__setattr__(self, "position", position)
        if len(position) != 3:
            raise InvalidParameterException("tip position must be a 3-vector")
        if position[0] != 0.0:
            raise InvalidParameterException("tip position must lie in the yz-plane")
        if not self.mass > 0 or not self.mech_freq > 0:
            raise InvalidParameterException("tip mass and frequency must be positive")
        if self.distance == 0.0:
            raise DegenerateGeometryException("tip sits on the spin ensemble")

    @property
    def distance(self):
        return float(np.linalg.norm(self.position))

    @property
    def moment_vector(self):
        return np.array([self.moment, 0.0, 0.0])


@dataclass(frozen=True)
class StaticFieldParams:
    b0: float
    g_factor: float = G_FACTOR
    bohr_magneton: float = BOHR_MAGNETON
    vacuum_permeability: float = MU_0
    hbar: float = HBAR

    def __post_init__(self):
        if self.b0 < 0:
            raise InvalidParameterException("static field B0 must be >= 0")
        if not self.g_factor > 0:
            raise InvalidParameterException("g-factor must be positive")

    @property
    def g0(self):
        return self.g_factor * self.bohr_magneton * self.b0 / 2.0

    @property
    def spin_frequency(self):
        """w0 = 2 g0 / hbar in rad/s"""
        return 2.0 * self.g0 / self.hbar


@dataclass(frozen=True)
class OscillatorParams:
    omega: float
    gamma: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.omega) and self.omega > 0):
            raise InvalidParameterException("oscillator frequency must be > 0")
        if not (math.isfinite(self.gamma) and self.gamma >= 0):
            raise InvalidParameterException("damping rate must be >= 0")


@dataclass(frozen=True)
class SystemParams:
    """Dimensionless spin-ensemble / resonator system in units of w0.

    The spin mode frequency is 1 by the unit convention; the other fields
    hold the resonators, their couplings to the collective spin mode, the
    number of spins and the probe drive strength Gp.
    """

    spin: OscillatorParams
    resonators: tuple
    couplings: tuple
    n_spins: int = 20
    drive_gp: float = 1.0
    check_stability: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "resonators", tuple(self.resonators))
        object.__setattr__(self, "couplings", tuple(float(g) for g in self.couplings))
        if len(self.resonators) not in (1, 2):
            raise InvalidParameterException("one or two resonators are supported")
        if len(self.couplings) != len(self.resonators):
            raise InvalidParameterException("one coupling per resonator is required")
        if not all(math.isfinite(g) for g in self.couplings):
            raise InvalidParameterException("couplings must be finite")
        if int(self.n_spins) != self.n_spins or self.n_spins < 1:
            raise InvalidParameterException("n_spins must be a positive integer")
        object.__setattr__(self, "n_spins", int(self.n_spins))
        if not (math.isfinite(self.drive_gp) and self.drive_gp >= 0):
            raise InvalidParameterException("drive Gp must be >= 0")
        if self.check_stability and not self.is_stable:
            raise UnstableParametersException(
                "undamped system has a negative normal-mode root (margin %.3e)"
                % (stability_margin(self))
            )

    @staticmethod
    def single(
        omega, gamma, coupling, spin_gamma=0.05, n_spins=20, drive_gp=1.0, **kwargs
    ):
        return SystemParams(
            spin=OscillatorParams(1.0, spin_gamma),
            resonators=[OscillatorParams(omega, gamma)],
            couplings=[coupling],
            n_spins=n_spins,
            drive_gp=drive_gp,
            **kwargs,
        )

    @staticmethod
    def double(
        omegas, gammas, couplings, spin_gamma=0.05, n_spins=20, drive_gp=1.0, **kwargs
    ):
        return SystemParams(
            spin=OscillatorParams(1.0, spin_gamma),
            resonators=[OscillatorParams(w, g) for w, g in zip(omegas, gammas)],
            couplings=couplings,
            n_spins=n_spins,
            drive_gp=drive_gp,
            **kwargs,
        )

    @property
    def is_double(self):
        return len(self.resonators) == 2

    @property
    def omegas(self):
        return [r.omega for r in self.resonators]

    @property
    def gammas(self):
        return [self.spin.gamma] + [r.gamma for r in self.resonators]

    @property
    def coupling_products(self):
        """N w0 w_j G_j^2 for each resonator"""
        w0 = self.spin.omega
        return [
            self.n_spins * w0 * r.omega * g * g
            for r, g in zip(self.resonators, self.couplings)
        ]

    @property
    def is_stable(self):
        return stability_margin(self) >= -STABILITY_TOL

    def with_min_gamma(self, gamma_min):
        """Copy with every damping rate raised to at least gamma_min."""
        spin = replace(self.spin, gamma=max(self.spin.gamma, gamma_min))
        resonators = [replace(r, gamma=max(r.gamma, gamma_min)) for r in self.resonators]
        return replace(self, spin=spin, resonators=resonators)

    def with_couplings(self, couplings):
        return replace(self, couplings=couplings)


@dataclass(frozen=True)
class MaterialParams:
    volume: float = DEFAULT_VOLUME
    omega_scale: float = DEFAULT_OMEGA_SCALE
    g_factor: float = G_FACTOR
    bohr_magneton: float = BOHR_MAGNETON
    vacuum_permeability: float = MU_0
    hbar: float = HBAR

    def __post_init__(self):
        if not self.volume > 0:
            raise InvalidParameterException("ensemble volume must be positive")
        if not self.omega_scale > 0:
            raise InvalidParameterException("omega scale must be positive")
        if not self.g_factor > 0:
            raise InvalidParameterException("g-factor must be positive")

    def drive_field(self, sys):
        """Probe field amplitude Bp (T) that produces the drive Gp of sys."""
        gp = sys.drive_gp * self.omega_scale
        return math.sqrt(2.0) * self.hbar * gp / (self.g_factor * self.bohr_magneton)


def stability_margin(sys):
    """w0 - N sum_j G_j^2 / w_j

    Non-negative exactly when the symmetrized undamped dynamical matrix is
    positive semi-definite, i.e. no normal-mode root in Omega^2 is negative.
    """
    w0 = sys.spin.omega
    load = sum(
        sys.n_spins * g * g / r.omega for r, g in zip(sys.resonators, sys.couplings)
    )
    return w0 - load


def tip_field(tip, dz=0.0, mu0=MU_0):
    """Dipole field vector (T) of a tip displaced by dz along z, at the ensemble centre."""
    source = np.array(tip.position) + np.array([0.0, 0.0, dz])
    r = float(np.linalg.norm(source))
    if r == 0.0:
        raise DegenerateGeometryException("tip sits on the spin ensemble")
    n = -source / r
    m = tip.moment_vector
    return mu0 * (3.0 * np.dot(m, n) * n - m) / (4.0 * math.pi * r**3)


def tip_field_params(tip, fields):
    """Return (A, G): the static field (T) and gradient (T/m) of a tip at the spins.

    The x-component of the tip field is linearised as B(z) = A - G z in the
    tip displacement z. G uses the tip's own moment.
    """
    r = tip.distance
    if r == 0.0:
        raise DegenerateGeometryException("tip sits on the spin ensemble")
    mu0 = fields.vacuum_permeability
    # z-component of the tip-to-spin vector
    r_z = -tip.position[2]
    a = -mu0 * tip.moment / (4.0 * math.pi * r**3)
    grad = 3.0 * r_z * mu0 * tip.moment / (4.0 * math.pi * r**5)
    return a, grad


def dipole_dipole_energy(tip1, tip2, dz1=0.0, dz2=0.0, mu0=MU_0):
    """Dipole-dipole interaction energy (J) of two tips displaced along z."""
    r1 = np.array(tip1.position) + np.array([0.0, 0.0, dz1])
    r2 = np.array(tip2.position) + np.array([0.0, 0.0, dz2])
    d = r2 - r1
    dist = float(np.linalg.norm(d))
    if dist == 0.0:
        raise DegenerateGeometryException("tips are coincident")
    e12 = d / dist
    m1 = tip1.moment_vector
    m2 = tip2.moment_vector
    return float(
        mu0
        * (3.0 * np.dot(m1, e12) * np.dot(m2, e12) - np.dot(m1, m2))
        / (4.0 * math.pi * dist**3)
    )


def to_dimensionless(
    tips,
    fields,
    spin_gamma=0.05,
    resonator_gammas=None,
    n_spins=20,
    drive_gp=1.0,
    volume=DEFAULT_VOLUME,
):
    """Convert SI tip geometries to a dimensionless system.

    Returns (SystemParams, MaterialParams); the material record carries
    omega_scale = w0 so that the susceptibility can be restored to SI.
    """
    if not fields.b0 > 0:
        raise ZeroSpinFrequencyException("B0 must be positive to define w0")
    tips = list(tips)
    w0 = fields.spin_frequency
    hbar = fields.hbar
    if resonator_gammas is None:
        resonator_gammas = [0.0] * len(tips)
    if len(resonator_gammas) != len(tips):
        raise InvalidParameterException(
            "%d resonator damping rates given for %d tips"
            % (len(resonator_gammas), len(tips))
        )
    resonators = []
    couplings = []
    for tip, gamma in zip(tips, resonator_gammas):
        _, grad = tip_field_params(tip, fields)
        g = fields.g_factor * fields.bohr_magneton * grad / 2.0
        coupling = g * math.sqrt(2.0 * hbar / (tip.mass * tip.mech_freq)) / hbar
        resonators.append(OscillatorParams(tip.mech_freq / w0, gamma))
        couplings.append(coupling / w0)
    sys = SystemParams(
        spin=OscillatorParams(1.0, spin_gamma),
        resonators=resonators,
        couplings=couplings,
        n_spins=n_spins,
        drive_gp=drive_gp,
    )
    mat = MaterialParams(
        volume=volume,
        omega_scale=w0,
        g_factor=fields.g_factor,
        bohr_magneton=fields.bohr_magneton,
        vacuum_permeability=fields.vacuum_permeability,
        hbar=hbar,
    )
    return sys, mat


def susceptibility_prefactor(mat, sys):
    """kappa = mu0 (gs muB)^2 N / (2 V hbar Gp)

    chi(Omega) = -kappa * Z0(Omega) / sqrt(N), with Z0 the dimensionless
    steady-state spin amplitude returned by the lineshape functions.
    """
    gp = sys.drive_gp * mat.omega_scale
    if gp == 0:
        raise UndefinedPrefactorException("susceptibility prefactor needs Gp > 0")
    gmu = mat.g_factor * mat.bohr_magneton
    return (
        mat.vacuum_permeability
        * gmu
        * gmu
        * sys.n_spins
        / (2.0 * mat.volume * mat.hbar * gp)
    )
