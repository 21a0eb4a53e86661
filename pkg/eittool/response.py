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
# Closed-form frequency-domain response: lineshapes, susceptibility,
# refractive index and group velocity.
#
# All functions accept a scalar frequency or a numpy array of frequencies
# and return a python complex/float or an array of matching shape.

from dataclasses import dataclass
from typing import Optional

import numpy as np

from eittool import *
from .model import SystemParams, MaterialParams, susceptibility_prefactor


def _result(value, omega):
    if np.ndim(omega) == 0:
        value = np.asarray(value).item()
    return value


def _xi(osc, omega):
    return 1j * omega * osc.gamma - osc.omega**2 + omega * omega


def _dxi(osc, omega):
    return 1j * osc.gamma + 2.0 * omega


def _check_denominator(den, what):
    if np.any(den == 0):
        raise SingularResponseException("%s vanishes at a sampled frequency" % (what))


def _determinant(sys, omega):
    xi0 = _xi(sys.spin, omega)
    xi1 = _xi(sys.resonators[0], omega)
    xi2 = _xi(sys.resonators[1], omega)
    c1, c2 = sys.coupling_products
    return xi0 * xi1 * xi2 - (c1 * xi2 + c2 * xi1)


def _drive(sys):
    return sys.spin.omega * np.sqrt(sys.n_spins) * sys.drive_gp


def xi(osc, omega):
    """xi = i Omega gamma - omega^2 + Omega^2"""
    omega = np.asarray(omega, dtype=float)
    return _result(_xi(osc, omega), omega)


def lineshape_single(sys, omega):
    """Steady-state spin amplitude Z0(Omega) of the one-resonator system."""
    if sys.is_double:
        raise PreconditionException("lineshape_single needs exactly one resonator")
    omega = np.asarray(omega, dtype=float)
    xi0 = _xi(sys.spin, omega)
    xi1 = _xi(sys.resonators[0], omega)
    den = -sys.coupling_products[0] + xi0 * xi1
    _check_denominator(den, "response denominator")
    return _result(_drive(sys) * xi1 / den, omega)


def lineshape_double(sys, omega):
    """Steady-state spin amplitude Z0(Omega) of the two-resonator system.

    The denominator is the determinant D = xi0 xi1 xi2 - N w0 (w1 G1^2 xi2 + w2 G2^2 xi1).
    """
    if not sys.is_double:
        raise PreconditionException("lineshape_double needs exactly two resonators")
    omega = np.asarray(omega, dtype=float)
    xi1 = _xi(sys.resonators[0], omega)
    xi2 = _xi(sys.resonators[1], omega)
    den = _determinant(sys, omega)
    _check_denominator(den, "characteristic determinant")
    return _result(_drive(sys) * xi1 * xi2 / den, omega)


def lineshape_double_degenerate(sys, omega, tol=DEGENERACY_TOL):
    """Reduced two-resonator lineshape for w1 == w2 and gamma1 == gamma2.

    Both resonators share xi (built from the first resonator) and act on the
    spin mode through the summed coupling N w0 (w1 G1^2 + w2 G2^2).
    """
    if not sys.is_double:
        raise PreconditionException("degenerate lineshape needs two resonators")
    r1, r2 = sys.resonators
    if abs(r1.omega - r2.omega) >= tol:
        raise PreconditionException(
            "resonator frequencies %g and %g are not degenerate" % (r1.omega, r2.omega)
        )
    if abs(r1.gamma - r2.gamma) >= tol:
        raise PreconditionException(
            "resonator damping rates %g and %g differ" % (r1.gamma, r2.gamma)
        )
    omega = np.asarray(omega, dtype=float)
    xi0 = _xi(sys.spin, omega)
    xi1 = _xi(r1, omega)
    den = xi0 * xi1 - sum(sys.coupling_products)
    _check_denominator(den, "response denominator")
    return _result(_drive(sys) * xi1 / den, omega)


def lineshape(sys, omega):
    if sys.is_double:
        return lineshape_double(sys, omega)
    return lineshape_single(sys, omega)


def _dlineshape(sys, omega):
    drive = _drive(sys)
    xi0 = _xi(sys.spin, omega)
    dxi0 = _dxi(sys.spin, omega)
    if not sys.is_double:
        r = sys.resonators[0]
        xi1, dxi1 = _xi(r, omega), _dxi(r, omega)
        den = xi0 * xi1 - sys.coupling_products[0]
        dden = dxi0 * xi1 + xi0 * dxi1
        _check_denominator(den, "response denominator")
        return drive * (dxi1 * den - xi1 * dden) / (den * den)
    r1, r2 = sys.resonators
    c1, c2 = sys.coupling_products
    xi1, dxi1 = _xi(r1, omega), _dxi(r1, omega)
    xi2, dxi2 = _xi(r2, omega), _dxi(r2, omega)
    num = xi1 * xi2
    dnum = dxi1 * xi2 + xi1 * dxi2
    den = xi0 * num - (c1 * xi2 + c2 * xi1)
    dden = dxi0 * num + xi0 * dnum - (c1 * dxi2 + c2 * dxi1)
    _check_denominator(den, "characteristic determinant")
    return drive * (dnum * den - num * dden) / (den * den)


def resonator_amplitudes(sys, omega):
    """Steady-state resonator amplitudes Z_j(Omega) = w_j sqrt(N) G_j Z0 / xi_j."""
    omega = np.asarray(omega, dtype=float)
    z0 = np.asarray(lineshape(sys, omega))
    amplitudes = []
    for r, g in zip(sys.resonators, sys.couplings):
        xi_j = _xi(r, omega)
        _check_denominator(xi_j, "resonator factor")
        amplitudes.append(_result(r.omega * np.sqrt(sys.n_spins) * g * z0 / xi_j, omega))
    return amplitudes


def _kappa(sys, mat, prefactor):
    if prefactor is not None:
        return prefactor
    return susceptibility_prefactor(mat, sys)


def chi(sys, mat, omega, prefactor=None):
    """Magnetic susceptibility chi(Omega); Re is dispersion, Im absorption.

    prefactor overrides kappa from the material parameters (0 gives vacuum).
    """
    kappa = _kappa(sys, mat, prefactor)
    omega = np.asarray(omega, dtype=float)
    value = -kappa * np.asarray(lineshape(sys, omega)) / np.sqrt(sys.n_spins)
    return _result(value, omega)


def dchi_domega(sys, mat, omega, prefactor=None):
    """Exact derivative of chi(Omega) from the quotient rule on the closed forms."""
    kappa = _kappa(sys, mat, prefactor)
    omega = np.asarray(omega, dtype=float)
    value = -kappa * _dlineshape(sys, omega) / np.sqrt(sys.n_spins)
    return _result(value, omega)


def refractive_index(chi_value):
    """n = sqrt(1 + chi), principal branch with Re(n) >= 0.

    A purely negative real 1 + chi maps onto +i sqrt(|1 + chi|).
    """
    scalar = np.ndim(chi_value) == 0
    value = 1.0 + np.asarray(chi_value, dtype=complex)
    if np.any(value == 0):
        raise BranchPointException("1 + chi = 0 is the branch point of n")
    # drop negative zero imaginary parts so the cut resolves to +i
    value = np.where(value.imag == 0, value.real + 0j, value)
    n = np.sqrt(value)
    if scalar:
        return complex(n)
    return n


def _group_velocity(omega, chi_value, dchi_value):
    n = np.asarray(refractive_index(chi_value))
    group_index = n + omega * dchi_value / (2.0 * n)
    if np.any(group_index == 0):
        raise DivergentGroupIndexException("group index n + Omega dn/dOmega vanishes")
    return np.real(1.0 / group_index)


def group_velocity(sys, mat, omega, prefactor=None):
    """v_g / c = Re[1 / (n + Omega dn/dOmega)] with dn/dOmega = chi' / (2n)."""
    omega = np.asarray(omega, dtype=float)
    if np.any(omega <= 0):
        raise PreconditionException("group velocity needs Omega > 0")
    chi_value = chi(sys, mat, omega, prefactor=prefactor)
    dchi_value = dchi_domega(sys, mat, omega, prefactor=prefactor)
    return _result(_group_velocity(omega, chi_value, dchi_value), omega)


@dataclass(frozen=True)
class SpectrumPoint:
    omega: float
    chi: complex
    n: complex
    vg_over_c: float


@dataclass(frozen=True)
class Spectrum:
    """A sampled spectrum on a strictly increasing frequency grid.

    system, material and prefactor record the parameters the spectrum was
    computed with so that peaks and windows can be refined off-grid.
    """

    omegas: np.ndarray
    chi: np.ndarray
    n: np.ndarray
    vg_over_c: np.ndarray
    system: Optional[SystemParams] = None
    material: Optional[MaterialParams] = None
    prefactor: Optional[float] = None

    def __post_init__(self):
        omegas = np.asarray(self.omegas, dtype=float)
        if omegas.ndim != 1 or np.any(np.diff(omegas) <= 0):
            raise PreconditionException("spectrum grid must be strictly increasing")
        for name in ("chi", "n", "vg_over_c"):
            if len(getattr(self, name)) != len(omegas):
                raise PreconditionException("spectrum column %s has wrong length" % (name))
        object.__setattr__(self, "omegas", omegas)

    def __len__(self):
        return len(self.omegas)

    @property
    def points(self):
        return [
            SpectrumPoint(float(w), complex(c), complex(n), float(v))
            for w, c, n, v in zip(self.omegas, self.chi, self.n, self.vg_over_c)
        ]

    @property
    def absorption(self):
        return np.imag(self.chi)

    @property
    def dispersion(self):
        return np.real(self.chi)

    def chi_at(self, omega):
        return chi(self.system, self.material, omega, prefactor=self.prefactor)

    def dchi_at(self, omega):
        return dchi_domega(self.system, self.material, omega, prefactor=self.prefactor)

    def sub_range(self, omega_min, omega_max):
        mask = (self.omegas >= omega_min) & (self.omegas <= omega_max)
        return Spectrum(
            self.omegas[mask],
            self.chi[mask],
            self.n[mask],
            self.vg_over_c[mask],
            system=self.system,
            material=self.material,
            prefactor=self.prefactor,
        )


def scan_spectrum(
    sys, mat, omega_min, omega_max, points=DEFAULT_GRID_POINTS, prefactor=None
):
    """Evaluate chi, n and v_g/c on a uniform grid."""
    if not 0 < omega_min < omega_max:
        raise PreconditionException("scan needs 0 < omega_min < omega_max")
    if points < 3:
        raise PreconditionException("scan needs at least 3 points")
    omegas = np.linspace(omega_min, omega_max, int(points))
    chi_values = chi(sys, mat, omegas, prefactor=prefactor)
    dchi_values = dchi_domega(sys, mat, omegas, prefactor=prefactor)
    return Spectrum(
        omegas,
        chi_values,
        refractive_index(chi_values),
        _group_velocity(omegas, chi_values, dchi_values),
        system=sys,
        material=mat,
        prefactor=prefactor,
    )
