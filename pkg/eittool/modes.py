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
# Normal modes, characteristic determinant, absorption peaks and
# transparency windows

from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.polynomial import Polynomial
from scipy.optimize import minimize_scalar
from scipy.signal import find_peaks as _scipy_find_peaks

from eittool import *
from .response import _xi, group_velocity


@dataclass(frozen=True)
class ModeSet:
    """Undamped normal modes of a spin/resonator system.

    frequencies holds the square roots of the non-negative roots in
    x = Omega^2, ascending. roots keeps every root (a negative one flags an
    unstable set). In the degenerate double case the undriven dark mode is
    removed from frequencies and reported in dark_mode.
    """

    frequencies: tuple
    stable: bool
    dark_mode: Optional[float] = None
    interlaced: Optional[bool] = None
    roots: tuple = ()
    trace_residual: float = 0.0

    def __len__(self):
        return len(self.frequencies)

    def __iter__(self):
        return iter(self.frequencies)

    @property
    def squared(self):
        return [w * w for w in self.frequencies]


@dataclass(frozen=True)
class PeakInfo:
    location: float
    height: float


@dataclass(frozen=True)
class WindowInfo:
    left: PeakInfo
    right: PeakInfo
    location: float
    depth: float
    slope: float
    vg_over_c: Optional[float] = None

    @property
    def normal_dispersion(self):
        return self.slope > 0

    @property
    def width(self):
        return self.right.location - self.left.location


def undamped_polynomial(sys):
    """Monic characteristic polynomial of the undamped system in x = Omega^2.

    single: (x - w0^2)(x - w^2) - N w0 w G^2
    double: (x - w0^2)(x - w1^2)(x - w2^2) - c1 (x - w2^2) - c2 (x - w1^2)
    with c_j = N w0 w_j G_j^2.
    """
    squares = [sys.spin.omega**2] + [w * w for w in sys.omegas]
    poly = Polynomial.fromroots(squares)
    products = sys.coupling_products
    if not sys.is_double:
        return poly - products[0]
    c1, c2 = products
    return (
        poly
        - c1 * Polynomial.fromroots([squares[2]])
        - c2 * Polynomial.fromroots([squares[1]])
    )


def dynamical_matrix(sys, omega):
    """Frequency-domain matrix of the coupled equations for (Z0, Z1[, Z2]).

    Diagonal entries are the xi factors; the spin row couples to resonator j
    with -w0 sqrt(N) G_j and resonator j couples back with -w_j sqrt(N) G_j.
    """
    root_n = np.sqrt(sys.n_spins)
    size = 1 + len(sys.resonators)
    m = np.zeros((size, size), dtype=complex)
    m[0, 0] = _xi(sys.spin, omega)
    for j, (r, g) in enumerate(zip(sys.resonators, sys.couplings), start=1):
        m[j, j] = _xi(r, omega)
        m[0, j] = -sys.spin.omega * root_n * g
        m[j, 0] = -r.omega * root_n * g
    return m


def characteristic_determinant(sys, omega):
    """D(Omega) = xi0 xi1 xi2 - N w0 (w1 G1^2 xi2 + w2 G2^2 xi1)"""
    if not sys.is_double:
        raise PreconditionException("characteristic determinant needs two resonators")
    omega = np.asarray(omega, dtype=float)
    xi0 = _xi(sys.spin, omega)
    xi1 = _xi(sys.resonators[0], omega)
    xi2 = _xi(sys.resonators[1], omega)
    c1, c2 = sys.coupling_products
    value = xi0 * xi1 * xi2 - (c1 * xi2 + c2 * xi1)
    if np.ndim(omega) == 0:
        return complex(value)
    return value


def _cluster_roots(roots, tol=ROOT_CLUSTER_TOL):
    # companion matrix eigenvalues split a multiple root by ~sqrt(eps)
    roots = sorted(roots)
    clustered = []
    group = [roots[0]]
    for x in roots[1:]:
        if abs(x - group[-1]) <= tol * max(1.0, abs(x)):
            group.append(x)
            continue
        clustered.extend([sum(group) / len(group)] * len(group))
        group = [x]
    clustered.extend([sum(group) / len(group)] * len(group))
    return clustered


def _interlaced(roots, sys):
    lo, hi = sorted(w * w for w in sys.omegas)
    x1, x2, x3 = roots
    return bool(x1 < lo <= x2 <= hi < x3)


def eigenfrequencies(sys):
    """Undamped normal-mode frequencies from the companion matrix of the
    characteristic polynomial in Omega^2.

    A negative root marks the set unstable instead of raising, so callers
    can report on parameter sets built with check_stability=False.
    """
    poly = undamped_polynomial(sys)
    roots = _cluster_roots([float(np.real(x)) for x in poly.roots()])
    expected = sys.spin.omega**2 + sum(w * w for w in sys.omegas)
    trace_residual = sum(roots) - expected

    dark_mode = None
    interlaced = None
    bright = list(roots)
    if sys.is_double:
        w1, w2 = sys.omegas
        if abs(w1 - w2) < DEGENERACY_TOL:
            dark = min(range(len(bright)), key=lambda k: abs(bright[k] - w1 * w1))
            del bright[dark]
            dark_mode = float(w1)
        elif all(g != 0 for g in sys.couplings):
            interlaced = _interlaced(roots, sys)

    scale = max(1.0, max(abs(x) for x in roots))
    stable = all(x >= -STABILITY_TOL * scale for x in roots)
    frequencies = tuple(
        float(np.sqrt(max(x, 0.0))) for x in bright if x >= -STABILITY_TOL * scale
    )
    return ModeSet(
        frequencies=frequencies,
        stable=stable,
        dark_mode=dark_mode,
        interlaced=interlaced,
        roots=tuple(roots),
        trace_residual=float(trace_residual),
    )


def _parabola_vertex(x, y):
    # centred abscissa keeps the quadratic fit well conditioned
    x0, x1, x2 = x
    a, b, c = np.polyfit(np.asarray(x) - x1, y, 2)
    if a >= 0:
        return x1, y[1]
    xv = x1 - b / (2.0 * a)
    if not x0 <= xv <= x2:
        return x1, y[1]
    return xv, c - b * b / (4.0 * a)


def find_peaks(spectrum):
    """Interior local maxima of Im chi, refined by a three-point parabola."""
    if spectrum is None or len(spectrum) < 3:
        raise PreconditionException("peak search needs at least 3 spectrum points")
    x = spectrum.omegas
    y = spectrum.absorption
    indices, _ = _scipy_find_peaks(y)
    peaks = []
    for i in indices:
        location, height = _parabola_vertex(x[i - 1 : i + 2], y[i - 1 : i + 2])
        peaks.append(PeakInfo(float(location), float(height)))
    return sorted(peaks, key=lambda p: p.location)


def _refine_minimum(spectrum, lo, mid, hi):
    if spectrum.system is None:
        return mid
    fn = lambda w: float(np.imag(spectrum.chi_at(w)))
    try:
        res = minimize_scalar(
            fn, bracket=(lo, mid, hi), method="golden", tol=WINDOW_TOL
        )
    except ValueError:
        # flat neighbourhood, not a strict bracket
        return mid
    if lo < res.x < hi and fn(res.x) <= fn(mid):
        return float(res.x)
    return mid


def find_windows(spectrum, peaks):
    """One transparency window per adjacent pair of absorption peaks."""
    if len(peaks) < 2:
        return []
    x = spectrum.omegas
    y = spectrum.absorption
    windows = []
    for left, right in zip(peaks[:-1], peaks[1:]):
        idx = np.nonzero((x > left.location) & (x < right.location))[0]
        if len(idx) == 0:
            continue
        i = int(idx[np.argmin(y[idx])])
        lo = max(x[max(i - 1, 0)], left.location)
        hi = min(x[min(i + 1, len(x) - 1)], right.location)
        location = float(x[i])
        if lo < location < hi:
            location = _refine_minimum(spectrum, lo, location, hi)
        if spectrum.system is not None:
            depth = float(np.imag(spectrum.chi_at(location)))
            slope = float(np.real(spectrum.dchi_at(location)))
            vg = group_velocity(
                spectrum.system,
                spectrum.material,
                location,
                prefactor=spectrum.prefactor,
            )
        else:
            depth = float(y[i])
            slope = float(np.gradient(spectrum.dispersion, x)[i])
            vg = float(spectrum.vg_over_c[i])
        windows.append(WindowInfo(left, right, location, depth, slope, float(vg)))
    return windows
