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
# ExactModel class - truncated spin-boson Hamiltonian of N spins and
# one or two resonator modes, diagonalized densely
#
#   H / hbar w0 = sum_j w_j a_j+ a_j + (w0/2) sum_i sz_i
#                 + sum_j (G_j/2)(a_j + a_j+) sum_i sx_i
#
# Basis order is spin (x) resonator 1 (x) resonator 2.

import numpy as np
import scipy.sparse as sp
from scipy.linalg import eigh
from scipy.optimize import linear_sum_assignment

from eittool import *
from .helpers import log_message
from .model import OscillatorParams, SystemParams
from .modes import eigenfrequencies

SECTORS = ("full", "symmetric")

SIGMA_X = sp.csr_matrix(np.array([[0.0, 1.0], [1.0, 0.0]]))
SIGMA_Z = sp.csr_matrix(np.array([[1.0, 0.0], [0.0, -1.0]]))


def boson_lowering(cutoff):
    return sp.diags(np.sqrt(np.arange(1, cutoff + 1, dtype=float)), 1, format="csr")


def _site_sum(op, n_sites):
    total = sp.csr_matrix((2**n_sites, 2**n_sites))
    for i in range(n_sites):
        left = sp.identity(2**i, format="csr")
        right = sp.identity(2 ** (n_sites - i - 1), format="csr")
        total = total + sp.kron(sp.kron(left, op), right, format="csr")
    return total


def _collective_spin(n_spins):
    """(sum sx, sum sz) on the Dicke states |J, m>, m = J .. -J, J = N/2."""
    j = n_spins / 2.0
    m = j - np.arange(n_spins + 1)
    raising = np.sqrt(j * (j + 1) - m[1:] * (m[1:] + 1))
    jp = sp.diags(raising, 1, format="csr")
    return jp + jp.T, sp.diags(2.0 * m, 0, format="csr")


class ExactModel:
    def __init__(self, **kwargs):
        self.n_spins = 2
        self.spin_omega = 1.0
        self.omegas = [1.0]
        self.couplings = [0.0]
        self.boson_cutoff = DEFAULT_BOSON_CUTOFF
        self.logging = False
        for k, v in kwargs.items():
            if k in self.__dict__:
                self.__dict__[k] = v
        self.omegas = [float(w) for w in self.omegas]
        self.couplings = [float(g) for g in self.couplings]
        self.validate()

    def __str__(self):
        return "ExactModel(N=%d, w=%s, G=%s, cutoff=%d)" % (
            self.n_spins,
            self.omegas,
            self.couplings,
            self.boson_cutoff,
        )

    def log(self, msg):
        if self.logging:
            log_message(msg)

    @staticmethod
    def from_system(sys, n_spins=None, boson_cutoff=DEFAULT_BOSON_CUTOFF, **kwargs):
        return ExactModel(
            n_spins=sys.n_spins if n_spins is None else n_spins,
            spin_omega=sys.spin.omega,
            omegas=sys.omegas,
            couplings=sys.couplings,
            boson_cutoff=boson_cutoff,
            **kwargs,
        )

    def validate(self):
        if not 1 <= self.n_spins <= EXACT_MAX_SPINS:
            raise InvalidParameterException(
                "exact model supports 1 to %d spins" % (EXACT_MAX_SPINS)
            )
        if len(self.omegas) not in (1, 2) or len(self.couplings) != len(self.omegas):
            raise InvalidParameterException("one or two resonator modes are supported")
        if not all(w > 0 for w in self.omegas + [self.spin_omega]):
            raise InvalidParameterException("mode frequencies must be positive")
        if self.boson_cutoff < 1:
            raise InvalidParameterException("boson cutoff must be at least 1")
        if self.dimension() > EXACT_DIM_BUDGET:
            raise HilbertSpaceTooLargeException(
                "Hilbert space dimension %d exceeds %d"
                % (self.dimension(), EXACT_DIM_BUDGET)
            )

    def dimension(self, sector="full"):
        spin_dim = 2**self.n_spins if sector == "full" else self.n_spins + 1
        return spin_dim * (self.boson_cutoff + 1) ** len(self.omegas)

    def _spin_operators(self, sector):
        if sector not in SECTORS:
            raise PreconditionException("unknown sector '%s'" % (sector))
        if sector == "symmetric":
            return _collective_spin(self.n_spins)
        return _site_sum(SIGMA_X, self.n_spins), _site_sum(SIGMA_Z, self.n_spins)

    def _embed(self, spin_op, mode_ops):
        op = spin_op
        for mode_op in mode_ops:
            op = sp.kron(op, mode_op, format="csr")
        return op

    def hamiltonian(self, sector="full"):
        sx, sz = self._spin_operators(sector)
        spin_eye = sp.identity(sx.shape[0], format="csr")
        a = boson_lowering(self.boson_cutoff)
        eye = sp.identity(self.boson_cutoff + 1, format="csr")
        modes = len(self.omegas)
        h = 0.5 * self.spin_omega * self._embed(sz, [eye] * modes)
        for j, (w, g) in enumerate(zip(self.omegas, self.couplings)):
            number = [eye] * modes
            number[j] = a.T @ a
            h = h + w * self._embed(spin_eye, number)
            position = [eye] * modes
            position[j] = a + a.T
            h = h + 0.5 * g * self._embed(sx, position)
        return h.tocsr()

    def parity_operator(self, sector="full"):
        """prod_i sz_i (x) (-1)^n_j; commutes with the Hamiltonian."""
        if sector == "symmetric":
            flips = np.arange(self.n_spins + 1)
            op = sp.diags((-1.0) ** flips, 0, format="csr")
        else:
            op = sp.identity(1, format="csr")
            for _ in range(self.n_spins):
                op = sp.kron(op, SIGMA_Z, format="csr")
        signs = sp.diags((-1.0) ** np.arange(self.boson_cutoff + 1), 0, format="csr")
        return self._embed(op, [signs] * len(self.omegas))

    def bosonized_system(self):
        return SystemParams(
            spin=OscillatorParams(self.spin_omega, 0.0),
            resonators=[OscillatorParams(w, 0.0) for w in self.omegas],
            couplings=self.couplings,
            n_spins=self.n_spins,
        )


def exact_spectrum(model, sector="full"):
    """Ascending eigenvalues of the truncated Hamiltonian in units of w0."""
    model.validate()
    h = model.hamiltonian(sector).toarray()
    model.log("Diagonalizing %s (%s sector, dim %d)" % (model, sector, h.shape[0]))
    return eigh(h, eigvals_only=True)


def bosonization_error(model, level=1):
    """Largest relative deviation of exact excitation gaps from the
    bosonized normal-mode predictions.

    level 1 compares single excitations with the normal-mode frequencies,
    level 2 double excitations with the pairwise sums W_k + W_l.
    Gaps come from the permutation-symmetric sector and are paired with the
    predictions by minimum-cost assignment.
    """
    modes = eigenfrequencies(model.bosonized_system())
    singles = list(modes.frequencies)
    if modes.dark_mode is not None:
        singles.append(modes.dark_mode)
    singles.sort()
    if level == 1:
        targets = singles
    elif level == 2:
        targets = [
            singles[k] + singles[l]
            for k in range(len(singles))
            for l in range(k, len(singles))
        ]
    else:
        raise PreconditionException("excitation level must be 1 or 2")
    targets = np.array(targets)
    if np.any(targets <= 0):
        raise PreconditionException("bosonized modes must have positive frequency")

    energies = exact_spectrum(model, sector="symmetric")
    gaps = energies[1:] - energies[0]
    gaps = gaps[: min(len(gaps), 4 * len(targets))]
    cost = np.abs(gaps[None, :] - targets[:, None]) / targets[:, None]
    rows, cols = linear_sum_assignment(cost)
    error = float(np.max(cost[rows, cols]))
    model.log("Bosonization error (level %d): %.3e" % (level, error))
    return error
