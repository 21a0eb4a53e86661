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
# Time-domain integration of the Heisenberg-Langevin equations
# (expectation values, fluctuations dropped)
#
# The state vector is (Z0, P0, Z1, P1[, Z2, P2]) with P_k = dZ_k/dt / w_k:
#
#   dZ0/dt = w0 P0
#   dP0/dt = -g0 P0 - w0 Z0 - sqrt(N) sum_j G_j Z_j - 2 sqrt(N) Gp cos(W t)
#   dZj/dt = wj Pj
#   dPj/dt = -gj Pj - wj Zj - sqrt(N) G_j Z0

import math
from dataclasses import dataclass
from typing import Any, Optional

import numpy as np
from scipy.integrate import trapezoid

from eittool import *
from .helpers import log_message
from .modes import eigenfrequencies


def rk4_step(fn, t, x, h):
    """One classical 4th-order Runge-Kutta step of dx/dt = fn(t, x)."""
    k1 = fn(t, x)
    k2 = fn(t + h / 2, x + h / 2 * k1)
    k3 = fn(t + h / 2, x + h / 2 * k2)
    k4 = fn(t + h, x + h * k3)
    return x + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def _min_positive_gamma(sys):
    positive = [g for g in sys.gammas if g > 0]
    if not positive:
        return None
    return min(positive)


@dataclass(frozen=True)
class Trajectory:
    """Recorded states, one row per time step starting at t_start."""

    dt: float
    t_start: float
    states: np.ndarray
    omega: Optional[float] = None
    system: Any = None

    def __len__(self):
        return len(self.states)

    @property
    def times(self):
        return self.t_start + self.dt * np.arange(len(self.states))

    @property
    def t_end(self):
        return self.t_start + self.dt * (len(self.states) - 1)

    def coordinate(self, component=0):
        return self.states[:, 2 * component]

    def energy(self):
        """Undamped oscillator energy sum_k w_k (Z_k^2 + P_k^2) / 2 plus the
        coupling energy sqrt(N) sum_j G_j Z0 Z_j; non-increasing without drive."""
        sys = self.system
        freqs = [sys.spin.omega] + sys.omegas
        z = self.states[:, 0::2]
        p = self.states[:, 1::2]
        e = 0.5 * ((z * z + p * p) * np.array(freqs)).sum(axis=1)
        root_n = np.sqrt(sys.n_spins)
        for j, g in enumerate(sys.couplings, start=1):
            e = e + root_n * g * z[:, 0] * z[:, j]
        return e


class LangevinIntegrator:
    """Fixed-step RK4 propagation of the linear Langevin equations.

    For a linear system with harmonic drive the RK4 step is the affine map
    x(n+1) = M x(n) + Re(exp(-i W n h) w). Steps are applied in blocks using
    precomputed powers of M, giving the same recurrence without a Python
    loop per step.
    """

    def __init__(self, system, dt, **kwargs):
        self.system = system
        self.dt = float(dt)
        self.block = 1024
        self.logging = False
        for k, v in kwargs.items():
            if k in self.__dict__:
                self.__dict__[k] = v
        if not self.dt > 0:
            raise PreconditionException("time step must be positive")
        self._matrix = self.state_matrix()
        self._step = rk4_step(
            lambda t, x: self._matrix @ x, 0.0, np.eye(self.dimension), self.dt
        )

    def log(self, msg):
        if self.logging:
            log_message(msg)

    @property
    def dimension(self):
        return 2 * (1 + len(self.system.resonators))

    @property
    def forcing(self):
        f = np.zeros(self.dimension)
        f[1] = -2.0 * np.sqrt(self.system.n_spins) * self.system.drive_gp
        return f

    def state_matrix(self):
        sys = self.system
        root_n = np.sqrt(sys.n_spins)
        a = np.zeros((self.dimension, self.dimension))
        oscillators = [sys.spin] + list(sys.resonators)
        for k, osc in enumerate(oscillators):
            a[2 * k, 2 * k + 1] = osc.omega
            a[2 * k + 1, 2 * k] = -osc.omega
            a[2 * k + 1, 2 * k + 1] = -osc.gamma
        for j, g in enumerate(sys.couplings, start=1):
            a[1, 2 * j] = -root_n * g
            a[2 * j + 1, 0] = -root_n * g
        return a

    def derivative(self, t, x, omega=None):
        dx = self._matrix @ x
        if omega is not None:
            dx = dx + self.forcing * np.cos(omega * t)
        return dx

    def max_stable_dt(self, omega=None):
        """Largest step allowed: 2 pi / (20 W_max) over all frequencies in play."""
        sys = self.system
        freqs = [sys.spin.omega] + sys.omegas
        freqs += list(eigenfrequencies(sys).frequencies)
        if omega is not None:
            freqs.append(abs(omega))
        return 2.0 * math.pi / (STEPS_PER_FASTEST_PERIOD * max(freqs))

    def _block_tables(self, omega, size):
        n = self.dimension
        powers = np.empty((size + 1, n, n))
        powers[0] = np.eye(n)
        for j in range(size):
            powers[j + 1] = self._step @ powers[j]
        forced = np.zeros((size + 1, n), dtype=complex)
        if omega is not None:
            h = self.dt
            f = self.forcing
            w = rk4_step(
                lambda t, x: self._matrix @ x + f * np.exp(-1j * omega * t),
                0.0,
                np.zeros(n, dtype=complex),
                h,
            )
            phases = np.exp(-1j * omega * h * np.arange(size))
            for j in range(size):
                forced[j + 1] = self._step @ forced[j] + phases[j] * w
        return powers, forced

    def _check(self, rows, n0):
        if not np.all(np.isfinite(rows)) or np.max(np.abs(rows)) > DIVERGENCE_LIMIT:
            raise IntegrationDivergedException(
                "state diverged near t = %.6g" % (n0 * self.dt)
            )

    def integrate(self, t_end, omega=None, initial=None, record_from=0.0):
        """Integrate from rest (or initial) up to t_end, recording from record_from."""
        if omega is not None and self.system.drive_gp == 0:
            omega = None
        if self.dt > self.max_stable_dt(omega) * (1 + 1e-12):
            raise PreconditionException(
                "dt = %g exceeds 2 pi / (20 W_max) = %g"
                % (self.dt, self.max_stable_dt(omega))
            )
        n_steps = int(round(t_end / self.dt))
        if n_steps < 1:
            raise PreconditionException("t_end must cover at least one step")
        if not 0 <= record_from <= t_end:
            raise PreconditionException("record_from must lie within [0, t_end]")
        first = int(math.ceil(record_from / self.dt - 1e-9))
        n = self.dimension
        x = np.zeros(n) if initial is None else np.array(initial, dtype=float)
        if x.shape != (n,):
            raise PreconditionException("initial state must have %d entries" % (n))

        size = max(1, min(int(self.block), n_steps))
        powers, forced = self._block_tables(omega, size)
        flat = powers.reshape(-1, n)
        self.log(
            "Integrating %d steps of dt=%g in blocks of %d (recording from step %d)"
            % (n_steps, self.dt, size, first)
        )
        recorded = [x.copy()] if first == 0 else []
        n0 = 0
        while n0 < n_steps:
            nb = min(size, n_steps - n0)
            phase = np.exp(-1j * omega * n0 * self.dt) if omega is not None else 0
            if n0 + nb < first:
                f = forced[nb]
                x = powers[nb] @ x + (phase.real * f.real - phase.imag * f.imag)
                self._check(x, n0 + nb)
            else:
                rows = (flat[n : (nb + 1) * n] @ x).reshape(nb, n)
                f = forced[1 : nb + 1]
                rows += phase.real * f.real - phase.imag * f.imag
                self._check(rows, n0 + nb)
                start = max(0, first - n0 - 1)
                recorded.extend(rows[start:])
                x = rows[-1].copy()
            n0 += nb
        self.log("Integration finished at t=%.6g" % (n_steps * self.dt))
        return Trajectory(
            dt=self.dt,
            t_start=first * self.dt,
            states=np.array(recorded),
            omega=omega,
            system=self.system,
        )


def integrate_langevin(
    sys, t_end, dt, omega=None, initial=None, record_from=0.0, **kwargs
):
    """Classical Langevin dynamics driven at omega (undriven when None).

    Requires dt <= 2 pi / (20 W_max) and t_end >= 10 / (smallest positive
    damping rate).
    """
    gamma_min = _min_positive_gamma(sys)
    if gamma_min is not None and t_end < RUN_FACTOR / gamma_min * (1 - 1e-12):
        raise PreconditionException(
            "t_end = %g is shorter than %g / gamma_min = %g"
            % (t_end, RUN_FACTOR, RUN_FACTOR / gamma_min)
        )
    integrator = LangevinIntegrator(sys, dt, **kwargs)
    return integrator.integrate(
        t_end, omega=omega, initial=initial, record_from=record_from
    )


def steady_state_amplitude(traj, omega, periods=None, component=0, settle=None):
    """Complex amplitude of exp(-i W t) in a coordinate over the final window.

    Z = (1/T) int Z(t) exp(i W t) dt by the trapezoidal rule over the last
    `periods` whole drive periods. The window must start after `settle`
    (default 8 / smallest positive damping of traj.system) and span at
    least 5 periods.
    """
    if not omega > 0:
        raise PreconditionException("drive frequency must be positive")
    period = 2.0 * math.pi / omega
    steps = period / traj.dt
    per_period = int(round(steps))
    if per_period < 1 or abs(steps - per_period) > 1e-6 * steps:
        raise PreconditionException(
            "dt must divide the drive period (%.6g steps per period)" % (steps)
        )
    if settle is None:
        settle = 0.0
        if traj.system is not None:
            gamma_min = _min_positive_gamma(traj.system)
            if gamma_min is not None:
                settle = SETTLE_FACTOR / gamma_min
    start = max(settle, traj.t_start)
    available = int(math.floor((traj.t_end - start) / period + 1e-9))
    if periods is None:
        periods = available
    if periods > available:
        raise PreconditionException(
            "only %d whole periods recorded after t = %.6g" % (available, start)
        )
    if periods < MIN_WINDOW_PERIODS:
        raise PreconditionException(
            "projection window needs at least %d periods, got %d"
            % (MIN_WINDOW_PERIODS, periods)
        )
    count = periods * per_period + 1
    t = traj.times[-count:]
    z = traj.coordinate(component)[-count:]
    value = trapezoid(z * np.exp(1j * omega * t), t) / (periods * period)
    return complex(value)


def timedomain_amplitude(
    sys, omega, max_dt=0.01, window_periods=50, component=0, refine=1, **kwargs
):
    """Steady-state amplitude of a coordinate from a full Langevin run.

    The step divides the drive period exactly (refine > 1 divides it further
    for step-halving checks), the run lasts a whole number of periods and at
    least 10 / gamma_min, and only the final window is recorded.
    """
    period = 2.0 * math.pi / omega
    per_period = int(math.ceil(period / max_dt)) * int(refine)
    dt = period / per_period
    gamma_min = _min_positive_gamma(sys)
    if gamma_min is None:
        raise PreconditionException("a steady state needs positive damping")
    run = max(
        RUN_FACTOR / gamma_min, SETTLE_FACTOR / gamma_min + window_periods * period
    )
    n_periods = int(math.ceil(run / period))
    t_end = n_periods * period
    record_from = (n_periods - window_periods) * per_period * dt
    traj = integrate_langevin(
        sys, t_end, dt, omega=omega, record_from=record_from, **kwargs
    )
    return steady_state_amplitude(
        traj, omega, periods=window_periods, component=component
    )
