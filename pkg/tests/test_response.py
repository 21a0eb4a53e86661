# closed-form lineshapes, susceptibility, refractive index and group velocity

import math

import numpy as np
import pytest

from eittool import *


def fig4b():
    return SystemParams.single(1.0, 1e-7, 0.05)


def fig5b():
    return SystemParams.double([1.0, 1.5], [1e-7, 1e-7], [0.03, 0.05])


def fig6():
    return SystemParams.double([1.0, 1.0], [1e-7, 1e-7], [0.03, 0.05])


def random_stable_system(rng, double):
    while True:
        spin_gamma = rng.uniform(1e-3, 0.2)
        n_spins = int(rng.integers(1, 40))
        if double:
            omegas = rng.uniform(0.5, 2.0, size=2)
            gammas = rng.uniform(1e-4, 0.1, size=2)
            couplings = rng.uniform(-0.1, 0.1, size=2)
            sys = SystemParams.double(
                omegas,
                gammas,
                couplings,
                spin_gamma=spin_gamma,
                n_spins=n_spins,
                check_stability=False,
            )
        else:
            sys = SystemParams.single(
                rng.uniform(0.5, 2.0),
                rng.uniform(1e-4, 0.1),
                rng.uniform(-0.15, 0.15),
                spin_gamma=spin_gamma,
                n_spins=n_spins,
                check_stability=False,
            )
        if sys.is_stable:
            return sys


def local_maxima(x, y):
    inner = (y[1:-1] > y[:-2]) & (y[1:-1] >= y[2:])
    return x[1:-1][inner]


def test_xi_examples():
    assert xi(OscillatorParams(1.0, 0.0), 1.0) == 0
    assert xi(OscillatorParams(1.0, 0.05), 0.0) == -1
    assert xi(OscillatorParams(1.5, 1e-7), 1.0) == pytest.approx(-1.25 + 1e-7j)
    values = xi(OscillatorParams(1.0, 0.0), np.array([0.0, 1.0, 2.0]))
    assert np.allclose(values, [-1, 0, 3])


def test_lineshape_single_decoupled():
    sys = SystemParams.single(1.0, 1e-7, 0.0)
    value = lineshape_single(sys, 1.0)
    assert value == pytest.approx(math.sqrt(20) / 0.05j)
    assert abs(value.real) < 1e-9 * abs(value)


def test_lineshape_single_splitting():
    omegas = np.linspace(0.5, 2.0, 3001)
    peaks = local_maxima(omegas, np.abs(lineshape_single(fig4b(), omegas)))
    assert len(peaks) == 2
    assert peaks[0] == pytest.approx(0.8811, abs=0.02)
    assert peaks[1] == pytest.approx(1.1062, abs=0.02)


def test_lineshape_off_resonant_decay():
    sys = fig4b()
    omegas = np.linspace(0.5, 2.0, 3001)
    peak = np.max(np.abs(lineshape(sys, omegas)))
    assert abs(lineshape(sys, 1e3)) < 1e-4 * peak


def test_lineshape_precondition():
    with pytest.raises(PreconditionException):
        lineshape_single(fig5b(), 1.0)
    with pytest.raises(PreconditionException):
        lineshape_double(fig4b(), 1.0)
    with pytest.raises(PreconditionException):
        lineshape_double_degenerate(fig5b(), 1.0)


def test_degenerate_needs_equal_damping():
    sys = SystemParams.double([1.0, 1.0], [1e-3, 5e-2], [0.03, 0.05])
    with pytest.raises(PreconditionException):
        lineshape_double_degenerate(sys, np.linspace(0.5, 2.0, 101))
    assert np.all(np.isfinite(lineshape_double(sys, np.linspace(0.5, 2.0, 101))))


def test_lineshape_singular():
    sys = SystemParams.single(1.5, 0.0, 0.0, spin_gamma=0.0)
    with pytest.raises(SingularResponseException):
        lineshape(sys, 1.0)


def test_lineshape_double_reduces_to_single():
    rng = np.random.default_rng(7)
    omegas = rng.uniform(0.3, 2.5, size=500)
    double = SystemParams.double([1.0, 1.5], [1e-7, 1e-7], [0.03, 0.0])
    single = SystemParams.single(1.0, 1e-7, 0.03)
    a = lineshape_double(double, omegas)
    b = lineshape_single(single, omegas)
    assert np.max(np.abs(a - b) / np.abs(b)) < 1e-9


def test_lineshape_double_decoupled_peak():
    sys = SystemParams.double([1.0, 1.5], [1e-7, 1e-7], [0.0, 0.0])
    omegas = np.linspace(0.5, 2.0, 3001)
    peaks = local_maxima(omegas, -np.imag(lineshape_double(sys, omegas)))
    assert len(peaks) == 1
    assert peaks[0] == pytest.approx(1.0, abs=1e-3)


def test_degenerate_matches_general():
    rng = np.random.default_rng(11)
    omegas = rng.uniform(0.3, 2.5, size=1000)
    sys = fig6()
    a = lineshape_double_degenerate(sys, omegas)
    b = lineshape_double(sys, omegas)
    assert np.max(np.abs(a - b) / np.abs(b)) < 1e-9


def test_degenerate_peaks():
    omegas = np.linspace(0.5, 2.0, 3001)
    peaks = local_maxima(omegas, -np.imag(lineshape_double_degenerate(fig6(), omegas)))
    assert len(peaks) == 2
    assert peaks[0] == pytest.approx(0.8598, abs=0.02)
    assert peaks[1] == pytest.approx(1.1228, abs=0.02)
    decoupled = SystemParams.double([1.0, 1.0], [1e-7, 1e-7], [0.0, 0.0])
    peaks = local_maxima(
        omegas, -np.imag(lineshape_double_degenerate(decoupled, omegas))
    )
    assert len(peaks) == 1
    assert peaks[0] == pytest.approx(1.0, abs=1e-3)


def test_resonator_amplitudes_solve_coupled_equations():
    sys = fig5b()
    omega = 1.23
    rhs = np.array([math.sqrt(sys.n_spins) * sys.drive_gp, 0.0, 0.0])
    expected = np.linalg.solve(dynamical_matrix(sys, omega), rhs)
    z1, z2 = resonator_amplitudes(sys, omega)
    assert lineshape(sys, omega) == pytest.approx(expected[0], rel=1e-12)
    assert z1 == pytest.approx(expected[1], rel=1e-12)
    assert z2 == pytest.approx(expected[2], rel=1e-12)


def test_chi_scalar_and_array():
    sys = fig5b()
    mat = MaterialParams()
    value = chi(sys, mat, 1.2)
    assert isinstance(value, complex)
    values = chi(sys, mat, np.array([1.1, 1.2]))
    assert values.shape == (2,)
    assert values[1] == pytest.approx(value)


def test_chi_decoupled_lorentzian():
    sys = SystemParams.single(1.0, 1e-7, 0.0)
    mat = MaterialParams()
    omegas = np.linspace(0.5, 1.5, 2001)
    im = np.imag(chi(sys, mat, omegas))
    assert omegas[np.argmax(im)] == pytest.approx(1.0, abs=1e-3)
    # half maximum at Omega^2 - 1 = +-gamma0 Omega
    half = omegas[im >= 0.5 * im.max()]
    assert half[-1] - half[0] == pytest.approx(0.05, abs=2e-3)


def test_chi_conjugate_symmetry():
    rng = np.random.default_rng(3)
    mat = MaterialParams()
    for double in (False, True):
        for _ in range(50):
            sys = random_stable_system(rng, double)
            omegas = rng.uniform(0.1, 3.0, size=20)
            a = chi(sys, mat, -omegas)
            b = np.conj(chi(sys, mat, omegas))
            assert np.allclose(a, b, rtol=1e-12, atol=0)


def test_chi_passivity():
    rng = np.random.default_rng(5)
    mat = MaterialParams()
    omegas = np.linspace(0.01, 4.0, 4001)
    for double in (False, True):
        for _ in range(60):
            sys = random_stable_system(rng, double)
            assert np.all(np.imag(chi(sys, mat, omegas)) > 0)


def test_chi_coupling_sign_invariance():
    rng = np.random.default_rng(9)
    mat = MaterialParams()
    omegas = np.linspace(0.3, 2.5, 501)
    for _ in range(100):
        sys = random_stable_system(rng, True)
        flipped = sys.with_couplings([-g for g in sys.couplings])
        assert np.allclose(chi(sys, mat, omegas), chi(flipped, mat, omegas), rtol=1e-14)


def test_chi_reduction_chain_randomized():
    rng = np.random.default_rng(13)
    mat = MaterialParams()
    omegas = rng.uniform(0.3, 2.5, size=200)
    for _ in range(100):
        sys = random_stable_system(rng, True)
        w1 = sys.omegas[0]
        degenerate = SystemParams.double(
            [w1, w1],
            [sys.resonators[0].gamma] * 2,
            sys.couplings,
            spin_gamma=sys.spin.gamma,
            n_spins=sys.n_spins,
            check_stability=False,
        )
        a = lineshape_double_degenerate(degenerate, omegas)
        b = lineshape_double(degenerate, omegas)
        assert np.max(np.abs(a - b) / np.abs(b)) < 1e-9


def test_chi_prefactor_override():
    sys = fig5b()
    assert chi(sys, None, 1.2, prefactor=0.0) == 0
    kappa = susceptibility_prefactor(MaterialParams(), sys)
    assert chi(sys, None, 1.2, prefactor=kappa) == pytest.approx(
        chi(sys, MaterialParams(), 1.2)
    )


def test_refractive_index_examples():
    assert refractive_index(0) == 1
    assert refractive_index(3) == pytest.approx(2)
    n = refractive_index(1j)
    assert n.real == pytest.approx(1.09868, abs=1e-5)
    assert n.imag == pytest.approx(0.45509, abs=1e-5)
    assert refractive_index(-2) == pytest.approx(1j)
    assert refractive_index(complex(-2, -0.0)) == pytest.approx(1j)
    values = refractive_index(np.array([0.0, 3.0, -2.0]))
    assert np.allclose(values, [1, 2, 1j])


def test_refractive_index_branch_point():
    with pytest.raises(BranchPointException):
        refractive_index(-1.0)


def test_refractive_index_principal_branch():
    rng = np.random.default_rng(17)
    values = rng.normal(size=200) + 1j * rng.normal(size=200)
    assert np.all(np.real(refractive_index(values)) >= 0)


def test_dchi_matches_finite_difference():
    rng = np.random.default_rng(21)
    sys = fig5b()
    mat = MaterialParams()
    modes = eigenfrequencies(sys).frequencies
    checked = 0
    while checked < 100:
        omega = rng.uniform(0.5, 2.0)
        if min(abs(omega - w) for w in modes) < 0.01:
            continue
        h = 1e-6
        fd = (chi(sys, mat, omega + h) - chi(sys, mat, omega - h)) / (2 * h)
        exact = dchi_domega(sys, mat, omega)
        assert abs(fd - exact) <= 1e-6 * abs(exact)
        checked += 1


def test_dchi_vanishes_at_dispersion_extremum():
    sys = SystemParams.single(1.0, 1e-7, 0.0)
    mat = MaterialParams()
    omegas = np.linspace(0.8, 1.2, 40001)
    re = np.real(chi(sys, mat, omegas))
    i = int(np.argmax(re))
    scale = np.max(np.abs(chi(sys, mat, omegas))) / sys.spin.gamma
    assert abs(np.real(dchi_domega(sys, mat, omegas[i]))) < 1e-2 * scale


def test_dchi_conjugate_antisymmetry():
    sys = fig5b()
    mat = MaterialParams()
    omegas = np.linspace(0.5, 2.0, 31)
    a = dchi_domega(sys, mat, -omegas)
    b = -np.conj(dchi_domega(sys, mat, omegas))
    assert np.allclose(a, b, rtol=1e-12, atol=0)


def test_group_velocity_vacuum():
    sys = fig5b()
    assert group_velocity(sys, None, 1.2, prefactor=0.0) == pytest.approx(1.0)


def test_group_velocity_far_off_resonance():
    sys = fig5b()
    mat = MaterialParams()
    kappa = susceptibility_prefactor(mat, sys)
    assert group_velocity(sys, mat, 10.0) == pytest.approx(
        math.sqrt(1 - kappa / 100.0), abs=2e-3
    )
    assert abs(group_velocity(sys, mat, 100.0) - 1.0) < 1e-3


def test_group_velocity_precondition():
    with pytest.raises(PreconditionException):
        group_velocity(fig5b(), MaterialParams(), 0.0)


def test_scan_spectrum():
    spectrum = scan_spectrum(fig5b(), MaterialParams(), 0.5, 2.0, points=301)
    assert len(spectrum) == 301
    assert np.all(np.diff(spectrum.omegas) > 0)
    points = spectrum.points
    assert points[0].omega == pytest.approx(0.5)
    assert points[-1].omega == pytest.approx(2.0)
    assert all(p.n.real > 0 for p in points)
    sub = spectrum.sub_range(0.92, 1.045)
    assert sub.omegas[0] >= 0.92 and sub.omegas[-1] <= 1.045
    assert sub.system == spectrum.system
    assert np.allclose(sub.vg_over_c, group_velocity(fig5b(), MaterialParams(), sub.omegas))


def test_scan_spectrum_invalid():
    with pytest.raises(PreconditionException):
        scan_spectrum(fig5b(), MaterialParams(), 2.0, 0.5)
    with pytest.raises(PreconditionException):
        scan_spectrum(fig5b(), MaterialParams(), 0.5, 2.0, points=2)
