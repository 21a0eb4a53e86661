# exact diagonalization of the truncated spin-boson model

import numpy as np
import pytest
import scipy.sparse as sp

from eittool import *


def weak_model(n_spins, **kwargs):
    return ExactModel(
        n_spins=n_spins, omegas=[1.0], couplings=[0.1 / np.sqrt(n_spins)], **kwargs
    )


def test_hamiltonian_is_hermitian():
    model = ExactModel(n_spins=3, omegas=[1.0, 1.5], couplings=[0.03, 0.05], boson_cutoff=3)
    for sector in ("full", "symmetric"):
        h = model.hamiltonian(sector)
        assert h.shape == (model.dimension(sector),) * 2
        assert abs(h - h.T).max() < 1e-14


def test_decoupled_spectrum():
    model = ExactModel(n_spins=2, omegas=[1.3], couplings=[0.0])
    energies = exact_spectrum(model)
    assert energies[:6] == pytest.approx([-1.0, 0.0, 0.0, 0.3, 1.0, 1.3], abs=1e-12)


def test_symmetric_sector_in_full_spectrum():
    model = ExactModel(n_spins=2, omegas=[1.2], couplings=[0.08], boson_cutoff=5)
    full = exact_spectrum(model)
    for e in exact_spectrum(model, sector="symmetric"):
        assert np.min(np.abs(full - e)) < 1e-10


def test_parity_commutes():
    model = ExactModel(n_spins=3, omegas=[1.0, 1.5], couplings=[0.03, 0.05], boson_cutoff=3)
    for sector in ("full", "symmetric"):
        h = model.hamiltonian(sector)
        p = model.parity_operator(sector)
        assert abs(h @ p - p @ h).max() < 1e-14
        assert abs(p @ p - sp.identity(p.shape[0])).max() == 0


def test_coupling_sign_invariance():
    model = ExactModel(n_spins=2, omegas=[1.0, 1.5], couplings=[0.03, 0.05], boson_cutoff=4)
    flipped = ExactModel(
        n_spins=2, omegas=[1.0, 1.5], couplings=[-0.03, 0.05], boson_cutoff=4
    )
    assert np.allclose(exact_spectrum(model), exact_spectrum(flipped), atol=1e-12)


def test_cutoff_convergence():
    low = exact_spectrum(weak_model(2, boson_cutoff=5))
    high = exact_spectrum(weak_model(2, boson_cutoff=7))
    assert np.max(np.abs(high[:4] - low[:4])) < 1e-6


def test_bosonization_error_decoupled():
    model = ExactModel(n_spins=2, omegas=[1.3], couplings=[0.0])
    assert bosonization_error(model) < 1e-12


def test_bosonization_error_small_at_two_spins():
    assert bosonization_error(weak_model(2)) < 0.02


def test_bosonization_error_decreases_with_spins():
    errors = [bosonization_error(weak_model(n)) for n in (2, 4, 6)]
    assert errors[0] > errors[1] > errors[2]
    assert bosonization_error(weak_model(2), level=2) > errors[0]


def test_bosonization_error_two_modes():
    model = ExactModel(n_spins=2, omegas=[1.0, 1.5], couplings=[0.03, 0.05])
    assert bosonization_error(model) < 0.02


def test_from_system():
    sys = SystemParams.double([1.0, 1.5], [1e-7, 1e-7], [0.03, 0.05])
    model = ExactModel.from_system(sys, n_spins=2, boson_cutoff=4)
    assert model.omegas == [1.0, 1.5]
    assert model.couplings == [0.03, 0.05]
    assert model.dimension() == 4 * 25
    assert model.dimension("symmetric") == 3 * 25
    bosonized = model.bosonized_system()
    assert bosonized.n_spins == 2
    assert bosonized.gammas == [0.0, 0.0, 0.0]


def test_invalid_models():
    with pytest.raises(InvalidParameterException):
        ExactModel(n_spins=EXACT_MAX_SPINS + 1)
    with pytest.raises(InvalidParameterException):
        ExactModel(omegas=[1.0, 1.5], couplings=[0.1])
    with pytest.raises(InvalidParameterException):
        ExactModel(omegas=[-1.0])
    with pytest.raises(HilbertSpaceTooLargeException):
        ExactModel(n_spins=8, omegas=[1.0, 1.5], couplings=[0.1, 0.1], boson_cutoff=30)
    with pytest.raises(PreconditionException):
        ExactModel().hamiltonian("antisymmetric")
    with pytest.raises(PreconditionException):
        bosonization_error(weak_model(2), level=3)
