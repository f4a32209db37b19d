import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hybridbf.array import ULA, steering_vector
from hybridbf.channel import ClusterConfig, FreqChannel, PathSet, freq_response, rayleigh_channel
from hybridbf.channel import OfdmGrid
from hybridbf.evaluator import mutual_information, relaxed_objective
from hybridbf.precoder_full import (PrecoderSet, SingularGramError, design_bb, design_rf_fully,
                                    effective_channel, fully_digital, gram_inv_sqrt,
                                    phase_project)
from hybridbf.spectral import Covariance, sample_covariance

from conftest import clustered_channel, random_hermitian, rng_of


def rand_complex(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def test_rank_one_rf_aligns_with_steering():
    tx, rx = ULA(8), ULA(2)
    ps = PathSet([1.0], [0.0], [0.5], [0.0], [0.2], [0.0])
    ch = freq_response(ps, tx, rx, OfdmGrid(8, 2))
    F = design_rf_fully(sample_covariance(ch), 2)
    a = steering_vector(tx, 0.5)
    assert abs(np.vdot(F[:, 0], a)) == pytest.approx(np.linalg.norm(a), rel=1e-12)


def test_identity_covariance_objective():
    cov = Covariance(np.eye(6), n_subcarriers=4)
    F = design_rf_fully(cov, 3)
    Q = F @ gram_inv_sqrt(F)
    assert 4 * np.trace(Q.conj().T @ cov.R @ Q).real == pytest.approx(12.0)


def test_random_covariance_objective_is_top_eigs(ula9_channels):
    ch = ula9_channels[1]
    cov = sample_covariance(ch)
    lam = np.sort(np.linalg.eigvalsh(cov.R))[::-1]
    F = design_rf_fully(cov, 2)
    assert relaxed_objective(ch, F) == pytest.approx(64 * lam[:2].sum(), rel=1e-10)


def test_fully_connected_beats_random_orthonormal(ula9_channels):
    ch = ula9_channels[2]
    best = relaxed_objective(ch, design_rf_fully(sample_covariance(ch), 3))
    rng = rng_of(0)
    for _ in range(100):
        Q, _ = np.linalg.qr(rand_complex(rng, 9, 3))
        assert relaxed_objective(ch, Q) <= best * (1 + 1e-12)


def test_rf_rejects_bad_count():
    with pytest.raises(ValueError):
        design_rf_fully(Covariance(np.eye(3)), 4)


def test_effective_channel_identity_columns():
    ch = rayleigh_channel(2, 5, 3, seed=1)
    h = effective_channel(ch, np.eye(5)[:, :3])
    np.testing.assert_allclose(h.H, ch.H[:, :, :3], atol=1e-14)


def test_effective_channel_invariant_under_basis_change():
    rng = rng_of(4)
    ch = rayleigh_channel(3, 6, 4, seed=4)
    F = rand_complex(rng, 6, 3)
    A = rand_complex(rng, 3, 3)
    h1, h2 = effective_channel(ch, F), effective_channel(ch, F @ A)
    # equal up to a unitary on the right: compare Gram matrices and projectors
    np.testing.assert_allclose(h1.H @ h1.H.conj().transpose(0, 2, 1),
                               h2.H @ h2.H.conj().transpose(0, 2, 1), atol=1e-8)
    # orthonormal F gives the plain product
    Q, _ = np.linalg.qr(F)
    np.testing.assert_allclose(np.linalg.norm(effective_channel(ch, Q).H, axis=(1, 2)),
                               np.linalg.norm(ch.H @ Q, axis=(1, 2)), rtol=1e-12)


def test_singular_gram():
    F = np.ones((4, 2), dtype=complex)
    with pytest.raises(SingularGramError, match="singular RF Gram"):
        gram_inv_sqrt(F)
    with pytest.raises(np.linalg.LinAlgError):
        effective_channel(rayleigh_channel(2, 4, 1, 0), F)


def test_scalar_baseband():
    h = FreqChannel(np.array([[[0.6 - 0.8j]]]))
    pre = design_bb(h, 3.0, 1.0, np.eye(1))
    assert abs(pre.F_BB[0, 0, 0]) == pytest.approx(np.sqrt(3.0))
    assert pre.total_power() == pytest.approx(3.0)


def test_identical_subcarriers_identical_baseband():
    H1 = rand_complex(rng_of(2), 2, 4)
    h = FreqChannel(np.stack([H1, H1]))
    pre = design_bb(h, 10.0, 1.0, np.eye(4))
    np.testing.assert_allclose(np.abs(pre.F_BB[0]), np.abs(pre.F_BB[1]), atol=1e-12)
    np.testing.assert_allclose(pre.powers[:, 0], pre.powers[:, 1], atol=1e-12)


@pytest.mark.parametrize("seed", range(3))
def test_mi_matches_singular_value_form(seed):
    ch = clustered_channel(seed, n_tx=8, n_rx=3, K=16)
    F = design_rf_fully(sample_covariance(ch), 3)
    h = effective_channel(ch, F)
    pre = design_bb(h, 16 * 10.0, 1.0, F)
    s = np.linalg.svd(h.H, compute_uv=False)
    oracle = np.sum(np.log2(1 + s.T ** 2 * pre.powers))
    total, _ = mutual_information(ch, pre, 1.0)
    assert total == pytest.approx(oracle, rel=1e-10)
    assert pre.total_power() == pytest.approx(160.0, rel=1e-9)
    assert pre.n_streams == 3 and pre.n_rf == 3


def test_mi_invariant_to_rf_basis():
    ch = clustered_channel(7, n_tx=8, n_rx=2, K=16)
    F = design_rf_fully(sample_covariance(ch), 3)
    A = rand_complex(rng_of(9), 3, 3)
    mi = [mutual_information(ch, design_bb(effective_channel(ch, G), 320.0, 1.0, G))[0]
          for G in (F, F @ A)]
    assert mi[1] == pytest.approx(mi[0], rel=1e-8)


def test_rf_chains_cover_paths_reach_digital():
    cfg = ClusterConfig(n_cluster=3, n_subray=1)
    ch = clustered_channel(5, n_tx=10, n_rx=3, K=16, cfg=cfg)
    F = design_rf_fully(sample_covariance(ch), 3)
    hyb = mutual_information(ch, design_bb(effective_channel(ch, F), 160.0, 1.0, F))[1]
    dig = mutual_information(ch, fully_digital(ch, 160.0))[1]
    assert hyb == pytest.approx(dig, rel=1e-8)


def test_fully_digital_power_and_shape():
    ch = rayleigh_channel(2, 5, 6, seed=3)
    pre = fully_digital(ch, 12.0, 0.5)
    assert pre.F_BB.shape == (6, 5, 2)
    assert pre.total_power() <= 12.0 * (1 + 1e-9)
    assert pre.total_power() == pytest.approx(12.0, rel=1e-9)


def test_phase_project_conventions():
    U = np.exp(1j * rng_of(1).uniform(-np.pi, np.pi, (4, 2)))
    np.testing.assert_allclose(phase_project(U), U, atol=1e-15)
    assert phase_project(np.zeros((1, 1)))[0, 0] == 1
    mask = np.array([[True, False], [False, True]])
    np.testing.assert_array_equal(phase_project(np.ones((2, 2)), mask), mask.astype(complex))


def test_phase_project_is_nearest():
    rng = rng_of(8)
    F = rand_complex(rng, 8, 2)
    d = np.linalg.norm(F - phase_project(F))
    for _ in range(1000):
        U = np.exp(1j * rng.uniform(-np.pi, np.pi, (8, 2)))
        assert d <= np.linalg.norm(F - U)


@pytest.mark.parametrize("seed", range(5))
def test_constrained_never_beats_unconstrained(seed):
    ch = clustered_channel(seed, n_tx=8, n_rx=2, K=16)
    F = design_rf_fully(sample_covariance(ch), 2)
    mi = [mutual_information(ch, design_bb(effective_channel(ch, G), 160.0, 1.0, G))[0]
          for G in (F, phase_project(F))]
    assert mi[1] <= mi[0] * (1 + 1e-12)


@given(st.integers(0, 10_000), st.integers(1, 4), st.floats(0.1, 1e3))
def test_power_budget_property(seed, n_rf, p_tot):
    ch = rayleigh_channel(2, 5, 3, seed)
    rng = rng_of(seed)
    F = rand_complex(rng, 5, n_rf)
    pre = design_bb(effective_channel(ch, F), p_tot, 1.0, F)
    assert isinstance(pre, PrecoderSet)
    assert abs(pre.total_power() - p_tot) <= 1e-9 * p_tot
    assert np.all(pre.powers >= 0)
