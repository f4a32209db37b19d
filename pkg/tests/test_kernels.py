import os
import subprocess
import sys

import numpy as np
import pytest

from hybridbf import _accel
from hybridbf.partitioner import _sorted_pairs, exhaustive_partition, greedy_partition, Score
from hybridbf.spectral import Covariance, sample_covariance

from conftest import clustered_channel, random_hermitian, rng_of

needs_numba = pytest.mark.skipif(_accel.numba_backend is None, reason="numba not installed")


def test_env_flag_selects_numpy(monkeypatch):
    monkeypatch.setenv(_accel.ENV_FLAG, "1")
    assert _accel.numba_disabled()
    assert _accel.active_backend() is _accel.numpy_backend
    assert _accel.backend_name() == "numpy"
    monkeypatch.setenv(_accel.ENV_FLAG, "no")
    assert not _accel.numba_disabled()


@needs_numba
def test_default_backend_is_numba(monkeypatch):
    monkeypatch.delenv(_accel.ENV_FLAG, raising=False)
    assert _accel.backend_name() == "numba"


def test_env_flag_in_fresh_process():
    env = dict(os.environ, **{_accel.ENV_FLAG: "true"})
    out = subprocess.run([sys.executable, "-c",
                          "from hybridbf import _accel; print(_accel.backend_name())"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"


@needs_numba
@pytest.mark.parametrize("seed", range(40))
def test_greedy_backends_identical(seed):
    rng = rng_of(seed)
    n = int(rng.integers(4, 14))
    n_rf = int(rng.integers(1, n // 2 + 1))
    R = random_hermitian(rng, n)
    if seed % 4 == 0:
        R = np.round(np.abs(R))
    A = np.ascontiguousarray(np.abs(R))
    pi, pj = _sorted_pairs(A)
    a = _accel.numpy_backend.greedy_sweep(A, pi, pj, n_rf)
    b = _accel.numba_backend.greedy_sweep(A, pi, pj, n_rf)
    np.testing.assert_array_equal(np.asarray(a), np.asarray(b))


@needs_numba
def test_greedy_backends_on_channels():
    for seed in range(20):
        cov = sample_covariance(clustered_channel(seed, n_tx=12))
        assert (greedy_partition(cov, 4, _accel.numpy_backend)
                == greedy_partition(cov, 4, _accel.numba_backend))


@needs_numba
@pytest.mark.parametrize("n,k,equal", [(6, 2, False), (8, 3, False), (9, 3, True), (7, 7, False)])
def test_exhaustive_backends_agree(n, k, equal):
    cov = Covariance(random_hermitian(rng_of(n * 10 + k), n))
    a, va = exhaustive_partition(cov, k, Score.APPROX, equal, backend=_accel.numpy_backend)
    b, vb = exhaustive_partition(cov, k, Score.APPROX, equal, backend=_accel.numba_backend)
    assert va == pytest.approx(vb, rel=1e-12)
    assert a == b


@needs_numba
def test_exhaustive_counts_agree():
    A = np.abs(random_hermitian(rng_of(5), 7))
    for k, cap in [(2, 7), (3, 7), (3, 3)]:
        ca = _accel.numpy_backend.exhaustive_approx(A, k, cap)[2]
        cb = _accel.numba_backend.exhaustive_approx(A, k, cap)[2]
        assert ca == cb
