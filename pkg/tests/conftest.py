import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from hybridbf import (ULA, ClusterConfig, OfdmGrid, freq_response, generate_clustered,
                      sample_covariance)

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def rng_of(seed):
    return np.random.Generator(np.random.PCG64(seed))


def random_hermitian(rng, n, psd=True):
    G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return G @ G.conj().T if psd else 0.5 * (G + G.conj().T)


def clustered_channel(seed, n_tx=9, n_rx=2, K=64, cfg=None):
    tx, rx, grid = ULA(n_tx), ULA(n_rx), OfdmGrid.desk(K)
    paths = generate_clustered(cfg or ClusterConfig(), tx, rx, grid, seed)
    return freq_response(paths, tx, rx, grid)


@pytest.fixture
def rng():
    return rng_of(1234)


@pytest.fixture(scope="session")
def ula9_channels():
    return [clustered_channel(s) for s in range(5)]


@pytest.fixture(scope="session")
def ula9_cov(ula9_channels):
    return sample_covariance(ula9_channels[0])


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            if rep.when != "call":
                continue
            props = dict(rep.user_properties)
            if "criterion" in props:
                lines.append((props["criterion"], "PASS" if rep.passed else "FAIL",
                              props.get("detail", "")))
    if lines:
        terminalreporter.section("acceptance criteria")
        for n, verdict, detail in sorted(lines):
            terminalreporter.write_line(f"criterion {n:>2}: {verdict}  {detail}")
