"""Dynamic antenna-to-RF-chain partitioning.

The largest eigenvalue of a covariance submatrix is approximated by its
normalised entrywise l1 norm,

    lhat(S) = (1 / |S|) * sum_{i in S} sum_{j in S} |R_ij|,

which lies between the trace-based eigenvalue bounds for Hermitian matrices
with a constant diagonal and equals the known lower bound for exponential
correlation.  `greedy_partition` grows subarrays from the most correlated
antenna pairs using this surrogate; `exhaustive_partition` is the
enumeration oracle.  Index sets are 1-based antenna numbers throughout.
"""
from __future__ import annotations

import enum
import math
from functools import lru_cache

import numpy as np

from . import _accel
from .precoder_subarray import Partition
from .spectral import Covariance

__all__ = [
    "Score",
    "SearchTooLargeError",
    "DEFAULT_EXHAUSTIVE_LIMIT",
    "approx_lambda1",
    "lambda1_bounds",
    "exp_corr_matrix",
    "exp_corr_lb",
    "stirling2",
    "equal_size_count",
    "f_metric",
    "approx_objective",
    "exact_objective",
    "greedy_partition",
    "exhaustive_partition",
]

DEFAULT_EXHAUSTIVE_LIMIT = 10**7


class SearchTooLargeError(ValueError):
    pass


class Score(str, enum.Enum):
    EXACT = "exact"
    APPROX = "approx"


def _indices(cov: Covariance, S) -> np.ndarray:
    idx = np.asarray(sorted(S) if isinstance(S, (set, frozenset)) else list(S), dtype=int) - 1
    if idx.size and (idx.min() < 0 or idx.max() >= cov.n):
        raise ValueError(f"antenna index outside 1..{cov.n}")
    return idx


def approx_lambda1(cov: Covariance, S) -> float:
    """Normalised l1 surrogate of ``lambda_1(R_S)``; diagonal terms included."""
    idx = _indices(cov, S)
    if idx.size == 0:
        raise ValueError("approx_lambda1 needs a non-empty index set")
    return float(np.abs(cov.R[np.ix_(idx, idx)]).sum() / idx.size)


def lambda1_bounds(cov_S) -> tuple[float, float]:
    """Trace-based bounds ``m + s / sqrt(n-1) <= lambda_1 <= m + s * sqrt(n-1)``.

    ``m = tr(R)/n`` and ``s^2 = tr(R^2)/n - m^2``; ``s`` is evaluated as
    ``||R - m I||_F / sqrt(n)``, which is the same quantity without the
    cancellation.  For ``n = 1`` both bounds equal the single entry.
    """
    R = cov_S.R if isinstance(cov_S, Covariance) else np.asarray(cov_S, dtype=complex)
    n = R.shape[0]
    m = float(np.trace(R).real) / n
    if n == 1:
        return m, m
    dev = R - m * np.eye(n)
    s = math.sqrt(float(np.sum(np.abs(dev) ** 2)) / n)
    root = math.sqrt(n - 1)
    return m + s / root, m + s * root


def exp_corr_matrix(rho: complex, n: int) -> np.ndarray:
    """Exponential correlation matrix, ``R_ij = rho^(j-i)`` above the diagonal."""
    i, j = np.indices((n, n))
    lag = j - i
    r, phase = abs(rho), np.angle(rho)
    return r ** np.abs(lag) * np.exp(1j * phase * lag)


def exp_corr_lb(rho_abs: float, n: int) -> float:
    """``(1+r)/(1-r) - 2 r (1 - r^n) / (n (1-r)^2)`` for ``r = |rho| < 1``."""
    r = float(rho_abs)
    if not 0.0 <= r < 1.0:
        raise ValueError("|rho| must lie in [0, 1)")
    if n < 1:
        raise ValueError("n must be positive")
    return (1.0 + r) / (1.0 - r) - 2.0 * r * (1.0 - r**n) / (n * (1.0 - r) ** 2)


@lru_cache(maxsize=None)
def stirling2(n: int, k: int) -> int:
    """Number of ways to split ``n`` labelled items into ``k`` non-empty blocks."""
    if n < 0 or k < 0:
        raise ValueError("arguments must be non-negative")
    if k > n:
        return 0
    if n == k:
        return 1
    if k == 0:
        return 0
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)


def equal_size_count(n_tx: int, n_rf: int) -> int:
    """Partitions of ``n_tx`` items into ``n_rf`` unlabelled blocks of equal size."""
    if n_rf < 1 or n_tx % n_rf:
        raise ValueError("n_rf must divide n_tx")
    sub = n_tx // n_rf
    return math.factorial(n_tx) // (math.factorial(sub) ** n_rf * math.factorial(n_rf))


def f_metric(cov: Covariance, S, n_sel: int, r: int, n_rf: int) -> float:
    """Per-set metric of the greedy sweep.

    Zero for an empty set and for the unassigned pool (``r = 0``) once all
    ``n_rf`` groups have been seeded; the l1 surrogate otherwise.
    """
    if len(S) == 0 or (n_sel == n_rf and r == 0):
        return 0.0
    return approx_lambda1(cov, S)


def approx_objective(cov: Covariance, part: Partition) -> float:
    """Sum of l1 surrogates over the subsets (no factor ``K``)."""
    return float(sum(approx_lambda1(cov, s) for s in part.subsets))


def exact_objective(cov: Covariance, part: Partition) -> float:
    """Sum of exact largest eigenvalues over the subsets (no factor ``K``)."""
    return float(sum(np.linalg.eigvalsh(cov.sub(s).R)[-1] for s in part.subsets))


def _sorted_pairs(A: np.ndarray):
    i, j = np.triu_indices(A.shape[0], 1)
    order = np.argsort(-A[i, j], kind="stable")
    return np.ascontiguousarray(i[order]), np.ascontiguousarray(j[order])


def greedy_partition(cov: Covariance, n_rf: int, backend=None) -> Partition:
    """Greedy pair-driven partition into ``n_rf`` subarrays.

    Pairs ``(i, j)`` are visited by decreasing ``|R_ij|`` (ties in
    lexicographic order).  Two unassigned antennas seed a new group while
    fewer than ``n_rf`` exist, and afterwards join the group whose surrogate
    grows most.  Antennas in different sets may be relocated when that raises
    the sum of the two affected surrogates; moves that would empty a group,
    or leave too few unassigned antennas to seed the remaining groups, are
    skipped.  Antennas still unassigned after the sweep join the group with
    the largest surrogate gain, lowest index first.
    """
    if n_rf < 1:
        raise ValueError("n_rf must be at least 1")
    if cov.n < 2 * n_rf:
        raise ValueError(f"greedy partitioning needs N_TX >= 2 * n_rf (got {cov.n}, {n_rf})")
    A = np.ascontiguousarray(np.abs(cov.R))
    pi, pj = _sorted_pairs(A)
    impl = backend or _accel.active_backend()
    owner = impl.greedy_sweep(A, pi, pj, n_rf)
    return Partition.from_labels(np.asarray(owner) - 1)


def _exact_search(cov: Covariance, n_rf: int, cap: int):
    cache: dict[int, float] = {}
    weights = 1 << np.arange(cov.n, dtype=object)
    best, best_labels, count = -np.inf, None, 0
    for labels in _accel.restricted_growth_strings(cov.n, n_rf, cap):
        lab = np.asarray(labels)
        total = 0.0
        for b in range(n_rf):
            members = np.flatnonzero(lab == b)
            key = int(weights[members].sum())
            val = cache.get(key)
            if val is None:
                val = float(np.linalg.eigvalsh(cov.R[np.ix_(members, members)])[-1])
                cache[key] = val
            total += val
        count += 1
        if total > best:
            best, best_labels = total, lab
    return best_labels, best, count


def exhaustive_partition(cov: Covariance, n_rf: int, score=Score.EXACT,
                         equal_size_only: bool = False,
                         limit: int = DEFAULT_EXHAUSTIVE_LIMIT,
                         backend=None) -> tuple[Partition, float]:
    """Best partition by enumeration of all set partitions into ``n_rf`` blocks.

    Returns the maximiser of ``sum_r score(R_S_r)`` (exact largest eigenvalue
    or the l1 surrogate, without the factor ``K``) and its value.  The first
    maximiser in restricted-growth-string order wins ties.
    """
    score = Score(score)
    n = cov.n
    if not 1 <= n_rf <= n:
        raise ValueError(f"n_rf must lie in 1..{n}")
    size = equal_size_count(n, n_rf) if equal_size_only else stirling2(n, n_rf)
    if size > limit:
        raise SearchTooLargeError(
            f"instance too large for exhaustive search ({size} candidates > limit {limit})")
    cap = n // n_rf if equal_size_only else n
    if score is Score.APPROX:
        impl = backend or _accel.active_backend()
        A = np.ascontiguousarray(np.abs(cov.R))
        labels, value, _ = impl.exhaustive_approx(A, n_rf, cap)
    else:
        labels, value, _ = _exact_search(cov, n_rf, cap)
    return Partition.from_labels(labels), float(value)
