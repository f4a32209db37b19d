"""Transmit covariance, Hermitian eigendecomposition and joint water-filling."""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .channel import FreqChannel

__all__ = [
    "Covariance",
    "PowerAllocation",
    "NoUsableDimensionsError",
    "sample_covariance",
    "hermitian_eig",
    "water_fill",
    "dump_covariance_csv",
    "load_covariance_csv",
]

HERMITIAN_TOL = 1e-10


class NoUsableDimensionsError(ValueError):
    """Every channel gain is zero, so no power can be placed."""


@dataclass(frozen=True)
class Covariance:
    """Hermitian PSD matrix ``R`` averaged over ``n_subcarriers`` subcarriers.

    ``n_subcarriers`` carries the factor ``K`` that turns eigenvalues of ``R``
    into values of the relaxed (sum over subcarriers) objective.
    """

    R: np.ndarray = field(repr=False)
    n_subcarriers: int = 1

    def __post_init__(self):
        R = np.array(self.R, dtype=complex)
        if R.ndim != 2 or R.shape[0] != R.shape[1] or R.shape[0] < 1:
            raise ValueError("covariance must be a non-empty square matrix")
        scale = max(np.abs(R).max(), 1.0)
        if np.abs(R - R.conj().T).max() > HERMITIAN_TOL * scale:
            raise ValueError("covariance is not Hermitian")
        R = 0.5 * (R + R.conj().T)
        R.setflags(write=False)
        object.__setattr__(self, "R", R)
        if self.n_subcarriers < 1:
            raise ValueError("n_subcarriers must be positive")

    @property
    def n(self) -> int:
        return self.R.shape[0]

    def sub(self, indices) -> "Covariance":
        """Principal submatrix on 1-based ``indices`` (order preserved)."""
        idx = np.asarray(list(indices), dtype=int) - 1
        if idx.size == 0:
            raise ValueError("empty index set")
        if idx.min() < 0 or idx.max() >= self.n:
            raise ValueError(f"antenna index outside 1..{self.n}")
        return Covariance(self.R[np.ix_(idx, idx)], self.n_subcarriers)


@dataclass(frozen=True)
class PowerAllocation:
    p: np.ndarray
    mu: float


def sample_covariance(ch: FreqChannel) -> Covariance:
    """``R = (1/K) sum_k H[k]^* H[k]``."""
    H = ch.H
    if H.shape[0] == 0:
        raise ValueError("channel has no subcarriers")
    R = np.einsum("kri,krj->ij", H.conj(), H) / H.shape[0]
    return Covariance(R, H.shape[0])


def _fix_phase(V: np.ndarray) -> np.ndarray:
    # First entry with non-negligible magnitude becomes real positive.
    mag = np.abs(V)
    first = np.argmax(mag > 1e-10 * mag.max(axis=0, keepdims=True), axis=0)
    pivot = V[first, np.arange(V.shape[1])]
    return V * (np.abs(pivot) / pivot)[None, :]


def hermitian_eig(cov) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues in descending order and matching unit eigenvectors.

    Accepts a `Covariance` or a raw square matrix.  Each eigenvector is
    rotated so its first non-negligible entry is real and positive, which
    makes the output reproducible.
    """
    R = cov.R if isinstance(cov, Covariance) else np.asarray(cov, dtype=complex)
    if R.ndim != 2 or R.shape[0] != R.shape[1]:
        raise ValueError("expected a square matrix")
    scale = max(np.abs(R).max(), 1.0)
    if np.abs(R - R.conj().T).max() > HERMITIAN_TOL * scale:
        raise ValueError("matrix is not Hermitian")
    w, V = np.linalg.eigh(0.5 * (R + R.conj().T))
    order = np.argsort(-w, kind="stable")
    return w[order], _fix_phase(V[:, order])


def water_fill(gains, p_tot: float, sigma2: float = 1.0) -> PowerAllocation:
    """Joint water-filling ``p = (mu - sigma2 / g)^+`` over every entry of ``gains``.

    The water level is bracketed by bisection; the final level is then solved
    exactly on the identified active set so the budget is met to rounding.
    """
    g = np.asarray(gains, dtype=float)
    if np.any(g < 0) or not np.all(np.isfinite(g)):
        raise ValueError("gains must be finite and non-negative")
    if not p_tot > 0:
        raise ValueError("total power must be positive")
    if not sigma2 > 0:
        raise ValueError("noise variance must be positive")
    usable = g > 0
    if not usable.any():
        raise NoUsableDimensionsError("no usable dimensions")
    floor = np.full(g.shape, np.inf)
    floor[usable] = sigma2 / g[usable]

    def total(mu):
        return np.maximum(mu - floor[usable], 0.0).sum()

    lo, hi = 0.0, floor[usable].min() + p_tot
    for _ in range(400):
        mid = 0.5 * (lo + hi)
        if total(mid) < p_tot:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-12 * max(1.0, hi):
            break
    active = usable & (floor < hi)
    for _ in range(g.size + 1):
        mu = (p_tot + floor[active].sum()) / active.sum()
        refined = usable & (floor < mu)
        if np.array_equal(refined, active):
            break
        active = refined
    p = np.where(active, np.maximum(mu - floor, 0.0), 0.0)
    return PowerAllocation(p, float(mu))


def dump_covariance_csv(cov: Covariance, path) -> None:
    """Write ``i,j,re,im`` rows (1-based) plus a ``# K=`` comment line."""
    with open(path, "w", newline="") as fh:
        fh.write(f"# K={cov.n_subcarriers}\n")
        w = csv.writer(fh)
        w.writerow(["i", "j", "re", "im"])
        for i in range(cov.n):
            for j in range(cov.n):
                v = cov.R[i, j]
                w.writerow([i + 1, j + 1, repr(float(v.real)), repr(float(v.imag))])


def load_covariance_csv(path) -> Covariance:
    lines = Path(path).read_text().splitlines()
    K = 1
    body = []
    for line in lines:
        if line.startswith("#"):
            key, _, val = line[1:].strip().partition("=")
            if key.strip() == "K":
                K = int(val)
            continue
        if line.strip():
            body.append(line)
    rows = list(csv.reader(body))
    if not rows or [c.strip() for c in rows[0]] != ["i", "j", "re", "im"]:
        raise ValueError(f"{path}: expected header i,j,re,im")
    try:
        entries = [(int(r[0]), int(r[1]), float(r[2]) + 1j * float(r[3])) for r in rows[1:]]
    except (ValueError, IndexError) as exc:
        raise ValueError(f"{path}: malformed covariance row ({exc})") from None
    n = max(max(i, j) for i, j, _ in entries)
    R = np.full((n, n), np.nan, dtype=complex)
    for i, j, v in entries:
        R[i - 1, j - 1] = v
    if np.isnan(R.real).any():
        raise ValueError(f"{path}: covariance file is missing entries")
    return Covariance(R, K)
