"""Subarray (block-sparse) RF precoding and fixed antenna partitions.

Antenna indices in a `Partition` are 1-based positions in the flattened
array (row-major for planar arrays).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .array import ArrayGeometry
from .spectral import Covariance, hermitian_eig

__all__ = [
    "Partition",
    "FixedKind",
    "fixed_partition",
    "squared_tiling",
    "subarray_covariances",
    "design_rf_subarray",
    "subarray_mask",
    "subarray_objective",
]


@dataclass(frozen=True)
class Partition:
    """Ordered family of disjoint non-empty antenna sets covering ``1..N_TX``."""

    subsets: tuple

    def __post_init__(self):
        subsets = tuple(tuple(int(i) for i in s) for s in self.subsets)
        if not subsets:
            raise ValueError("partition needs at least one subset")
        if any(len(s) == 0 for s in subsets):
            raise ValueError("partition subsets must be non-empty")
        flat = [i for s in subsets for i in s]
        if len(set(flat)) != len(flat):
            raise ValueError("partition subsets must be disjoint")
        if set(flat) != set(range(1, len(flat) + 1)):
            raise ValueError(f"partition must cover antennas 1..{len(flat)} exactly")
        object.__setattr__(self, "subsets", subsets)

    @property
    def n_rf(self) -> int:
        return len(self.subsets)

    @property
    def n_tx(self) -> int:
        return sum(len(s) for s in self.subsets)

    @classmethod
    def from_labels(cls, labels) -> "Partition":
        """Build from 0-based block labels, one per antenna; blocks keep label order."""
        labels = np.asarray(labels, dtype=int)
        blocks = sorted(set(labels.tolist()))
        return cls(tuple(tuple((np.flatnonzero(labels == b) + 1).tolist()) for b in blocks))

    def labels(self) -> np.ndarray:
        out = np.empty(self.n_tx, dtype=int)
        for r, s in enumerate(self.subsets):
            out[np.asarray(s) - 1] = r
        return out

    def canonical(self) -> "Partition":
        """Same sets, each sorted, ordered by smallest member."""
        return Partition(tuple(sorted(tuple(sorted(s)) for s in self.subsets)))

    def to_text(self) -> str:
        return "".join(",".join(map(str, s)) + "\n" for s in self.subsets)

    @classmethod
    def from_text(cls, text: str) -> "Partition":
        subsets = []
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                subsets.append(tuple(int(tok) for tok in line.split(",")))
            except ValueError:
                raise ValueError(f"line {lineno}: expected comma-separated integers") from None
        return cls(tuple(subsets))

    def compact(self) -> str:
        """Single-field form ``1,2,3;4,5,6`` used inside CSV results."""
        return ";".join(",".join(map(str, s)) for s in self.subsets)


class FixedKind(str, enum.Enum):
    ADJACENT = "adjacent"
    INTERLACED = "interlaced"
    HORIZONTAL = "horizontal"
    VERTICAL = "vertical"
    SQUARED = "squared"


def squared_tiling(rows: int, cols: int, n_rf: int) -> tuple[int, int]:
    """Tile grid ``(tiles_down, tiles_across)`` whose tiles are closest to square.

    Ties go to fewer tiles down.
    """
    best = None
    for a in range(1, n_rf + 1):
        if n_rf % a:
            continue
        b = n_rf // a
        if rows % a or cols % b:
            continue
        skew = abs(math.log((rows // a) / (cols // b)))
        if best is None or skew < best[0] - 1e-12:
            best = (skew, a, b)
    if best is None:
        raise ValueError(f"cannot tile a {rows}x{cols} array into {n_rf} equal rectangles")
    return best[1], best[2]


def fixed_partition(kind, geom: ArrayGeometry, n_rf: int) -> Partition:
    """Equal-size partition of a fixed wiring type.

    ``adjacent`` takes consecutive flattened indices, ``interlaced`` strides
    by ``n_rf``; ``horizontal``/``vertical`` group whole rows/columns of a
    UPA, and ``squared`` uses the near-square rectangular tiling.
    """
    kind = FixedKind(kind)
    n = geom.n_elements
    if n_rf < 1 or n % n_rf:
        raise ValueError(f"{n} antennas cannot be split into {n_rf} equal subarrays")
    sub = n // n_rf
    idx = np.arange(1, n + 1)
    if kind is FixedKind.ADJACENT:
        return Partition(tuple(tuple(idx[r * sub:(r + 1) * sub].tolist()) for r in range(n_rf)))
    if kind is FixedKind.INTERLACED:
        return Partition(tuple(tuple(idx[r::n_rf].tolist()) for r in range(n_rf)))
    if geom.kind != "upa":
        raise ValueError(f"{kind.value} subarrays need a planar array")
    grid = idx.reshape(geom.rows, geom.cols)
    if kind is FixedKind.HORIZONTAL:
        a, b = n_rf, 1
    elif kind is FixedKind.VERTICAL:
        a, b = 1, n_rf
    else:
        a, b = squared_tiling(geom.rows, geom.cols, n_rf)
    if geom.rows % a or geom.cols % b:
        raise ValueError(f"{kind.value} subarrays do not fit a {geom.rows}x{geom.cols} array "
                         f"with {n_rf} RF chains")
    th, tw = geom.rows // a, geom.cols // b
    tiles = []
    for p in range(a):
        for q in range(b):
            tile = grid[p * th:(p + 1) * th, q * tw:(q + 1) * tw]
            tiles.append(tuple(sorted(tile.ravel().tolist())))
    return Partition(tuple(tiles))


def _check(cov: Covariance, part: Partition):
    if part.n_tx != cov.n:
        raise ValueError(f"partition covers {part.n_tx} antennas, covariance has {cov.n}")


def subarray_covariances(cov: Covariance, part: Partition) -> list[Covariance]:
    """Principal submatrices ``R_S`` for each subset, in partition order."""
    _check(cov, part)
    return [cov.sub(s) for s in part.subsets]


def subarray_mask(part: Partition) -> np.ndarray:
    """Boolean ``N_TX x N_RF`` support of a subarray precoder."""
    mask = np.zeros((part.n_tx, part.n_rf), dtype=bool)
    for r, s in enumerate(part.subsets):
        mask[np.asarray(s) - 1, r] = True
    return mask


def design_rf_subarray(cov: Covariance, part: Partition) -> np.ndarray:
    """Block-sparse RF precoder; column ``r`` is the dominant eigenvector of ``R_S_r``."""
    F = np.zeros((cov.n, part.n_rf), dtype=complex)
    for r, (s, sub) in enumerate(zip(part.subsets, subarray_covariances(cov, part))):
        _, V = hermitian_eig(sub)
        F[np.asarray(s) - 1, r] = V[:, 0]
    return F


def subarray_objective(cov: Covariance, part: Partition) -> float:
    """Relaxed objective of the best subarray precoder, ``K * sum_r lambda_1(R_S_r)``."""
    lam = [np.linalg.eigvalsh(sub.R)[-1] for sub in subarray_covariances(cov, part)]
    return float(cov.n_subcarriers * np.sum(lam))
