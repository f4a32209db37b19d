"""Antenna array geometries and their steering vectors.

Elements have unit-modulus responses (no ``1/sqrt(N)`` scaling).  Planar
arrays are flattened row-major: all columns of row 0, then row 1, and so on.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["ArrayGeometry", "ULA", "UPA", "steering_vector", "steering_matrix"]


@dataclass(frozen=True)
class ArrayGeometry:
    """Uniform linear (``kind="ula"``) or planar (``kind="upa"``) array.

    A ULA is stored as a single row: ``rows == 1`` and ``cols == n``.
    ``spacing`` is the element pitch in wavelengths.
    """

    kind: str
    rows: int
    cols: int
    spacing: float = 0.5

    def __post_init__(self):
        if self.kind not in ("ula", "upa"):
            raise ValueError(f"unknown array kind {self.kind!r}")
        if self.rows < 1 or self.cols < 1:
            raise ValueError("array must have at least one element")
        if self.kind == "ula" and self.rows != 1:
            raise ValueError("a ULA has exactly one row")
        if not self.spacing > 0:
            raise ValueError("element spacing must be positive")

    @property
    def n_elements(self) -> int:
        return self.rows * self.cols

    def __str__(self):
        if self.kind == "ula":
            return f"ULA({self.cols})"
        return f"UPA({self.rows}x{self.cols})"


def ULA(n: int, spacing: float = 0.5) -> ArrayGeometry:
    return ArrayGeometry("ula", 1, n, spacing)


def UPA(rows: int, cols: int, spacing: float = 0.5) -> ArrayGeometry:
    return ArrayGeometry("upa", rows, cols, spacing)


def steering_matrix(geom: ArrayGeometry, azimuth, elevation=None) -> np.ndarray:
    """Stack steering vectors for many directions as columns.

    Parameters
    ----------
    geom : ArrayGeometry
    azimuth, elevation : array_like, radians
        Broadcast against each other.  ``elevation`` is ignored for a ULA.

    Returns
    -------
    ndarray, shape (n_elements, n_directions), complex
    """
    az = np.atleast_1d(np.asarray(azimuth, dtype=float))
    el = np.zeros_like(az) if elevation is None else np.asarray(elevation, dtype=float)
    az, el = np.broadcast_arrays(az, np.atleast_1d(el))
    if not (np.all(np.isfinite(az)) and np.all(np.isfinite(el))):
        raise ValueError("steering angles must be finite")
    d = 2.0 * np.pi * geom.spacing
    if geom.kind == "ula":
        m = np.arange(geom.cols)[:, None]
        phase = d * m * np.sin(az)[None, :]
    else:
        r, c = np.divmod(np.arange(geom.n_elements), geom.cols)
        phase = d * (r[:, None] * np.sin(el)[None, :]
                     + c[:, None] * (np.cos(el) * np.sin(az))[None, :])
    return np.exp(1j * phase)


def steering_vector(geom: ArrayGeometry, azimuth: float, elevation: float = 0.0) -> np.ndarray:
    """Array response toward one direction, shape ``(n_elements,)``."""
    return steering_matrix(geom, azimuth, elevation)[:, 0]
