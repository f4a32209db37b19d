"""Clustered geometric wideband channels and their OFDM frequency responses.

Subcarriers are numbered ``k = 1..K``; ``FreqChannel.H[k - 1]`` holds the
``N_RX x N_TX`` response of subcarrier ``k``.  Delays are in seconds and the
sampling period ``T_s`` defaults to one, so delays read directly as sample
counts.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .array import ArrayGeometry, steering_matrix

__all__ = [
    "PathSet",
    "OfdmGrid",
    "ClusterConfig",
    "FreqChannel",
    "raised_cosine",
    "omega",
    "omega_matrix",
    "delay_taps",
    "freq_response",
    "freq_response_sum",
    "generate_clustered",
    "rayleigh_channel",
    "trial_seed",
    "dump_channel_csv",
    "load_channel_csv",
]


@dataclass(frozen=True)
class OfdmGrid:
    n_subcarriers: int = 64
    cp_length: int = 16
    sample_period: float = 1.0

    def __post_init__(self):
        if self.n_subcarriers < 1:
            raise ValueError("need at least one subcarrier")
        if not 0 <= self.cp_length <= self.n_subcarriers:
            raise ValueError("cyclic prefix length must lie in [0, K]")
        if not self.sample_period > 0:
            raise ValueError("sample period must be positive")

    @classmethod
    def desk(cls, n_subcarriers: int = 64) -> "OfdmGrid":
        """Grid with the 802.11ad-style cyclic prefix ``D = K / 4``."""
        return cls(n_subcarriers, n_subcarriers // 4)


@dataclass(frozen=True)
class PathSet:
    """Rays of a geometric channel.  All fields are 1-D arrays of equal length;
    angles are radians."""

    gain: np.ndarray
    delay: np.ndarray
    az_tx: np.ndarray
    el_tx: np.ndarray
    az_rx: np.ndarray
    el_rx: np.ndarray

    def __post_init__(self):
        arrays = {}
        for name in ("gain", "delay", "az_tx", "el_tx", "az_rx", "el_rx"):
            dtype = complex if name == "gain" else float
            a = np.atleast_1d(np.asarray(getattr(self, name), dtype=dtype)).copy()
            a.setflags(write=False)
            arrays[name] = a
            object.__setattr__(self, name, a)
        n = {a.shape for a in arrays.values()}
        if len(n) != 1 or arrays["gain"].ndim != 1:
            raise ValueError("path fields must be 1-D arrays of equal length")
        if arrays["gain"].size < 1:
            raise ValueError("a channel needs at least one path")
        if np.any(arrays["delay"] < 0):
            raise ValueError("path delays must be non-negative")

    @property
    def n_paths(self) -> int:
        return self.gain.size

    def check_grid(self, grid: OfdmGrid) -> None:
        if np.any(self.delay > grid.cp_length * grid.sample_period):
            raise ValueError("path delay exceeds the cyclic prefix")

    def __eq__(self, other):
        if not isinstance(other, PathSet):
            return NotImplemented
        return all(np.array_equal(getattr(self, f), getattr(other, f))
                   for f in ("gain", "delay", "az_tx", "el_tx", "az_rx", "el_rx"))

    __hash__ = None


@dataclass(frozen=True)
class ClusterConfig:
    """Cluster/subray model.  Angles are in degrees; ``angle_spread`` is the
    Laplacian scale of subray offsets around each cluster centre."""

    n_cluster: int = 8
    n_subray: int = 10
    angle_spread: float = 5.0
    az_range: float = 180.0
    el_range: float = 90.0

    def __post_init__(self):
        if self.n_cluster < 1 or self.n_subray < 1:
            raise ValueError("need at least one cluster and one subray")
        if self.angle_spread < 0:
            raise ValueError("angle spread must be non-negative")
        if self.az_range < 0 or self.el_range < 0:
            raise ValueError("angle ranges must be non-negative")


@dataclass(frozen=True)
class FreqChannel:
    """Per-subcarrier channel matrices, ``H.shape == (K, N_RX, N_TX)``."""

    H: np.ndarray = field(repr=False)

    def __post_init__(self):
        H = np.array(self.H, dtype=complex)
        if H.ndim == 2:
            H = H[None]
        if H.ndim != 3 or H.shape[0] < 1:
            raise ValueError("channel must have shape (K, N_RX, N_TX) with K >= 1")
        if not np.all(np.isfinite(H)):
            raise ValueError("channel entries must be finite")
        H.setflags(write=False)
        object.__setattr__(self, "H", H)

    @property
    def n_subcarriers(self) -> int:
        return self.H.shape[0]

    @property
    def n_rx(self) -> int:
        return self.H.shape[1]

    @property
    def n_tx(self) -> int:
        return self.H.shape[2]

    def __getitem__(self, k: int) -> np.ndarray:
        """Subcarrier ``k`` (1-based)."""
        if not 1 <= k <= self.n_subcarriers:
            raise IndexError(f"subcarrier {k} outside 1..{self.n_subcarriers}")
        return self.H[k - 1]

    def digest(self) -> str:
        """Short content hash, stable across runs for identical channels."""
        import hashlib

        return hashlib.sha1(np.ascontiguousarray(self.H).tobytes()).hexdigest()[:12]


def raised_cosine(t, rolloff: float = 1.0, sample_period: float = 1.0):
    """Raised-cosine pulse ``p(t)`` with ``p(0) = 1``.

    The removable singularity at ``|t| = T_s / (2 * rolloff)`` is replaced by
    its limit ``(pi / 4) * sinc(1 / (2 * rolloff))``.
    """
    if not 0.0 <= rolloff <= 1.0:
        raise ValueError("roll-off must lie in [0, 1]")
    x = np.asarray(t, dtype=float) / sample_period
    base = np.sinc(x)
    if rolloff == 0.0:
        return base if base.ndim else float(base)
    u = 2.0 * rolloff * x
    sing = np.isclose(np.abs(u), 1.0, rtol=0.0, atol=1e-12)
    safe_u = np.where(sing, 0.0, u)
    shaped = base * np.cos(0.5 * np.pi * safe_u) / (1.0 - safe_u**2)
    limit = 0.25 * np.pi * np.sinc(1.0 / (2.0 * rolloff))
    out = np.where(sing, limit, shaped)
    return out if out.ndim else float(out)


def omega_matrix(delays, grid: OfdmGrid, rolloff: float = 1.0) -> np.ndarray:
    """Delay weights for every path and subcarrier, shape ``(K, n_paths)``.

    Entry ``[k - 1, p]`` is ``sum_{d=0}^{D-1} p(d T_s - tau_p) exp(-2j pi k d / K)``.
    """
    tau = np.atleast_1d(np.asarray(delays, dtype=float))
    d = np.arange(grid.cp_length)
    taps = raised_cosine(d[:, None] * grid.sample_period - tau[None, :], rolloff,
                         grid.sample_period)
    k = np.arange(1, grid.n_subcarriers + 1)
    dft = np.exp(-2j * np.pi * np.outer(k, d) / grid.n_subcarriers)
    return dft @ np.atleast_2d(taps).reshape(grid.cp_length, tau.size)


def omega(tau: float, k: int, grid: OfdmGrid, rolloff: float = 1.0) -> complex:
    """Delay weight of a single path delay ``tau`` at subcarrier ``k`` (1-based)."""
    if not 1 <= k <= grid.n_subcarriers:
        raise ValueError(f"subcarrier index {k} outside 1..{grid.n_subcarriers}")
    total = 0j
    for d in range(grid.cp_length):
        p = raised_cosine(d * grid.sample_period - tau, rolloff, grid.sample_period)
        total += p * np.exp(-2j * np.pi * k * d / grid.n_subcarriers)
    return complex(total)


def _responses(paths: PathSet, tx: ArrayGeometry, rx: ArrayGeometry):
    a_t = steering_matrix(tx, paths.az_tx, paths.el_tx)
    a_r = steering_matrix(rx, paths.az_rx, paths.el_rx)
    return a_r, a_t


def freq_response(paths: PathSet, tx: ArrayGeometry, rx: ArrayGeometry,
                  grid: OfdmGrid, rolloff: float = 1.0) -> FreqChannel:
    """``H[k] = A_R D[k] A_T^*`` with ``D[k] = diag(alpha_p * omega_p[k])``."""
    paths.check_grid(grid)
    a_r, a_t = _responses(paths, tx, rx)
    dk = omega_matrix(paths.delay, grid, rolloff) * paths.gain[None, :]
    H = np.einsum("rp,kp,tp->krt", a_r, dk, a_t.conj(), optimize=True)
    return FreqChannel(H)


def freq_response_sum(paths: PathSet, tx: ArrayGeometry, rx: ArrayGeometry,
                      grid: OfdmGrid, rolloff: float = 1.0) -> FreqChannel:
    """Path-by-path accumulation of rank-one terms (reference for `freq_response`)."""
    paths.check_grid(grid)
    a_r, a_t = _responses(paths, tx, rx)
    H = np.zeros((grid.n_subcarriers, rx.n_elements, tx.n_elements), dtype=complex)
    for p in range(paths.n_paths):
        outer = np.outer(a_r[:, p], a_t[:, p].conj())
        for k in range(1, grid.n_subcarriers + 1):
            w = omega(paths.delay[p], k, grid, rolloff)
            H[k - 1] += paths.gain[p] * w * outer
    return FreqChannel(H)


def delay_taps(paths: PathSet, tx: ArrayGeometry, rx: ArrayGeometry,
               grid: OfdmGrid, rolloff: float = 1.0) -> np.ndarray:
    """Delay-domain matrices ``H[d]`` for ``d = 0..D-1``, shape ``(D, N_RX, N_TX)``."""
    a_r, a_t = _responses(paths, tx, rx)
    d = np.arange(grid.cp_length)
    taps = raised_cosine(d[:, None] * grid.sample_period - paths.delay[None, :],
                         rolloff, grid.sample_period)
    taps = np.atleast_2d(taps).reshape(grid.cp_length, paths.n_paths) * paths.gain
    return np.einsum("rp,dp,tp->drt", a_r, taps, a_t.conj(), optimize=True)


def trial_seed(base_seed: int, trial: int) -> int:
    """Seed of one Monte-Carlo trial; independent of trial execution order."""
    return (int(base_seed) ^ int(trial)) & 0xFFFF_FFFF_FFFF_FFFF


def generate_clustered(cfg: ClusterConfig, tx: ArrayGeometry, rx: ArrayGeometry,
                       grid: OfdmGrid, seed: int) -> PathSet:
    """Draw a clustered ray set.

    Cluster centres are uniform over ``[-range, range]`` (degrees) for both
    link ends, subray offsets are Laplacian, all subrays of a cluster share an
    integer sample delay drawn uniformly from ``{0, ..., D-1}``, and subray
    gains are i.i.d. CN(0, 1 / (n_cluster * n_subray)).

    The same number of draws is consumed for ULA and UPA so a seed produces
    the same azimuths for either geometry.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    nc, ns = cfg.n_cluster, cfg.n_subray
    shape = (nc, ns)

    def centres(span):
        return rng.uniform(-span, span, size=nc)

    az_t, el_t, az_r, el_r = (centres(cfg.az_range), centres(cfg.el_range),
                              centres(cfg.az_range), centres(cfg.el_range))
    n_delays = max(grid.cp_length, 1)
    tau = rng.integers(0, n_delays, size=nc) * grid.sample_period

    def spread(centre, clip):
        off = rng.laplace(0.0, cfg.angle_spread, size=shape) if cfg.angle_spread > 0 \
            else np.zeros(shape)
        ang = centre[:, None] + off
        return np.clip(ang, -90.0, 90.0) if clip else ang

    az_t = spread(az_t, False)
    el_t = spread(el_t, True)
    az_r = spread(az_r, False)
    el_r = spread(el_r, True)
    scale = np.sqrt(0.5 / (nc * ns))
    gain = scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
    rad = np.deg2rad
    return PathSet(
        gain=gain.ravel(),
        delay=np.repeat(tau, ns),
        az_tx=rad(az_t).ravel(),
        el_tx=rad(el_t).ravel(),
        az_rx=rad(az_r).ravel(),
        el_rx=rad(el_r).ravel(),
    )


def rayleigh_channel(n_rx: int, n_tx: int, n_subcarriers: int, seed: int) -> FreqChannel:
    """I.i.d. CN(0, 1) entries on every subcarrier and antenna pair."""
    rng = np.random.Generator(np.random.PCG64(seed))
    shape = (n_subcarriers, n_rx, n_tx)
    H = np.sqrt(0.5) * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
    return FreqChannel(H)


def dump_channel_csv(ch: FreqChannel, path) -> None:
    """Write ``k,rx,tx,re,im`` rows (all indices 1-based)."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["k", "rx", "tx", "re", "im"])
        K, nr, nt = ch.H.shape
        for k in range(K):
            for r in range(nr):
                for t in range(nt):
                    v = ch.H[k, r, t]
                    w.writerow([k + 1, r + 1, t + 1, repr(float(v.real)), repr(float(v.imag))])


def load_channel_csv(path) -> FreqChannel:
    text = Path(path).read_text().splitlines()
    rows = list(csv.reader(text))
    if not rows or [c.strip() for c in rows[0]] != ["k", "rx", "tx", "re", "im"]:
        raise ValueError(f"{path}: expected header k,rx,tx,re,im")
    body = rows[1:]
    try:
        idx = np.array([[int(r[0]), int(r[1]), int(r[2])] for r in body])
        val = np.array([float(r[3]) + 1j * float(r[4]) for r in body])
    except (ValueError, IndexError) as exc:
        raise ValueError(f"{path}: malformed channel row ({exc})") from None
    if idx.size == 0 or idx.min() < 1:
        raise ValueError(f"{path}: indices must be 1-based and non-empty")
    K, nr, nt = idx.max(axis=0)
    H = np.full((K, nr, nt), np.nan, dtype=complex)
    H[idx[:, 0] - 1, idx[:, 1] - 1, idx[:, 2] - 1] = val
    if np.isnan(H.real).any():
        raise ValueError(f"{path}: channel file is missing entries")
    return FreqChannel(H)
