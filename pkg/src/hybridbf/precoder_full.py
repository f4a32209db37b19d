"""Fully-connected hybrid precoding and the fully-digital reference.

The RF precoder is the dominant eigenbasis of the transmit covariance; the
baseband precoder is a per-subcarrier SVD of the effective channel with
water-filling across all subcarriers and streams.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .channel import FreqChannel
from .spectral import Covariance, hermitian_eig, water_fill

__all__ = [
    "PrecoderSet",
    "SingularGramError",
    "design_rf_fully",
    "gram_inv_sqrt",
    "effective_channel",
    "design_bb",
    "fully_digital",
    "phase_project",
]


class SingularGramError(np.linalg.LinAlgError):
    """``F_RF`` is (numerically) rank deficient."""


@dataclass(frozen=True)
class PrecoderSet:
    """``F_RF`` is ``N_TX x N_RF``; ``F_BB[k - 1]`` is ``N_RF x S``.

    ``powers[s, k - 1]`` is the water-filling power of stream ``s`` and
    ``mu`` the water level; both are already folded into ``F_BB``.
    """

    F_RF: np.ndarray = field(repr=False)
    F_BB: np.ndarray = field(repr=False)
    powers: np.ndarray = field(repr=False)
    mu: float = 0.0

    @property
    def n_rf(self) -> int:
        return self.F_RF.shape[1]

    @property
    def n_streams(self) -> int:
        return self.F_BB.shape[2]

    def precoders(self) -> np.ndarray:
        """Overall ``F_RF F_BB[k]`` stacked, shape ``(K, N_TX, S)``."""
        return np.einsum("tr,krs->kts", self.F_RF, self.F_BB)

    def total_power(self) -> float:
        return float(np.sum(np.abs(self.precoders()) ** 2))


def design_rf_fully(cov: Covariance, n_rf: int) -> np.ndarray:
    """Dominant ``n_rf`` eigenvectors of ``R`` as columns."""
    if not 1 <= n_rf <= cov.n:
        raise ValueError(f"n_rf must lie in 1..{cov.n}, got {n_rf}")
    _, V = hermitian_eig(cov)
    return V[:, :n_rf].copy()


def gram_inv_sqrt(F_RF: np.ndarray) -> np.ndarray:
    """``(F_RF^* F_RF)^{-1/2}``; raises `SingularGramError` if rank deficient."""
    F = np.asarray(F_RF, dtype=complex)
    sv = np.linalg.svd(F, compute_uv=False)
    if sv.size == 0 or sv[-1] <= 1e-9 * sv[0]:
        raise SingularGramError("singular RF Gram matrix")
    w, U = np.linalg.eigh(F.conj().T @ F)
    return (U / np.sqrt(w)) @ U.conj().T


def effective_channel(ch: FreqChannel, F_RF: np.ndarray) -> FreqChannel:
    """``H_eff[k] = H[k] F_RF (F_RF^* F_RF)^{-1/2}``."""
    F = np.asarray(F_RF, dtype=complex)
    if F.ndim != 2 or F.shape[0] != ch.n_tx:
        raise ValueError(f"F_RF must have {ch.n_tx} rows")
    return FreqChannel(ch.H @ (F @ gram_inv_sqrt(F)))


def _svd_precode(H: np.ndarray, n_streams: int, p_tot: float, sigma2: float):
    # Right singular vectors and joint water-filling for a (K, N_RX, N) stack.
    _, s, Vh = np.linalg.svd(H, full_matrices=False)
    s = s[:, :n_streams]
    V = Vh[:, :n_streams, :].conj().transpose(0, 2, 1)
    alloc = water_fill((s**2).T, p_tot, sigma2)
    return V * np.sqrt(alloc.p.T)[:, None, :], alloc


def design_bb(h_eff: FreqChannel, p_tot: float, sigma2: float,
              F_RF: np.ndarray) -> PrecoderSet:
    """Baseband precoders ``F_BB[k] = G^{-1/2} V_eff[k] P_eff[k]^{1/2}``."""
    F = np.asarray(F_RF, dtype=complex)
    n_rf = F.shape[1]
    if h_eff.n_tx != n_rf:
        raise ValueError("effective channel width must equal the number of RF chains")
    S = min(n_rf, h_eff.n_rx)
    fbb_hat, alloc = _svd_precode(h_eff.H, S, p_tot, sigma2)
    F_BB = gram_inv_sqrt(F) @ fbb_hat
    return PrecoderSet(F.copy(), F_BB, alloc.p, alloc.mu)


def fully_digital(ch: FreqChannel, p_tot: float, sigma2: float = 1.0) -> PrecoderSet:
    """Unconstrained per-subcarrier SVD precoding (``F_RF = I``)."""
    S = min(ch.n_tx, ch.n_rx)
    F_BB, alloc = _svd_precode(ch.H, S, p_tot, sigma2)
    return PrecoderSet(np.eye(ch.n_tx, dtype=complex), F_BB, alloc.p, alloc.mu)


def phase_project(F_RF: np.ndarray, mask=None) -> np.ndarray:
    """Nearest unit-modulus matrix, ``exp(j * angle(F_RF))`` entrywise.

    Zero entries map to 1.  With a boolean ``mask`` only the masked entries
    are projected and the rest are set to zero, which keeps a subarray
    precoder block-sparse.
    """
    F = np.exp(1j * np.angle(np.asarray(F_RF, dtype=complex)))
    if mask is not None:
        F = np.where(mask, F, 0.0)
    return F
