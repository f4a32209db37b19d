"""Mutual information, relaxed objectives, Jensen study and scheme comparison.

Rates are in bits.  Experiments use unit noise variance and a total power
``P_tot = K * SNR``, so the average transmit power per subcarrier is SNR.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .array import ArrayGeometry
from .channel import FreqChannel
from .partitioner import (DEFAULT_EXHAUSTIVE_LIMIT, Score, exhaustive_partition,
                          greedy_partition)
from .precoder_full import (PrecoderSet, design_bb, design_rf_fully, effective_channel,
                            fully_digital, gram_inv_sqrt, phase_project)
from .precoder_subarray import (FixedKind, Partition, design_rf_subarray, fixed_partition,
                                subarray_mask, subarray_objective)
from .spectral import Covariance, sample_covariance

__all__ = [
    "mutual_information",
    "relaxed_objective",
    "relaxed_objective_trace",
    "jensen_pair",
    "snr_power",
    "Scheme",
    "SchemeResult",
    "parse_scheme",
    "applicable_fixed_kinds",
    "design_scheme",
    "evaluate_design",
    "run_scheme",
]


def mutual_information(ch: FreqChannel, pre: PrecoderSet, sigma2: float = 1.0):
    """``sum_k log2 det(I + H F F^* H^* / sigma2)`` and its per-subcarrier mean."""
    T = ch.H @ pre.precoders()
    S = T.shape[2]
    gram = np.eye(S) + np.conj(np.transpose(T, (0, 2, 1))) @ T / sigma2
    _, logdet = np.linalg.slogdet(gram)
    total = float(np.sum(logdet) / np.log(2.0))
    return total, total / ch.n_subcarriers


def relaxed_objective(ch: FreqChannel, F_RF: np.ndarray) -> float:
    """``sum_k ||H[k] F_RF (F_RF^* F_RF)^{-1/2}||_F^2``."""
    return float(np.sum(np.abs(effective_channel(ch, F_RF).H) ** 2))


def relaxed_objective_trace(cov: Covariance, F_RF: np.ndarray) -> float:
    """Same quantity as `relaxed_objective`, as ``K tr(P R)`` with ``P`` the
    orthogonal projector onto the column space of ``F_RF``."""
    Q = np.asarray(F_RF, dtype=complex) @ gram_inv_sqrt(F_RF)
    return float(cov.n_subcarriers * np.trace(Q.conj().T @ cov.R @ Q).real)


def jensen_pair(ch: FreqChannel, sigma2: float = 1.0) -> tuple[float, float]:
    """Exact normalised rate and its Jensen upper bound.

    ``exact = mean_{k,s} log2(1 + lambda_s^2 / sigma2)`` and
    ``upper = log2(1 + mean_{k,s} lambda_s^2 / sigma2)`` over the
    ``S = min(N_RX, N_TX)`` singular values of every ``H[k]``.
    """
    s = np.linalg.svd(ch.H, compute_uv=False)
    g = s**2 / sigma2
    exact = float(np.mean(np.log2(1.0 + g)))
    upper = float(np.log2(1.0 + np.mean(g)))
    return exact, upper


def snr_power(snr_db: float, n_subcarriers: int) -> float:
    return n_subcarriers * 10.0 ** (snr_db / 10.0)


@dataclass(frozen=True)
class Scheme:
    """A precoding architecture.

    ``family`` is one of ``fully_digital``, ``fully_connected``, ``fixed``,
    ``dynamic_greedy``, ``dynamic_exhaustive`` and ``dynamic_best_of_fixed``.
    """

    family: str
    constrained: bool = False
    kind: FixedKind | None = None
    score: Score = Score.EXACT
    equal_size_only: bool = False
    kinds: tuple = ()

    @property
    def label(self) -> str:
        parts = [self.family]
        if self.family == "fixed":
            parts.append(self.kind.value)
        if self.family == "dynamic_exhaustive":
            parts.append(self.score.value)
            if self.equal_size_only:
                parts.append("equal")
        if self.family == "dynamic_best_of_fixed" and self.kinds:
            parts.append("+".join(k.value for k in self.kinds))
        if self.constrained:
            parts.append("constrained")
        return ":".join(parts)

    @property
    def uses_partition(self) -> bool:
        return self.family not in ("fully_digital", "fully_connected")


_FAMILIES = {"fully_digital", "fully_connected", "fixed", "dynamic_greedy",
             "dynamic_exhaustive", "dynamic_best_of_fixed"}


def parse_scheme(token: str) -> Scheme:
    """Parse ``family[:option...]``, e.g. ``fixed:adjacent`` or
    ``dynamic_exhaustive:approx`` or ``fully_connected:constrained``."""
    fields_ = [t.strip().lower() for t in token.strip().split(":") if t.strip()]
    if not fields_ or fields_[0] not in _FAMILIES:
        raise ValueError(f"unknown scheme {token!r}")
    family, opts = fields_[0], fields_[1:]
    kw = {}
    if "constrained" in opts:
        if family == "fully_digital":
            raise ValueError("fully_digital has no RF stage to constrain")
        kw["constrained"] = True
        opts = [o for o in opts if o != "constrained"]
    if family == "fixed":
        if len(opts) != 1:
            raise ValueError(f"{token!r}: fixed scheme needs exactly one kind")
        kw["kind"] = FixedKind(opts[0])
        opts = []
    elif family == "dynamic_exhaustive":
        for o in opts:
            if o in ("exact", "approx"):
                kw["score"] = Score(o)
            elif o == "equal":
                kw["equal_size_only"] = True
            else:
                raise ValueError(f"{token!r}: unknown option {o!r}")
        opts = []
    elif family == "dynamic_best_of_fixed" and opts:
        kw["kinds"] = tuple(FixedKind(k) for k in opts[0].split("+"))
        opts = opts[1:]
    if opts:
        raise ValueError(f"{token!r}: unexpected options {opts}")
    return Scheme(family, **kw)


def applicable_fixed_kinds(geom: ArrayGeometry, n_rf: int) -> list[FixedKind]:
    kinds = []
    for kind in FixedKind:
        try:
            fixed_partition(kind, geom, n_rf)
        except ValueError:
            continue
        kinds.append(kind)
    return kinds


@dataclass
class SchemeResult:
    precoder: PrecoderSet = field(repr=False)
    spectral_efficiency: float
    relaxed_objective: float
    partition: Partition | None = None


def design_scheme(scheme: Scheme, cov: Covariance, geom: ArrayGeometry, n_rf: int,
                  exhaustive_limit: int = DEFAULT_EXHAUSTIVE_LIMIT):
    """RF precoder (and partition, for subarray schemes) of ``scheme``.

    Returns ``(F_RF, partition)``; ``F_RF`` is ``None`` for the fully-digital
    scheme.
    """
    fam = scheme.family
    if fam == "fully_digital":
        return None, None
    if fam == "fully_connected":
        F = design_rf_fully(cov, n_rf)
        return (phase_project(F) if scheme.constrained else F), None
    if fam == "fixed":
        part = fixed_partition(scheme.kind, geom, n_rf)
    elif fam == "dynamic_greedy":
        part = greedy_partition(cov, n_rf)
    elif fam == "dynamic_exhaustive":
        part, _ = exhaustive_partition(cov, n_rf, scheme.score, scheme.equal_size_only,
                                       limit=exhaustive_limit)
    else:
        kinds = scheme.kinds or tuple(applicable_fixed_kinds(geom, n_rf))
        if not kinds:
            raise ValueError(f"no fixed subarray type fits {geom} with {n_rf} RF chains")
        candidates = [fixed_partition(k, geom, n_rf) for k in kinds]
        values = [subarray_objective(cov, p) for p in candidates]
        part = candidates[int(np.argmax(values))]
    F = design_rf_subarray(cov, part)
    if scheme.constrained:
        F = phase_project(F, subarray_mask(part))
    return F, part


def evaluate_design(ch: FreqChannel, F_RF, snr_db: float, sigma2: float = 1.0,
                    partition: Partition | None = None) -> SchemeResult:
    """Baseband design plus metrics for a given RF precoder (``None`` = digital)."""
    p_tot = snr_power(snr_db, ch.n_subcarriers) * sigma2
    if F_RF is None:
        pre = fully_digital(ch, p_tot, sigma2)
        relaxed = float(np.sum(np.abs(ch.H) ** 2))
    else:
        h_eff = effective_channel(ch, F_RF)
        pre = design_bb(h_eff, p_tot, sigma2, F_RF)
        relaxed = float(np.sum(np.abs(h_eff.H) ** 2))
    _, se = mutual_information(ch, pre, sigma2)
    return SchemeResult(pre, se, relaxed, partition)


def run_scheme(scheme: Scheme, ch: FreqChannel, geom: ArrayGeometry, n_rf: int,
               snr_db: float, cov: Covariance | None = None, sigma2: float = 1.0,
               exhaustive_limit: int = DEFAULT_EXHAUSTIVE_LIMIT) -> SchemeResult:
    """Design and evaluate one scheme on one channel."""
    cov = sample_covariance(ch) if cov is None else cov
    F, part = design_scheme(scheme, cov, geom, n_rf, exhaustive_limit)
    return evaluate_design(ch, F, snr_db, sigma2, part)

