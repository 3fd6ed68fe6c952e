"""Leakage bounds and secrecy rates for the artificial-noise downlink.

Three regimes of eavesdropper knowledge are covered, each yielding a
high-SNR expansion ``leakage ~ dof * log2(SNR_E) + c`` in bits per symbol:

* **ergodic** — the eavesdropper knows its channel perfectly; ``dof``
  saturates at ``min((N_E - N_J)^+, K)`` with no coherence-time penalty.
* **noncoherent** — no channel knowledge at all; both a lower and an
  upper constant are produced around
  ``dof = min((N_E - N_J)^+, K) (1 - (K + N_J)/T)``.
* **partial** — data-part channel known, noise part unknown (e.g. the
  eavesdropper heard the training phase); constants around
  ``dof = K (1 - N_J/t')``.

A separate coherence-free ("universal") upper bound holds for any
eavesdropper processing at any SNR, and tends to the known-channel
data-part rate as the eavesdropper SNR drops.

The sampled expectation terms shared by an upper/lower constant pair are
estimated from the *same* draws, so the pair's gap is deterministic and
the ``c_lower <= c_upper`` invariant holds exactly, not just on average.

All public outputs are in bits; assembly is in nats internally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import NamedTuple

from .channel import SystemConfig, single_stream_view
from .montecarlo import McEstimate, MonteCarlo, SvKind
from .special import EULER_GAMMA, digamma, log_grassmann_volume

__all__ = [
    "LeakageBounds",
    "SaturatedBound",
    "LeakagePair",
    "SecrecyRates",
    "ergodic_highsnr",
    "noncoherent_bounds",
    "entropy_gap",
    "saturated_upper",
    "universal_upper",
    "coherent_data_leakage",
    "partial_coherent_bounds",
    "leakage_pair",
    "secrecy_rates",
    "secrecy_from_config",
]

_LN2 = math.log(2.0)
_LN_PI_E = math.log(math.pi) + 1.0
_BALANCE_TOL = 1e-9


@dataclass(frozen=True)
class LeakageBounds:
    """High-SNR leakage expansion ``dof * log2(SNR) + c`` for one regime.

    ``c_lower``/``c_upper`` bracket the constant term in bits; for the
    ergodic regime they coincide.  ``c_std_error`` is the Monte Carlo
    standard error of the sampled part, shared by both constants.
    """

    dof: float
    c_lower: float
    c_upper: float
    regime: str
    cfg: SystemConfig
    c_std_error: float = 0.0

    def __post_init__(self) -> None:
        if self.regime not in ("ergodic", "noncoherent", "partial"):
            raise ValueError(f"unknown regime {self.regime!r}")
        if self.dof < 0:
            raise ValueError(f"dof must be >= 0, got {self.dof}")
        if not (
            math.isfinite(self.c_lower)
            and math.isfinite(self.c_upper)
            and math.isfinite(self.c_std_error)
        ):
            raise ValueError("constants must be finite")
        tol = 1e-9 * max(1.0, abs(self.c_upper))
        if self.c_lower > self.c_upper + tol:
            raise ValueError(
                f"c_lower={self.c_lower!r} exceeds c_upper={self.c_upper!r}"
            )
        if self.c_std_error < 0:
            raise ValueError("c_std_error must be >= 0")

    def rate_at(self, snr_db: float, which: str = "upper") -> float:
        """Evaluate the expansion at an SNR, clamped below at zero bits."""
        if which == "upper":
            c = self.c_upper
        elif which == "lower":
            c = self.c_lower
        else:
            raise ValueError(f"which must be 'upper' or 'lower', got {which!r}")
        return max(0.0, self.dof * (snr_db / 10.0) * math.log2(10.0) + c)


class SaturatedBound(NamedTuple):
    """Exact and relaxed forms of the zero-dof saturation upper bound (bits)."""

    exact: float
    relaxed: float


@dataclass(frozen=True)
class LeakagePair:
    """Non-coherent and partial-coherent bounds for one configuration."""

    noncoherent: LeakageBounds
    partial: LeakageBounds


@dataclass(frozen=True)
class SecrecyRates:
    """Achievable secrecy sum rates (bits per symbol), clamped at zero.

    ``su_*`` treat the block as one joint codeword across users;
    ``mu_*`` charge every user the single-stream leakage separately.
    """

    su_noncoherent: float
    su_partial: float
    mu_noncoherent: float
    mu_partial: float


# ---------------------------------------------------------------------------
# Regime bounds
# ---------------------------------------------------------------------------


def ergodic_highsnr(cfg: SystemConfig, mc: MonteCarlo) -> LeakageBounds:
    """High-SNR expansion of the known-channel (ergodic) leakage."""
    c = mc.ergodic_constant(cfg)
    dof = float(min(max(cfg.N_E - cfg.N_J, 0), cfg.K))
    return LeakageBounds(
        dof=dof,
        c_lower=c.mean,
        c_upper=c.mean,
        regime="ergodic",
        cfg=cfg,
        c_std_error=c.std_error,
    )


def noncoherent_bounds(
    cfg: SystemConfig,
    mc: MonteCarlo,
    *,
    saturated_fallback: bool = False,
) -> LeakageBounds:
    """Upper/lower expansion constants for the channel-ignorant eavesdropper.

    Requires ``T >= K + N_J`` and both powers positive.  With
    ``saturated_fallback=True`` a short block ``T < K + N_J`` instead
    produces ``dof = 0`` with the saturation-regime constant (evaluated at
    the effective dimension ``T``) as ``c_upper`` and the trivial 0 as
    ``c_lower``.

    ``beta2 != 1`` is handled by exact rescaling: dividing the received
    block by ``beta`` maps the problem onto ``(alpha2/beta2, 1)`` with the
    noise floor scaled the same way, so the constants are those of the
    normalized configuration shifted by ``dof * log2(beta2)``.

    Raises
    ------
    ValueError
        If ``beta2`` is zero (the regime's premise needs an active noise
        subspace), ``T < K + N_J`` without the fallback, or the power
        ratio ``alpha2/beta2`` is so extreme that the two relaxations
        cross and no longer bracket anything.
    """
    ne, k, nj, mbar, t = cfg.N_E, cfg.K, cfg.N_J, cfg.mbar, cfg.T
    if cfg.beta2 <= 0.0 or nj == 0:
        raise ValueError("noncoherent bounds need N_J >= 1 and beta2 > 0")
    if cfg.beta2 != 1.0:
        norm = replace(cfg, alpha2=cfg.alpha2 / cfg.beta2, beta2=1.0)
        base = noncoherent_bounds(norm, mc, saturated_fallback=saturated_fallback)
        shift = base.dof * math.log2(cfg.beta2)
        return LeakageBounds(
            dof=base.dof,
            c_lower=base.c_lower + shift,
            c_upper=base.c_upper + shift,
            regime="noncoherent",
            cfg=cfg,
            c_std_error=base.c_std_error,
        )
    if t < mbar:
        if not saturated_fallback:
            raise ValueError(
                f"noncoherent bounds need T >= K + N_J = {mbar}, got T={t}; "
                "pass saturated_fallback=True for the zero-dof bound"
            )
        exact = ne * math.log(t) - (ne / t) * _psi_sum(t, t)
        return LeakageBounds(
            dof=0.0,
            c_lower=0.0,
            c_upper=exact / _LN2,
            regime="noncoherent",
            cfg=cfg,
        )
    slope_units = min(max(ne - nj, 0), k)
    w = 1.0 - mbar / t
    e_joint = mc.log_sv_sum(SvKind.JOINT, cfg)
    e_tail = mc.log_sv_sum(SvKind.AN_TAIL, cfg)
    log_vol = (
        log_grassmann_volume(t, min(mbar, ne))
        - log_grassmann_volume(max(mbar, ne), ne)
        + log_grassmann_volume(max(nj, ne), ne)
        - log_grassmann_volume(t - k, min(nj, ne))
    )
    d = (
        w * (e_joint.mean - e_tail.mean)
        - (ne / t) * _psi_sum(t, k)
        + log_vol / t
        - slope_units * w * _LN_PI_E
        - (k * ne / t) * (_LN_PI_E + math.log(cfg.alpha2))
    )
    c_upper = (ne / t) * (
        k * (_LN_PI_E + math.log(t))
        + nj * math.log(t / cfg.beta2)
        - (_psi_sum(t, mbar) - _psi_sum(t, k))
    ) + d
    c_lower = (ne / t) * (
        k * (_LN_PI_E + math.log(cfg.alpha2))
        + nj * math.log(cfg.beta2 / (t - k))
        + _psi_sum(t, mbar)
    ) + d
    se = w * math.hypot(e_joint.std_error, e_tail.std_error)
    return LeakageBounds(
        dof=slope_units * w,
        c_lower=c_lower / _LN2,
        c_upper=c_upper / _LN2,
        regime="noncoherent",
        cfg=cfg,
        c_std_error=se / _LN2,
    )


def entropy_gap(cfg: SystemConfig) -> float:
    """Closed-form gap ``c_upper - c_lower`` of the non-coherent pair, bits.

    Valid for fully-loaded unit-power configurations
    (``K + N_J = M``, ``alpha2 = beta2 = 1``) with ``T >= M``; the sampled
    terms cancel between the two constants, leaving only digamma sums::

        (N_E/T) [ M log2 T - sum_{i=1}^{M} psi(T-i+1) log2 e ]
      + (N_E/T) [ N_J log2(T-K) - sum_{i=1}^{N_J} psi(T-K-i+1) log2 e ]

    Decreases toward zero as ``T`` grows at fixed dimensions.
    """
    _require_fully_loaded(cfg, "entropy_gap")
    ne, k, nj, m, t = cfg.N_E, cfg.K, cfg.N_J, cfg.M, cfg.T
    if t < m:
        raise ValueError(f"entropy_gap needs T >= M = {m}, got T={t}")
    gap = (ne / t) * (m * math.log(t) - _psi_sum(t, m))
    if nj:
        gap += (ne / t) * (nj * math.log(t - k) - _psi_sum(t - k, nj))
    return gap / _LN2


def saturated_upper(cfg: SystemConfig) -> SaturatedBound:
    """Leakage cap in the fully-saturated block ``K + N_J = M = T``.

    Returns the exact cap ``N_E log2 T - (N_E/T) sum_i psi(T-i+1) log2 e``
    and its relaxation ``N_E log2(e^gamma T)``; they agree only at
    ``T = 1`` and the exact form is always the smaller.
    """
    _require_fully_loaded(cfg, "saturated_upper")
    if cfg.T != cfg.M:
        raise ValueError(
            f"saturated_upper needs T = M = {cfg.M}, got T={cfg.T}"
        )
    return _saturated_pair(cfg.N_E, cfg.T)


def universal_upper(cfg: SystemConfig, snr_e_db: float, mc: MonteCarlo) -> McEstimate:
    """Coherence-free leakage upper bound at a given eavesdropper SNR, bits.

    ``min(N_E, K) (1 - N_J/t')^+ log2(SNR) + c(sigma^2)`` with the
    constant sampled at ``sigma^2 = 10**(-snr/10)``.  Holds regardless of
    what the eavesdropper knows; as the SNR drops it approaches
    `coherent_data_leakage`.
    """
    s2 = 10.0 ** (-snr_e_db / 10.0)
    c = mc.universal_constant(cfg, s2)
    slope = min(cfg.N_E, cfg.K) * max(0.0, 1.0 - cfg.N_J / cfg.t_prime)
    value = slope * (snr_e_db / 10.0) * math.log2(10.0) + c.mean
    return McEstimate(value, c.std_error, c.trials, c.excluded)


def coherent_data_leakage(cfg: SystemConfig, snr_e_db: float, mc: MonteCarlo) -> McEstimate:
    """Known-channel leakage through the data part alone, in bits.

    ``E[logdet(I + SNR * G1^H G1)]`` — the low-SNR limit of
    `universal_upper` and the classical pilot-aided eavesdropper rate.
    """
    data_only = replace(cfg, N_J=0, beta2=0.0)
    return mc.ergodic_leakage(data_only, 10.0 ** (-snr_e_db / 10.0))


def partial_coherent_bounds(cfg: SystemConfig, mc: MonteCarlo) -> LeakageBounds:
    """Expansion constants when only the noise-part channel is unknown.

    Models an eavesdropper that learned the data-part channel during
    training and faces ``t_prime`` artificial-noise symbols per block.
    Requires ``N_E >= K + N_J`` and ``t_prime >= max(N_J, 1)``.
    """
    ne, k, nj, tp = cfg.N_E, cfg.K, cfg.N_J, cfg.t_prime
    if ne < cfg.mbar:
        raise ValueError(
            f"partial-coherent bounds need N_E >= K + N_J = {cfg.mbar}, got N_E={ne}"
        )
    if tp < max(nj, 1):
        raise ValueError(
            f"partial-coherent bounds need t_prime >= max(N_J, 1) = "
            f"{max(nj, 1)}, got t_prime={tp}"
        )
    w = 1.0 - nj / tp
    if nj:
        e_excess = mc.log_sv_sum(SvKind.AN_EXCESS, cfg)
        e_post = mc.log_sv_sum(SvKind.AN_POST, cfg)
        sampled = e_excess.mean - e_post.mean
        se = w * math.hypot(e_excess.std_error, e_post.std_error)
    else:
        sampled = 0.0
        se = 0.0
    d = (
        w * (sampled - k * _LN_PI_E)
        + _psi_sum(ne, k)
        + k * (_LN_PI_E + math.log(cfg.alpha2))
    )
    if nj:
        psi_tp = _psi_sum(tp, nj)
        c_upper = (
            nj * ne * math.log(tp)
            - k * nj * (_LN_PI_E + math.log(tp * cfg.beta2))
            - ne * psi_tp
        ) / tp + d
        c_lower = (
            (ne - k) * psi_tp
            - ne * nj * math.log(tp)
            - k * nj * (_LN_PI_E + math.log(cfg.beta2))
        ) / tp + d
    else:
        c_upper = c_lower = d
    return LeakageBounds(
        dof=k * w,
        c_lower=c_lower / _LN2,
        c_upper=c_upper / _LN2,
        regime="partial",
        cfg=cfg,
        c_std_error=se / _LN2,
    )


# ---------------------------------------------------------------------------
# Secrecy rates
# ---------------------------------------------------------------------------


def leakage_pair(cfg: SystemConfig, mc: MonteCarlo) -> LeakagePair:
    """Non-coherent and partial-coherent bounds for one configuration."""
    return LeakagePair(
        noncoherent=noncoherent_bounds(cfg, mc),
        partial=partial_coherent_bounds(cfg, mc),
    )


def secrecy_rates(
    cfg: SystemConfig,
    leakage_su: LeakagePair,
    leakage_mu: LeakagePair,
    snr_e_db: float,
    snr_l_db: float,
) -> SecrecyRates:
    """Secrecy sum rates from joint (``su``) and per-stream (``mu``) leakage.

    The leakage is charged at its upper constant.  ``leakage_su`` must be
    for ``cfg`` itself and ``leakage_mu`` for its single-stream view (one
    data stream, parent powers and post-training length).  The
    partial-coherent rates carry the training-overhead prefactor
    ``t_prime / T``.
    """
    if leakage_su.noncoherent.cfg.K != cfg.K:
        raise ValueError("leakage_su must be computed for cfg itself")
    mu_cfg = leakage_mu.noncoherent.cfg
    if mu_cfg.K != 1:
        raise ValueError("leakage_mu must be a single-stream view (K = 1)")
    if (mu_cfg.M, mu_cfg.N_E, mu_cfg.N_J, mu_cfg.T) != (
        cfg.M,
        cfg.N_E,
        cfg.N_J,
        cfg.T,
    ):
        raise ValueError("leakage_mu dimensions disagree with cfg")
    k, t, tp = cfg.K, cfg.T, cfg.t_prime
    cap = math.log2(1.0 + cfg.M * cfg.alpha2 * 10.0 ** (snr_l_db / 10.0))
    l_su_n = leakage_su.noncoherent.rate_at(snr_e_db, "upper")
    l_su_p = leakage_su.partial.rate_at(snr_e_db, "upper")
    l_mu_n = leakage_mu.noncoherent.rate_at(snr_e_db, "upper")
    l_mu_p = leakage_mu.partial.rate_at(snr_e_db, "upper")
    return SecrecyRates(
        su_noncoherent=max(0.0, k * cap - l_su_n),
        su_partial=(tp / t) * max(0.0, k * cap - l_su_p),
        mu_noncoherent=k * max(0.0, cap - l_mu_n),
        mu_partial=(k * tp / t) * max(0.0, cap - l_mu_p),
    )


def secrecy_from_config(
    cfg: SystemConfig,
    mc: MonteCarlo,
    snr_e_db: float | None = None,
    snr_l_db: float | None = None,
) -> SecrecyRates:
    """Convenience wrapper: build both leakage pairs, then the rates."""
    su = leakage_pair(cfg, mc)
    mu = leakage_pair(single_stream_view(cfg), mc)
    return secrecy_rates(
        cfg,
        su,
        mu,
        cfg.snr_e_db if snr_e_db is None else snr_e_db,
        cfg.snr_l_db if snr_l_db is None else snr_l_db,
    )


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------


def _psi_sum(t: int, m: int) -> float:
    """``sum_{i=1}^{m} psi(t - i + 1)`` in nats."""
    return math.fsum(digamma(t - i + 1) for i in range(1, m + 1))


def _saturated_pair(ne: int, t: int) -> SaturatedBound:
    exact = ne * math.log(t) - (ne / t) * _psi_sum(t, t)
    relaxed = ne * (EULER_GAMMA + math.log(t))
    return SaturatedBound(exact=exact / _LN2, relaxed=relaxed / _LN2)


def _require_fully_loaded(cfg: SystemConfig, name: str) -> None:
    if cfg.mbar != cfg.M:
        raise ValueError(f"{name} needs K + N_J = M, got {cfg.mbar} != {cfg.M}")
    if abs(cfg.alpha2 - 1.0) > _BALANCE_TOL or (
        cfg.N_J and abs(cfg.beta2 - 1.0) > _BALANCE_TOL
    ):
        raise ValueError(f"{name} needs unit powers alpha2 = beta2 = 1")
