"""Deterministic Monte Carlo estimators for leakage quantities.

Every estimator here reduces to sample means of functionals of random
matrix spectra.  Determinism contract: a result depends only on the
arguments ``(..., trials, seed)`` — never on the worker count.  This is
achieved by giving every trial its own generator seeded from
``(seed, stream_tag, trial_index)``, evaluating trials in fixed-size
batches, and reducing the per-trial values in trial order; workers only
partition batches, so 1 and 8 workers produce bit-identical numbers.

Sampling notes
--------------
Product spectra ``L @ R`` with ``R`` a unit complex-Gaussian block of
``t`` columns are sampled through the Bartlett factorization of
``R @ R^H``: a lower-triangular ``A`` with ``|A_jj|^2 ~ Gamma(t - j + 1)``
and strict lower triangle i.i.d. ``CN(0, 1)`` satisfies
``A A^H =d R R^H`` exactly, so ``L @ A`` has exactly the squared singular
values of ``L @ R``.  This is an equality in distribution, not an
approximation; it cuts the dominant matrix product from ``O(m^2 t)`` to
``O(m^3)``.  The split check below deliberately forms explicit products
instead, so the two routes cross-validate.

Trials whose required smallest singular value collapses below ``1e-14``
of the largest (squared: ``1e-28``) are excluded from the mean and
counted in ``McEstimate.excluded``.

Units: ``expected_log_sv_sum`` returns nats (it is compared against
digamma identities); the leakage-level estimators return bits.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .channel import SystemConfig
from .linalg import sample_gaussian, squared_singular_values

__all__ = [
    "McEstimate",
    "SvKind",
    "MonteCarlo",
    "expected_log_sv_sum",
    "ergodic_leakage",
    "ergodic_constant",
    "universal_constant",
    "SplitCheckReport",
    "sv_split_check",
]

_LN2 = math.log(2.0)
_BATCH = 64
_SQ_FLAG_RTOL = 1e-28  # squared-singular-value exclusion threshold (1e-14^2)

# Fixed stream tags: part of the determinism contract, never renumber.
_TAG_ERGODIC = 7
_TAG_ERGODIC_CONST = 8
_TAG_UNIVERSAL = 9
_TAG_SPLIT = 10


@dataclass(frozen=True)
class McEstimate:
    """A Monte Carlo sample mean with its standard error.

    Attributes
    ----------
    mean : float
        Sample mean over the valid trials.
    std_error : float
        Sample standard deviation divided by ``sqrt(trials)``.
    trials : int
        Number of valid trials that entered the mean.
    excluded : int
        Trials dropped by the degenerate-spectrum guard.
    """

    mean: float
    std_error: float
    trials: int
    excluded: int = 0

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError(f"need trials >= 1, got {self.trials}")
        if not (math.isfinite(self.std_error) and self.std_error >= 0.0):
            raise ValueError(f"std_error must be finite and >= 0, got {self.std_error!r}")
        if not math.isfinite(self.mean):
            raise ValueError(f"mean must be finite, got {self.mean!r}")
        if self.excluded < 0:
            raise ValueError(f"excluded must be >= 0, got {self.excluded}")


class SvKind(Enum):
    """Which product spectrum ``expected_log_sv_sum`` averages.

    Members name the matrices by role in the transmission model:

    * ``JOINT`` — full effective channel (data and noise columns) times a
      unit-Gaussian block of ``T`` symbols; ``N_E x (K + N_J)`` by
      ``(K + N_J) x T``.
    * ``AN_TAIL`` — noise-part channel times the post-training unit block
      of ``T - K`` symbols.
    * ``AN_POST`` — noise-part channel times a unit block of ``t_prime``
      symbols.
    * ``AN_EXCESS`` — the last ``N_E - K`` rows of the noise-part channel
      times a unit block of ``t_prime`` symbols.
    * ``DATA`` — the effective data channel alone (``N_E x K``, variance
      ``alpha2``).
    * ``AN_INPUT`` — the unit noise block alone (``N_J x t_prime``).
    """

    JOINT = "joint"
    AN_TAIL = "an_tail"
    AN_EXCESS = "an_excess"
    AN_POST = "an_post"
    DATA = "data"
    AN_INPUT = "an_input"


_KIND_TAGS = {
    SvKind.JOINT: 1,
    SvKind.AN_TAIL: 2,
    SvKind.AN_EXCESS: 3,
    SvKind.AN_POST: 4,
    SvKind.DATA: 5,
    SvKind.AN_INPUT: 6,
}


@dataclass(frozen=True)
class MonteCarlo:
    """Bundle of sampling parameters reused across estimator calls.

    Repeated calls with equal arguments return identical numbers, so the
    bound assemblers can call these methods freely without caching.
    """

    trials: int = 20000
    seed: int = 0
    workers: int = 1

    def log_sv_sum(self, kind: SvKind, cfg: SystemConfig) -> McEstimate:
        return expected_log_sv_sum(
            kind, cfg, trials=self.trials, seed=self.seed, workers=self.workers
        )

    def ergodic_leakage(self, cfg: SystemConfig, sigma_z2: float) -> McEstimate:
        return ergodic_leakage(
            cfg, sigma_z2, trials=self.trials, seed=self.seed, workers=self.workers
        )

    def ergodic_constant(self, cfg: SystemConfig) -> McEstimate:
        return ergodic_constant(
            cfg, trials=self.trials, seed=self.seed, workers=self.workers
        )

    def universal_constant(self, cfg: SystemConfig, sigma_z2: float) -> McEstimate:
        return universal_constant(
            cfg, sigma_z2, trials=self.trials, seed=self.seed, workers=self.workers
        )


# ---------------------------------------------------------------------------
# Core engine
# ---------------------------------------------------------------------------


def _trial_rng(seed: int, tag: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence((seed, tag, index)))


def _check_run_args(trials: int, seed: int, workers: int) -> None:
    if not isinstance(trials, int) or trials < 2:
        raise ValueError(f"need integer trials >= 2, got {trials!r}")
    if not isinstance(seed, int) or seed < 0:
        raise ValueError(f"need integer seed >= 0, got {seed!r}")
    if not isinstance(workers, int) or workers < 1:
        raise ValueError(f"need integer workers >= 1, got {workers!r}")


def _collect(trials: int, batch_fn, workers: int) -> np.ndarray:
    """Evaluate ``batch_fn(start, count)`` over fixed batches, in order."""
    tasks = [(s, min(_BATCH, trials - s)) for s in range(0, trials, _BATCH)]
    if workers == 1:
        parts = [batch_fn(s, c) for s, c in tasks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda sc: batch_fn(*sc), tasks))
    return np.concatenate(parts)


def _summarize(values: np.ndarray) -> McEstimate:
    bad = ~np.isfinite(values)
    excluded = int(bad.sum())
    vals = values[~bad]
    if vals.size < 2:
        raise ValueError(
            f"only {vals.size} valid trials after excluding {excluded}; "
            "cannot form an estimate"
        )
    return McEstimate(
        mean=float(vals.mean()),
        std_error=float(vals.std(ddof=1) / math.sqrt(vals.size)),
        trials=int(vals.size),
        excluded=excluded,
    )


def _bartlett_factor(m: int, dof: int, rng: np.random.Generator) -> np.ndarray:
    """Lower-triangular ``A`` with ``A A^H`` complex-Wishart(m, dof).

    Requires ``dof >= m``.  Diagonal magnitudes are drawn first (one
    vectorized Gamma draw), then the strict lower triangle.
    """
    shapes = dof - np.arange(m)
    diag = np.sqrt(rng.gamma(shape=shapes))
    a = np.zeros((m, m), dtype=np.complex128)
    np.fill_diagonal(a, diag)
    if m > 1:
        lower = sample_gaussian(m, m, 1.0, rng)
        idx = np.tril_indices(m, k=-1)
        a[idx] = lower[idx]
    return a


def _log_sv_values(sq: np.ndarray, r: int) -> np.ndarray:
    """Per-trial ``sum log`` of the top ``r`` squared singular values.

    Rows whose ``r``-th value falls below the relative degeneracy
    threshold come back NaN (excluded upstream).
    """
    top = sq[:, :r]
    bad = top[:, -1] <= _SQ_FLAG_RTOL * sq[:, 0]
    with np.errstate(divide="ignore", invalid="ignore"):
        vals = np.sum(np.log(top), axis=1)
    vals[bad] = np.nan
    return vals


def _scaled_left(cfg: SystemConfig, rows: int, rng: np.random.Generator) -> np.ndarray:
    """Effective-channel draw: first K columns variance alpha2, rest beta2."""
    z = sample_gaussian(rows, cfg.mbar, 1.0, rng)
    scales = np.concatenate(
        [
            np.full(cfg.K, math.sqrt(cfg.alpha2)),
            np.full(cfg.N_J, math.sqrt(cfg.beta2)),
        ]
    )
    return z * scales


# ---------------------------------------------------------------------------
# Estimators
# ---------------------------------------------------------------------------


def expected_log_sv_sum(
    kind: SvKind,
    cfg: SystemConfig,
    trials: int = 20000,
    seed: int = 0,
    workers: int = 1,
) -> McEstimate:
    """Estimate ``E[sum_i ln lambda_i^2]`` for the chosen spectrum, in nats.

    The sum runs over the full generic rank of the matrix (the minimum of
    its dimensions).  Degenerate trials are excluded per the module policy.

    Raises
    ------
    ValueError
        If the kind's block-length precondition fails (``T >= K + N_J``
        for ``JOINT``/``AN_TAIL``, ``t_prime >= N_J`` for
        ``AN_EXCESS``/``AN_POST``, ``N_E > K`` for ``AN_EXCESS``).
    """
    _check_run_args(trials, seed, workers)
    if not isinstance(kind, SvKind):
        raise ValueError(f"kind must be an SvKind, got {kind!r}")
    draw, shape, r = _product_sampler(kind, cfg)
    if r == 0:
        return McEstimate(0.0, 0.0, trials, 0)
    tag = _KIND_TAGS[kind]

    def batch(start: int, count: int) -> np.ndarray:
        prods = np.empty((count,) + shape, dtype=np.complex128)
        for i in range(count):
            prods[i] = draw(_trial_rng(seed, tag, start + i))
        return _log_sv_values(squared_singular_values(prods), r)

    return _summarize(_collect(trials, batch, workers))


def _product_sampler(kind: SvKind, cfg: SystemConfig):
    """Return ``(draw, product_shape, generic_rank)`` for a spectrum kind."""
    ne, k, nj, mbar, t, tp = cfg.N_E, cfg.K, cfg.N_J, cfg.mbar, cfg.T, cfg.t_prime
    beta = math.sqrt(cfg.beta2)

    if kind is SvKind.JOINT:
        if t < mbar:
            raise ValueError(f"JOINT needs T >= K + N_J = {mbar}, got T={t}")

        def draw(rng):
            left = _scaled_left(cfg, ne, rng)
            return left @ _bartlett_factor(mbar, t, rng)

        return draw, (ne, mbar), min(mbar, ne)

    if kind is SvKind.AN_TAIL:
        if nj == 0:
            return None, (ne, 0), 0
        if t - k < nj:
            raise ValueError(f"AN_TAIL needs T - K >= N_J = {nj}, got T - K = {t - k}")

        def draw(rng):
            left = beta * sample_gaussian(ne, nj, 1.0, rng)
            return left @ _bartlett_factor(nj, t - k, rng)

        return draw, (ne, nj), min(nj, ne)

    if kind is SvKind.AN_EXCESS:
        if nj == 0:
            return None, (max(ne - k, 0), 0), 0
        if ne <= k:
            raise ValueError(f"AN_EXCESS needs N_E > K, got N_E={ne}, K={k}")
        if tp < nj:
            raise ValueError(f"AN_EXCESS needs t_prime >= N_J = {nj}, got {tp}")

        def draw(rng):
            left = beta * sample_gaussian(ne - k, nj, 1.0, rng)
            return left @ _bartlett_factor(nj, tp, rng)

        return draw, (ne - k, nj), min(nj, ne - k)

    if kind is SvKind.AN_POST:
        if nj == 0:
            return None, (ne, 0), 0
        if tp < nj:
            raise ValueError(f"AN_POST needs t_prime >= N_J = {nj}, got {tp}")

        def draw(rng):
            left = beta * sample_gaussian(ne, nj, 1.0, rng)
            return left @ _bartlett_factor(nj, tp, rng)

        return draw, (ne, nj), min(nj, ne)

    if kind is SvKind.DATA:
        alpha = math.sqrt(cfg.alpha2)

        def draw(rng):
            return alpha * sample_gaussian(ne, k, 1.0, rng)

        return draw, (ne, k), min(ne, k)

    if kind is SvKind.AN_INPUT:
        if nj == 0:
            return None, (0, tp), 0
        if tp < 1:
            raise ValueError(f"AN_INPUT needs t_prime >= 1, got {tp}")

        def draw(rng):
            return sample_gaussian(nj, tp, 1.0, rng)

        return draw, (nj, tp), min(nj, tp)

    raise ValueError(f"unknown kind {kind!r}")


def ergodic_leakage(
    cfg: SystemConfig,
    sigma_z2: float,
    trials: int = 20000,
    seed: int = 0,
    workers: int = 1,
) -> McEstimate:
    """Per-block information rate to the eavesdropper who knows its channel.

    Estimates, in bits per symbol,
    ``E[logdet(Gbar Gbar^H + s2 I) - logdet(G2 G2^H + s2 I)]`` with
    ``Gbar`` the ``N_E x (K + N_J)`` effective channel and ``G2`` its
    noise-part columns.  ``T`` plays no role here.
    """
    _check_run_args(trials, seed, workers)
    s2 = _check_sigma(sigma_z2)
    k = cfg.K

    def batch(start: int, count: int) -> np.ndarray:
        gbar = np.empty((count, cfg.N_E, cfg.mbar), dtype=np.complex128)
        for i in range(count):
            gbar[i] = _scaled_left(cfg, cfg.N_E, _trial_rng(seed, _TAG_ERGODIC, start + i))
        sq_full = squared_singular_values(gbar)
        sq_an = squared_singular_values(gbar[:, :, k:])
        full = np.sum(np.log1p(sq_full / s2), axis=1)
        an = np.sum(np.log1p(sq_an / s2), axis=1) if sq_an.shape[1] else 0.0
        return (full - an) / _LN2

    return _summarize(_collect(trials, batch, workers))


def ergodic_constant(
    cfg: SystemConfig,
    trials: int = 20000,
    seed: int = 0,
    workers: int = 1,
) -> McEstimate:
    """High-SNR offset of the ergodic leakage, in bits.

    Estimates ``E[sum ln lambda^2(Gbar) - sum ln lambda^2(G2)] / ln 2``
    with the sums over the full generic ranks; the pair of spectra comes
    from one realization, so the difference is estimated at its natural
    (low) variance.
    """
    _check_run_args(trials, seed, workers)
    r_full = min(cfg.mbar, cfg.N_E)
    r_an = min(cfg.N_J, cfg.N_E)

    def batch(start: int, count: int) -> np.ndarray:
        gbar = np.empty((count, cfg.N_E, cfg.mbar), dtype=np.complex128)
        for i in range(count):
            gbar[i] = _scaled_left(
                cfg, cfg.N_E, _trial_rng(seed, _TAG_ERGODIC_CONST, start + i)
            )
        full = _log_sv_values(squared_singular_values(gbar), r_full)
        if r_an:
            an = _log_sv_values(squared_singular_values(gbar[:, :, cfg.K :]), r_an)
        else:
            an = 0.0
        return (full - an) / _LN2

    return _summarize(_collect(trials, batch, workers))


def universal_constant(
    cfg: SystemConfig,
    sigma_z2: float,
    trials: int = 20000,
    seed: int = 0,
    workers: int = 1,
) -> McEstimate:
    """Constant term of the coherence-free leakage upper bound, in bits.

    Per trial, with ``lam_g`` the squared singular values of the data-part
    channel and ``lam_n`` those of the unit noise block of ``t_prime``
    columns::

        (1/t') sum_{i,j} log2(1 + lam_g[j] / (beta2 lam_n[i] + s2))
        + (1 - N_J/t')^+ sum_j log2(lam_g[j] + s2)

    The data-part channel is drawn before the noise-block factor.
    """
    _check_run_args(trials, seed, workers)
    s2 = _check_sigma(sigma_z2)
    ne, k, nj, tp = cfg.N_E, cfg.K, cfg.N_J, cfg.t_prime
    if tp < 1:
        raise ValueError(f"universal constant needs t_prime >= 1, got {tp}")
    alpha = math.sqrt(cfg.alpha2)
    coeff = max(0.0, 1.0 - nj / tp)
    m_small = min(nj, tp)

    def batch(start: int, count: int) -> np.ndarray:
        g1 = np.empty((count, ne, k), dtype=np.complex128)
        nfac = np.empty((count, m_small, m_small), dtype=np.complex128)
        for i in range(count):
            rng = _trial_rng(seed, _TAG_UNIVERSAL, start + i)
            g1[i] = alpha * sample_gaussian(ne, k, 1.0, rng)
            if m_small:
                nfac[i] = _bartlett_factor(m_small, max(nj, tp), rng)
        sq_g = squared_singular_values(g1)
        vals = coeff * np.sum(np.log(sq_g + s2), axis=1)
        if m_small:
            sq_n = squared_singular_values(nfac)
            denom = cfg.beta2 * sq_n[:, :, None] + s2
            vals = vals + np.sum(np.log1p(sq_g[:, None, :] / denom), axis=(1, 2)) / tp
        return vals / _LN2

    return _summarize(_collect(trials, batch, workers))


# ---------------------------------------------------------------------------
# Singular-value split check
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SplitCheckReport:
    """How well a noisy product's spectrum splits into signal and noise parts.

    For ``Y = Gbar @ Xbar + Z`` the top ``xi = min(K + N_J, N_E, T)``
    singular values of ``Y`` should track those of the noiseless product,
    and the trailing ``omega - xi`` should look like the spectrum of an
    independent ``(N_E - xi) x (T - xi)`` noise block.

    Attributes
    ----------
    top_rel_dev_median, top_rel_dev_max : float
        Median / max over all trials and all top positions of the relative
        deviation ``|sv(Y) - sv(product)| / sv(product)``.
    trailing_energy_ratio : float
        Total trailing energy over its expectation for the reference noise
        block (1.0 when the split is ideal; NaN if there is no trailing part).
    trailing_ks : float
        Two-sample KS distance between pooled trailing singular values and
        pooled reference-block singular values.
    """

    trials: int
    xi: int
    omega: int
    top_rel_dev_median: float
    top_rel_dev_max: float
    trailing_energy_ratio: float
    trailing_ks: float


def sv_split_check(
    cfg: SystemConfig,
    sigma_z2: float,
    trials: int = 200,
    seed: int = 0,
) -> SplitCheckReport:
    """Compare spectra of noisy and noiseless channel-block products.

    Forms explicit products (no factorization shortcuts), so this check
    also cross-validates the sampling used by the estimators above.
    """
    if trials < 2:
        raise ValueError(f"need trials >= 2, got {trials}")
    s2 = _check_sigma(sigma_z2)
    ne, mbar, t = cfg.N_E, cfg.mbar, cfg.T
    if t < mbar:
        raise ValueError(f"split check needs T >= K + N_J = {mbar}, got T={t}")
    xi = min(mbar, ne, t)
    omega = min(ne, t)
    noise_scale = math.sqrt(s2)
    top_devs = []
    trailing = []
    reference = []
    for i in range(trials):
        rng = _trial_rng(seed, _TAG_SPLIT, i)
        gbar = _scaled_left(cfg, ne, rng)
        xbar = sample_gaussian(mbar, t, 1.0, rng)
        z = sample_gaussian(ne, t, s2, rng)
        prod = gbar @ xbar
        sp = np.sqrt(squared_singular_values(prod))
        sy = np.sqrt(squared_singular_values(prod + z))
        top_devs.append(np.abs(sy[:xi] - sp[:xi]) / sp[:xi])
        if omega > xi:
            trailing.append(sy[xi:omega])
            ref = noise_scale * sample_gaussian(ne - xi, t - xi, 1.0, rng)
            reference.append(np.sqrt(squared_singular_values(ref)))
    devs = np.concatenate(top_devs)
    if omega > xi:
        tail = np.concatenate(trailing)
        ref = np.concatenate(reference)
        energy = float(np.sum(tail**2) / (trials * s2 * (ne - xi) * (t - xi)))
        ks = _two_sample_ks(tail, ref)
    else:
        energy = float("nan")
        ks = 0.0
    return SplitCheckReport(
        trials=trials,
        xi=xi,
        omega=omega,
        top_rel_dev_median=float(np.median(devs)),
        top_rel_dev_max=float(np.max(devs)),
        trailing_energy_ratio=energy,
        trailing_ks=ks,
    )


def _two_sample_ks(a: np.ndarray, b: np.ndarray) -> float:
    a = np.sort(a)
    b = np.sort(b)
    grid = np.concatenate([a, b])
    fa = np.searchsorted(a, grid, side="right") / a.size
    fb = np.searchsorted(b, grid, side="right") / b.size
    return float(np.max(np.abs(fa - fb)))


def _check_sigma(sigma_z2: float) -> float:
    s2 = float(sigma_z2)
    if not (math.isfinite(s2) and s2 > 0.0):
        raise ValueError(f"sigma_z2 must be finite and > 0, got {sigma_z2!r}")
    return s2
