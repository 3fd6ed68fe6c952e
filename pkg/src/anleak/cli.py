"""Command-line interface: sweeps, single-point bounds, planning, validation.

Subcommands
-----------
``sweep``
    Read a key=value config file describing a scenario, an axis to sweep
    and a list of metrics; write one CSV with a row per (axis value,
    metric).  Output is byte-identical for equal (config, seed) no matter
    how many workers run the sampling.
``bounds``
    Evaluate every regime at a single configuration and print
    ``key=value`` lines.
``plan``
    Antenna planning from carrier frequency and user speed.
``validate``
    Run the built-in statistical self-checks; exit 1 if any fails.

Exit codes: 0 success, 1 validation failure, 2 configuration/usage error.

Config files are plain ``key=value`` lines (``#`` comments and blank
lines ignored).  Recognized keys: the scenario fields ``M K N_E N_J T
alpha2 beta2 snr_e_db snr_l_db``, the sweep fields ``axis values
metrics``, and the run fields ``trials seed workers output``.  Command
line flags override file values.  The default sweep trial count can also
be set through the environment variable ``ANLEAK_TRIALS`` (lowest
precedence); the chosen value and its source are echoed in the CSV's
leading comment line.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass, replace

import numpy as np

from . import special
from .bounds import (
    LeakageBounds,
    entropy_gap,
    ergodic_highsnr,
    noncoherent_bounds,
    partial_coherent_bounds,
    universal_upper,
)
from .channel import (
    SystemConfig,
    average_transmit_power,
    balanced_config,
    check_effective_distributions,
    exact_transmit_power,
    single_stream_view,
)
from .errors import ConfigError
from .montecarlo import (
    MonteCarlo,
    SvKind,
    ergodic_leakage,
    expected_log_sv_sum,
    sv_split_check,
)
from .planner import (
    DEFAULT_SYMBOL_DURATION,
    DeploymentParams,
    coherence_symbols,
    coherence_time,
    doppler_shift,
    required_antennas,
)

__all__ = [
    "METRICS",
    "AXES",
    "SweepSpec",
    "SweepRow",
    "parse_config_file",
    "build_sweep_spec",
    "run_sweep",
    "write_sweep_csv",
    "CheckResult",
    "ValidationReport",
    "run_validation",
    "main",
]

METRICS = (
    "ergodic",
    "noncoh_lb",
    "noncoh_ub",
    "partial_lb",
    "partial_ub",
    "universal",
    "secrecy_su",
    "secrecy_mu",
)

AXES = ("snr_e_db", "T_gamma", "N_E", "N_J")

DEFAULT_SWEEP_TRIALS = 2000
DEFAULT_POINT_TRIALS = 20000
TRIALS_ENV_VAR = "ANLEAK_TRIALS"

_CONFIG_KEYS = frozenset(
    {
        "M",
        "K",
        "N_E",
        "N_J",
        "T",
        "alpha2",
        "beta2",
        "snr_e_db",
        "snr_l_db",
        "axis",
        "values",
        "metrics",
        "trials",
        "seed",
        "workers",
        "output",
    }
)


@dataclass(frozen=True)
class SweepSpec:
    """A fully-resolved sweep request."""

    cfg: SystemConfig
    axis: str
    values: tuple[float, ...]
    metrics: tuple[str, ...]
    trials: int
    seed: int
    workers: int = 1
    trials_source: str = "default"


@dataclass(frozen=True)
class SweepRow:
    """One CSV row: metric evaluated at one axis value.

    ``value``/``std_error`` are None when the metric's precondition fails
    at this point; ``reason`` then carries a stable reason code.
    """

    axis_value: float
    metric: str
    value: float | None
    std_error: float | None
    reason: str = ""


# ---------------------------------------------------------------------------
# Config parsing
# ---------------------------------------------------------------------------


def parse_config_file(path: str) -> dict[str, str]:
    """Read a key=value config file into a dict (strict keys, no dupes)."""
    entries: dict[str, str] = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path!r}: {exc}") from exc
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _CONFIG_KEYS:
            raise ConfigError(
                f"{path}:{lineno}: unknown key {key!r} "
                f"(known: {', '.join(sorted(_CONFIG_KEYS))})"
            )
        if key in entries:
            raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
        entries[key] = value
    return entries


def _get_int(entries: dict[str, str], key: str, default: int | None = None) -> int:
    if key not in entries:
        if default is None:
            raise ConfigError(f"missing required key {key!r}")
        return default
    try:
        return int(entries[key])
    except ValueError as exc:
        raise ConfigError(f"key {key!r}: not an integer: {entries[key]!r}") from exc


def _get_float(
    entries: dict[str, str], key: str, default: float | None = None
) -> float | None:
    if key not in entries:
        return default
    try:
        return float(entries[key])
    except ValueError as exc:
        raise ConfigError(f"key {key!r}: not a number: {entries[key]!r}") from exc


def build_system_config(entries: dict[str, str]) -> SystemConfig:
    """Build a power-balanced configuration from config entries."""
    try:
        return balanced_config(
            M=_get_int(entries, "M"),
            K=_get_int(entries, "K"),
            N_E=_get_int(entries, "N_E"),
            N_J=_get_int(entries, "N_J"),
            T=_get_int(entries, "T"),
            alpha2=_get_float(entries, "alpha2"),
            beta2=_get_float(entries, "beta2"),
            snr_e_db=_get_float(entries, "snr_e_db", 30.0),
            snr_l_db=_get_float(entries, "snr_l_db", 30.0),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def build_sweep_spec(
    entries: dict[str, str],
    *,
    trials: int | None = None,
    seed: int | None = None,
    workers: int | None = None,
) -> SweepSpec:
    """Resolve a sweep spec from config entries plus flag overrides."""
    cfg = build_system_config(entries)
    axis = entries.get("axis")
    if axis is None:
        raise ConfigError("missing required key 'axis'")
    if axis not in AXES:
        raise ConfigError(f"unknown axis {axis!r} (known: {', '.join(AXES)})")
    if "values" not in entries:
        raise ConfigError("missing required key 'values'")
    try:
        values = tuple(float(v) for v in entries["values"].split(",") if v.strip())
    except ValueError as exc:
        raise ConfigError(f"key 'values': {exc}") from exc
    if not values:
        raise ConfigError("key 'values': need at least one value")
    if axis in ("N_E", "N_J") and any(not v.is_integer() or v < 0 for v in values):
        raise ConfigError(f"axis {axis}: values must be nonnegative integers")
    metrics_str = entries.get("metrics", ",".join(METRICS))
    metrics = tuple(m.strip() for m in metrics_str.split(",") if m.strip())
    for m in metrics:
        if m not in METRICS:
            raise ConfigError(f"unknown metric {m!r} (known: {', '.join(METRICS)})")
    if not metrics:
        raise ConfigError("key 'metrics': need at least one metric")

    if trials is not None:
        resolved_trials, source = trials, "flag"
    elif "trials" in entries:
        resolved_trials, source = _get_int(entries, "trials"), "config"
    elif os.environ.get(TRIALS_ENV_VAR):
        try:
            resolved_trials = int(os.environ[TRIALS_ENV_VAR])
        except ValueError as exc:
            raise ConfigError(
                f"environment variable {TRIALS_ENV_VAR} is not an integer"
            ) from exc
        source = f"env:{TRIALS_ENV_VAR}"
    else:
        resolved_trials, source = DEFAULT_SWEEP_TRIALS, "default"
    if resolved_trials < 2:
        raise ConfigError(f"trials must be >= 2, got {resolved_trials}")

    resolved_seed = seed if seed is not None else _get_int(entries, "seed", 0)
    if resolved_seed < 0:
        raise ConfigError(f"seed must be >= 0, got {resolved_seed}")
    resolved_workers = workers if workers is not None else _get_int(entries, "workers", 1)
    if resolved_workers < 1:
        raise ConfigError(f"workers must be >= 1, got {resolved_workers}")
    return SweepSpec(
        cfg=cfg,
        axis=axis,
        values=values,
        metrics=metrics,
        trials=resolved_trials,
        seed=resolved_seed,
        workers=resolved_workers,
        trials_source=source,
    )


# ---------------------------------------------------------------------------
# Metric evaluation
# ---------------------------------------------------------------------------


class _Point:
    """Caches the bound objects shared by several metrics at one point."""

    def __init__(self, cfg: SystemConfig, mc: MonteCarlo):
        self.cfg = cfg
        self.mc = mc
        self._cache: dict[str, LeakageBounds] = {}

    def _bounds(self, name: str, builder, cfg) -> LeakageBounds:
        if name not in self._cache:
            self._cache[name] = builder(cfg, self.mc)
        return self._cache[name]

    def noncoherent(self) -> LeakageBounds:
        return self._bounds("noncoh", noncoherent_bounds, self.cfg)

    def noncoherent_single(self) -> LeakageBounds:
        return self._bounds(
            "noncoh_mu", noncoherent_bounds, single_stream_view(self.cfg)
        )

    def partial(self) -> LeakageBounds:
        return self._bounds("partial", partial_coherent_bounds, self.cfg)


def _noncoh_reason(cfg: SystemConfig) -> str:
    if cfg.N_J == 0 or cfg.beta2 <= 0.0:
        return "precondition:beta2=0"
    if cfg.T < cfg.mbar:
        return "precondition:T<Mbar"
    return ""


def _partial_reason(cfg: SystemConfig) -> str:
    if cfg.N_E < cfg.mbar:
        return "precondition:NE<Mbar"
    if cfg.t_prime < 1:
        return "precondition:Tprime<1"
    if cfg.t_prime < cfg.N_J:
        return "precondition:Tprime<NJ"
    return ""


def _secrecy_cap(cfg: SystemConfig) -> float:
    return math.log2(1.0 + cfg.M * cfg.alpha2 * 10.0 ** (cfg.snr_l_db / 10.0))


def evaluate_metric(point: _Point, metric: str) -> tuple[float | None, float | None, str]:
    """Evaluate one metric at one point: ``(value, std_error, reason)``."""
    cfg = point.cfg
    if metric == "ergodic":
        est = point.mc.ergodic_leakage(cfg, cfg.sigma_z2)
        return est.mean, est.std_error, ""
    if metric in ("noncoh_lb", "noncoh_ub"):
        reason = _noncoh_reason(cfg)
        if reason:
            return None, None, reason
        try:
            b = point.noncoherent()
        except ValueError:
            return None, None, "bracket_inverted"
        which = "lower" if metric == "noncoh_lb" else "upper"
        return b.rate_at(cfg.snr_e_db, which), b.c_std_error, ""
    if metric in ("partial_lb", "partial_ub"):
        reason = _partial_reason(cfg)
        if reason:
            return None, None, reason
        b = point.partial()
        which = "lower" if metric == "partial_lb" else "upper"
        return b.rate_at(cfg.snr_e_db, which), b.c_std_error, ""
    if metric == "universal":
        if cfg.t_prime < 1:
            return None, None, "precondition:Tprime<1"
        est = universal_upper(cfg, cfg.snr_e_db, point.mc)
        return est.mean, est.std_error, ""
    if metric in ("secrecy_su", "secrecy_mu"):
        reason = _noncoh_reason(cfg)
        if reason:
            return None, None, reason
        cap = _secrecy_cap(cfg)
        try:
            if metric == "secrecy_su":
                b = point.noncoherent()
                value = max(0.0, cfg.K * cap - b.rate_at(cfg.snr_e_db, "upper"))
                return value, b.c_std_error, ""
            b = point.noncoherent_single()
        except ValueError:
            return None, None, "bracket_inverted"
        value = cfg.K * max(0.0, cap - b.rate_at(cfg.snr_e_db, "upper"))
        return value, cfg.K * b.c_std_error, ""
    raise ConfigError(f"unknown metric {metric!r}")


def _derive_config(cfg: SystemConfig, axis: str, value: float) -> SystemConfig:
    if axis == "snr_e_db":
        return replace(cfg, snr_e_db=value)
    if axis == "T_gamma":
        t = round(value * cfg.M)
        if t < 1:
            raise ValueError(f"T_gamma={value} gives T={t} < 1")
        return replace(cfg, T=t)
    if axis == "N_E":
        return replace(cfg, N_E=int(value))
    if axis == "N_J":
        nj = int(value)
        return balanced_config(
            M=cfg.M,
            K=cfg.K,
            N_E=cfg.N_E,
            N_J=nj,
            T=cfg.T,
            alpha2=cfg.alpha2 if nj else None,
            snr_e_db=cfg.snr_e_db,
            snr_l_db=cfg.snr_l_db,
        )
    raise ConfigError(f"unknown axis {axis!r}")


def run_sweep(spec: SweepSpec) -> list[SweepRow]:
    """Evaluate every (axis value, metric) cell, in the given order."""
    mc = MonteCarlo(trials=spec.trials, seed=spec.seed, workers=spec.workers)
    rows: list[SweepRow] = []
    for value in spec.values:
        try:
            cfg = _derive_config(spec.cfg, spec.axis, value)
        except ValueError:
            rows.extend(
                SweepRow(value, m, None, None, "invalid_config") for m in spec.metrics
            )
            continue
        point = _Point(cfg, mc)
        for metric in spec.metrics:
            val, se, reason = evaluate_metric(point, metric)
            rows.append(SweepRow(value, metric, val, se, reason))
    return rows


def _fmt(x: float | None) -> str:
    return "" if x is None else f"{x:.9g}"


def write_sweep_csv(spec: SweepSpec, rows: list[SweepRow], stream) -> None:
    """Write the sweep CSV (LF line endings, 9 significant digits).

    The worker count is deliberately not echoed: output bytes depend only
    on the spec's deterministic fields and the seed.
    """
    stream.write(
        f"# anleak sweep trials={spec.trials} "
        f"trials_source={spec.trials_source} seed={spec.seed}\n"
    )
    stream.write("axis,metric,value,std_error,reason\n")
    for row in rows:
        stream.write(
            f"{row.axis_value:.9g},{row.metric},{_fmt(row.value)},"
            f"{_fmt(row.std_error)},{row.reason}\n"
        )


# ---------------------------------------------------------------------------
# Validation suite
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def run_validation(seed: int = 0, trials: int | None = None) -> ValidationReport:
    """Statistical and identity self-checks of the numerical core.

    ``trials`` scales the whole suite (default 4000 for the distribution
    check); every statistical threshold scales as ``1/sqrt(n)`` or is an
    N-sigma band, so reduced-trial runs stay meaningful.
    """
    base = 4000 if trials is None else trials
    if base < 100:
        raise ValueError(f"need trials >= 100, got {base}")
    scale = base / 4000.0
    checks = [
        _check_digamma_recurrence(),
        _check_volume_symmetry(),
        _check_wishart_identity(seed, max(1000, int(30000 * scale))),
        _check_power_identity(seed, max(200, int(1500 * scale))),
        _check_effective_distributions(seed, base),
        _check_ergodic_slope(seed, max(500, int(4000 * scale))),
        _check_sv_split(seed, max(10, int(40 * scale))),
    ]
    return ValidationReport(tuple(checks))


def _check_digamma_recurrence() -> CheckResult:
    xs = np.linspace(0.1, 50.0, 499)
    dev = max(
        abs(special.digamma(x + 1.0) - special.digamma(x) - 1.0 / x) for x in xs
    )
    ok = dev <= 1e-11
    return CheckResult(
        "digamma-recurrence", ok, f"max |psi(x+1)-psi(x)-1/x| = {dev:.3e}"
    )


def _check_volume_symmetry() -> CheckResult:
    dev = 0.0
    for t in (2, 3, 5, 8, 13, 21, 64):
        for m in range(0, t + 1):
            dev = max(
                dev,
                abs(
                    special.log_grassmann_volume(t, m)
                    - special.log_grassmann_volume(t, t - m)
                ),
            )
    frozen = abs(special.log_stiefel_volume(1, 1) - math.log(2 * math.pi))
    ok = dev <= 1e-10 and frozen <= 1e-12
    return CheckResult(
        "grassmann-symmetry", ok, f"max asymmetry {dev:.3e}, anchor dev {frozen:.3e}"
    )


def _check_wishart_identity(seed: int, trials: int) -> CheckResult:
    cfg = SystemConfig(M=16, K=8, N_E=4, N_J=0, T=16, alpha2=1.0, beta2=0.0)
    est = expected_log_sv_sum(SvKind.DATA, cfg, trials=trials, seed=seed)
    target = special.expected_logdet_wishart(4, 8)
    dev = abs(est.mean - target)
    band = 4.0 * est.std_error
    return CheckResult(
        "wishart-identity",
        dev <= band,
        f"|mc - closed form| = {dev:.4f}, 4*SE = {band:.4f}",
    )


def _check_power_identity(seed: int, trials: int) -> CheckResult:
    cfg = balanced_config(M=12, K=3, N_E=2, N_J=4, T=8)
    mean, se = average_transmit_power(cfg, trials=trials, seed=seed)
    target = exact_transmit_power(cfg)
    dev = abs(mean - target)
    band = 4.0 * se
    return CheckResult(
        "transmit-power",
        dev <= band,
        f"mc {mean:.4f} vs exact {target:.4f}, 4*SE = {band:.4f}",
    )


def _check_effective_distributions(seed: int, trials: int) -> CheckResult:
    cfg = balanced_config(M=64, K=16, N_E=64, N_J=48, T=320)
    report = check_effective_distributions(cfg, trials=trials, seed=seed)
    detail = (
        f"corr {report.max_abs_corr:.4f}/{report.corr_threshold:.4f}, "
        f"KS {report.ks_stat:.4f}/{report.ks_threshold:.4f}"
    )
    if report.failures:
        detail = "; ".join(report.failures)
    return CheckResult("effective-distributions", report.passed, detail)


def _check_ergodic_slope(seed: int, trials: int) -> CheckResult:
    cfg = balanced_config(M=64, K=16, N_E=64, N_J=48, T=320)
    lo = ergodic_leakage(cfg, 10.0 ** (-4.0), trials=trials, seed=seed)
    hi = ergodic_leakage(cfg, 10.0 ** (-4.3), trials=trials, seed=seed)
    slope = (hi.mean - lo.mean) / (0.3 * math.log2(10.0))
    expected = min(max(cfg.N_E - cfg.N_J, 0), cfg.K)
    dev = abs(slope - expected)
    return CheckResult(
        "ergodic-slope", dev <= 0.15, f"slope {slope:.3f} vs dof {expected}"
    )


def _check_sv_split(seed: int, trials: int) -> CheckResult:
    cfg = balanced_config(M=64, K=16, N_E=64, N_J=48, T=128)
    report = sv_split_check(cfg, 1e-8, trials=trials, seed=seed)
    return CheckResult(
        "sv-split",
        report.top_rel_dev_median <= 1e-3,
        f"median rel dev {report.top_rel_dev_median:.2e}",
    )


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def _apply_overrides(entries: dict[str, str], overrides: list[str]) -> dict[str, str]:
    out = dict(entries)
    for item in overrides or []:
        if "=" not in item:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        key, _, value = item.partition("=")
        key = key.strip()
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"--set: unknown key {key!r}")
        out[key] = value.strip()
    return out


def _cmd_sweep(args) -> int:
    entries = _apply_overrides(parse_config_file(args.config), args.set)
    if args.output is None and "output" in entries:
        args.output = entries["output"]
    spec = build_sweep_spec(
        entries, trials=args.trials, seed=args.seed, workers=args.workers
    )
    rows = run_sweep(spec)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            write_sweep_csv(spec, rows, fh)
    else:
        write_sweep_csv(spec, rows, sys.stdout)
    return 0


def _cmd_bounds(args) -> int:
    entries = _apply_overrides(parse_config_file(args.config), args.set)
    cfg = build_system_config(entries)
    trials = args.trials
    if trials is None:
        trials = (
            _get_int(entries, "trials")
            if "trials" in entries
            else DEFAULT_POINT_TRIALS
        )
    seed = args.seed if args.seed is not None else _get_int(entries, "seed", 0)
    workers = (
        args.workers if args.workers is not None else _get_int(entries, "workers", 1)
    )
    mc = MonteCarlo(trials=trials, seed=seed, workers=workers)
    out = sys.stdout
    print(f"# config M={cfg.M} K={cfg.K} N_E={cfg.N_E} N_J={cfg.N_J} T={cfg.T}", file=out)
    print(f"alpha2={cfg.alpha2:.9g}", file=out)
    print(f"beta2={cfg.beta2:.9g}", file=out)
    print(f"t_prime={cfg.t_prime}", file=out)
    print(f"exact_transmit_power={exact_transmit_power(cfg):.9g}", file=out)

    erg = ergodic_highsnr(cfg, mc)
    print(f"ergodic_dof={erg.dof:.9g}", file=out)
    print(f"ergodic_constant={erg.c_upper:.9g}", file=out)
    est = mc.ergodic_leakage(cfg, cfg.sigma_z2)
    print(f"ergodic_leakage={est.mean:.9g}", file=out)
    print(f"ergodic_leakage_se={est.std_error:.9g}", file=out)

    if not _noncoh_reason(cfg):
        try:
            b = noncoherent_bounds(cfg, mc)
        except ValueError:
            b = None
            print("noncoh_skipped=bracket_inverted", file=out)
        if b is not None:
            print(f"noncoh_dof={b.dof:.9g}", file=out)
            print(f"noncoh_c_lower={b.c_lower:.9g}", file=out)
            print(f"noncoh_c_upper={b.c_upper:.9g}", file=out)
            print(f"noncoh_c_se={b.c_std_error:.9g}", file=out)
            print(f"noncoh_lb={b.rate_at(cfg.snr_e_db, 'lower'):.9g}", file=out)
            print(f"noncoh_ub={b.rate_at(cfg.snr_e_db, 'upper'):.9g}", file=out)
    else:
        print(f"noncoh_skipped={_noncoh_reason(cfg)}", file=out)

    if not _partial_reason(cfg):
        p = partial_coherent_bounds(cfg, mc)
        print(f"partial_dof={p.dof:.9g}", file=out)
        print(f"partial_c_lower={p.c_lower:.9g}", file=out)
        print(f"partial_c_upper={p.c_upper:.9g}", file=out)
        print(f"partial_c_se={p.c_std_error:.9g}", file=out)
        print(f"partial_lb={p.rate_at(cfg.snr_e_db, 'lower'):.9g}", file=out)
        print(f"partial_ub={p.rate_at(cfg.snr_e_db, 'upper'):.9g}", file=out)
    else:
        print(f"partial_skipped={_partial_reason(cfg)}", file=out)

    uni = universal_upper(cfg, cfg.snr_e_db, mc)
    print(f"universal={uni.mean:.9g}", file=out)
    print(f"universal_se={uni.std_error:.9g}", file=out)

    point = _Point(cfg, mc)
    for metric in ("secrecy_su", "secrecy_mu"):
        val, se, reason = evaluate_metric(point, metric)
        if reason:
            print(f"{metric}_skipped={reason}", file=out)
        else:
            print(f"{metric}={val:.9g}", file=out)

    if cfg.mbar == cfg.M and abs(cfg.alpha2 - 1.0) <= 1e-9 and cfg.T >= cfg.M:
        print(f"entropy_gap={entropy_gap(cfg):.9g}", file=out)
    return 0


def _cmd_plan(args) -> int:
    params = DeploymentParams(
        carrier_hz=args.carrier_hz,
        speed_mps=args.speed_mps,
        symbol_duration_s=args.symbol_duration_s,
    )
    print(f"doppler_hz={doppler_shift(params):.9g}")
    print(f"coherence_time_s={coherence_time(params):.9g}")
    print(f"coherence_symbols={coherence_symbols(params):.9g}")
    print(f"required_antennas={required_antennas(params)}")
    return 0


def _cmd_validate(args) -> int:
    report = run_validation(seed=args.seed, trials=args.trials)
    for check in report.checks:
        status = "PASS" if check.passed else "FAIL"
        print(f"check {check.name}: {status} ({check.detail})")
    n_fail = sum(not c.passed for c in report.checks)
    if n_fail:
        print(f"{n_fail} of {len(report.checks)} checks failed")
        return 1
    print(f"all {len(report.checks)} checks passed")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="anleak",
        description="Leakage bounds for artificial-noise massive-MIMO downlinks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sweep = sub.add_parser("sweep", help="evaluate metrics along an axis, write CSV")
    p_sweep.add_argument("config", help="key=value config file")
    p_sweep.add_argument("--trials", type=int, default=None)
    p_sweep.add_argument("--seed", type=int, default=None)
    p_sweep.add_argument("--workers", type=int, default=None)
    p_sweep.add_argument("-o", "--output", default=None, help="CSV path (default stdout)")
    p_sweep.add_argument(
        "--set", action="append", metavar="KEY=VALUE", help="override a config entry"
    )
    p_sweep.set_defaults(func=_cmd_sweep)

    p_bounds = sub.add_parser("bounds", help="single-point evaluation of all regimes")
    p_bounds.add_argument("config", help="key=value config file")
    p_bounds.add_argument("--trials", type=int, default=None)
    p_bounds.add_argument("--seed", type=int, default=None)
    p_bounds.add_argument("--workers", type=int, default=None)
    p_bounds.add_argument(
        "--set", action="append", metavar="KEY=VALUE", help="override a config entry"
    )
    p_bounds.set_defaults(func=_cmd_bounds)

    p_plan = sub.add_parser("plan", help="antennas needed to saturate coherence blocks")
    p_plan.add_argument("--carrier-hz", type=float, required=True)
    p_plan.add_argument("--speed-mps", type=float, required=True)
    p_plan.add_argument(
        "--symbol-duration-s",
        type=float,
        default=DEFAULT_SYMBOL_DURATION,
    )
    p_plan.set_defaults(func=_cmd_plan)

    p_val = sub.add_parser("validate", help="run statistical self-checks")
    p_val.add_argument("--seed", type=int, default=0)
    p_val.add_argument("--trials", type=int, default=None)
    p_val.set_defaults(func=_cmd_validate)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
