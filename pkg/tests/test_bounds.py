"""Leakage bound assembly: exact slopes, closed-form gaps, secrecy arithmetic."""

import dataclasses
import math

import pytest

from anleak import (
    LeakageBounds,
    LeakagePair,
    MonteCarlo,
    SystemConfig,
    balanced_config,
    coherent_data_leakage,
    digamma,
    entropy_gap,
    ergodic_highsnr,
    ergodic_leakage,
    leakage_pair,
    noncoherent_bounds,
    partial_coherent_bounds,
    saturated_upper,
    secrecy_from_config,
    secrecy_rates,
    single_stream_view,
    universal_upper,
)
from anleak.bounds import _saturated_pair

LOG2_10 = math.log2(10.0)


def _psi_sum(t, m):
    return math.fsum(digamma(t - i + 1) for i in range(1, m + 1))


@pytest.fixture
def mc():
    return MonteCarlo(trials=200, seed=0)


# ---------------------------------------------------------------------------
# LeakageBounds container
# ---------------------------------------------------------------------------


def test_leakage_bounds_validation():
    cfg = balanced_config(M=8, K=2, N_E=3, N_J=4, T=16)
    with pytest.raises(ValueError):
        LeakageBounds(dof=1.0, c_lower=0.0, c_upper=1.0, regime="mystery", cfg=cfg)
    with pytest.raises(ValueError):
        LeakageBounds(dof=-1.0, c_lower=0.0, c_upper=1.0, regime="ergodic", cfg=cfg)
    with pytest.raises(ValueError):
        LeakageBounds(dof=1.0, c_lower=2.0, c_upper=1.0, regime="ergodic", cfg=cfg)
    with pytest.raises(ValueError):
        LeakageBounds(
            dof=1.0, c_lower=0.0, c_upper=math.inf, regime="ergodic", cfg=cfg
        )


def test_rate_at_evaluates_and_clamps():
    cfg = balanced_config(M=8, K=2, N_E=3, N_J=4, T=16)
    b = LeakageBounds(
        dof=2.0, c_lower=-5.0, c_upper=-1.0, regime="noncoherent", cfg=cfg
    )
    assert b.rate_at(10.0, "upper") == pytest.approx(2.0 * LOG2_10 - 1.0)
    assert b.rate_at(10.0, "lower") == pytest.approx(2.0 * LOG2_10 - 5.0)
    assert b.rate_at(-100.0, "upper") == 0.0
    with pytest.raises(ValueError):
        b.rate_at(10.0, "middle")


# ---------------------------------------------------------------------------
# Degrees of freedom
# ---------------------------------------------------------------------------


def test_slopes_are_exact_arithmetic(mc):
    cfg = SystemConfig(64, 16, 64, 48, 320, 1.0, 1.0)
    noncoh = noncoherent_bounds(cfg, mc)
    partial = partial_coherent_bounds(cfg, mc)
    erg = ergodic_highsnr(cfg, mc)
    assert noncoh.dof == 12.8
    assert partial.dof == 16 * (1.0 - 48 / 304)
    assert erg.dof == 16.0
    # A block the size of the signalling dimensions cannot resolve anything.
    assert noncoherent_bounds(dataclasses.replace(cfg, T=64), mc).dof == 0.0
    # Jamming at least as many dimensions as the receiver has antennas
    # removes the known-channel slope entirely.
    small = dataclasses.replace(cfg, N_E=32)
    assert ergodic_highsnr(small, mc).dof == 0.0
    assert noncoherent_bounds(small, mc).dof == 0.0


def test_regime_dof_ordering(mc):
    cfg = SystemConfig(64, 16, 64, 48, 320, 1.0, 1.0)
    noncoh = noncoherent_bounds(cfg, mc)
    partial = partial_coherent_bounds(cfg, mc)
    erg = ergodic_highsnr(cfg, mc)
    assert noncoh.dof <= partial.dof <= erg.dof


# ---------------------------------------------------------------------------
# Non-coherent bounds
# ---------------------------------------------------------------------------


def test_noncoherent_gap_matches_closed_form(mc):
    cfg = SystemConfig(6, 2, 3, 4, 12, 1.0, 1.0)
    b = noncoherent_bounds(cfg, mc)
    # The sampled term is shared by both constants, so the gap is exact
    # regardless of the trial count.
    assert b.c_upper - b.c_lower == pytest.approx(entropy_gap(cfg), rel=1e-12)
    assert b.c_std_error > 0.0


def test_entropy_gap_formula_and_monotonicity():
    cfg = SystemConfig(6, 2, 3, 4, 12, 1.0, 1.0)
    expected = (3 / 12) * (6 * math.log(12) - _psi_sum(12, 6)) + (3 / 12) * (
        4 * math.log(10) - _psi_sum(10, 4)
    )
    assert entropy_gap(cfg) == pytest.approx(expected / math.log(2.0), rel=1e-13)
    gaps = [
        entropy_gap(dataclasses.replace(cfg, T=t)) for t in (6, 12, 24, 48, 96)
    ]
    assert all(a > b > 0.0 for a, b in zip(gaps, gaps[1:]))


def test_entropy_gap_preconditions():
    with pytest.raises(ValueError):
        entropy_gap(balanced_config(M=8, K=2, N_E=3, N_J=4, T=16))  # not fully loaded
    with pytest.raises(ValueError):
        entropy_gap(SystemConfig(6, 2, 3, 4, 12, 0.5, 1.25))  # non-unit powers
    with pytest.raises(ValueError):
        entropy_gap(SystemConfig(6, 2, 3, 4, 5, 1.0, 1.0))  # T < M


def test_noncoherent_preconditions(mc):
    with pytest.raises(ValueError):
        noncoherent_bounds(balanced_config(M=8, K=2, N_E=3, N_J=0, T=16), mc)
    with pytest.raises(ValueError):
        noncoherent_bounds(balanced_config(M=8, K=2, N_E=3, N_J=4, T=5), mc)


def test_noncoherent_noise_power_rescaling_is_exact(mc):
    # Dividing the received block by beta maps (alpha2, beta2) onto
    # (alpha2/beta2, 1) and shifts the constants by dof*log2(beta2).
    base = SystemConfig(6, 2, 3, 4, 12, 1.0, 1.0)
    scaled = SystemConfig(6, 2, 3, 4, 12, 2.5, 2.5)
    b0 = noncoherent_bounds(base, mc)
    b1 = noncoherent_bounds(scaled, mc)
    shift = b0.dof * math.log2(2.5)
    assert b1.dof == b0.dof
    assert b1.c_upper == b0.c_upper + shift
    assert b1.c_lower == b0.c_lower + shift
    assert b1.c_std_error == b0.c_std_error


def test_noncoherent_refuses_crossed_constants(mc):
    # At an extreme data-to-noise power ratio the two relaxations cross
    # and no longer bracket anything; that must be an error, not a pair.
    with pytest.raises(ValueError):
        noncoherent_bounds(SystemConfig(6, 2, 3, 4, 12, 64.0, 1.0), mc)


def test_noncoherent_fallback_is_saturated_cap(mc):
    cfg = SystemConfig(6, 2, 3, 4, 4, 1.0, 1.0)  # T < K + N_J
    b = noncoherent_bounds(cfg, mc, saturated_fallback=True)
    assert b.dof == 0.0
    assert b.c_lower == 0.0
    assert b.c_std_error == 0.0
    # The cap is the saturation bound at the effective dimension T.
    expected = 3 * math.log(4) - (3 / 4) * _psi_sum(4, 4)
    assert b.c_upper == pytest.approx(expected / math.log(2.0), rel=1e-13)


def test_saturated_upper_ordering_and_equality_point():
    cfg = SystemConfig(4, 1, 2, 3, 4, 1.0, 1.0)
    sat = saturated_upper(cfg)
    assert sat.exact < sat.relaxed
    # The two forms touch only at a single-symbol block.
    tight = _saturated_pair(3, 1)
    assert tight.exact == pytest.approx(tight.relaxed, rel=1e-15)
    with pytest.raises(ValueError):
        saturated_upper(SystemConfig(4, 1, 2, 3, 8, 1.0, 1.0))  # T != M
    with pytest.raises(ValueError):
        saturated_upper(balanced_config(M=4, K=1, N_E=2, N_J=2, T=4))  # not full


# ---------------------------------------------------------------------------
# Partial-coherent bounds
# ---------------------------------------------------------------------------


def test_partial_gap_matches_closed_form(mc):
    cfg = balanced_config(M=8, K=2, N_E=10, N_J=6, T=20)  # t_prime 18
    p = partial_coherent_bounds(cfg, mc)
    expected = ((2 * 10 - 2) / 18) * (6 * math.log(18) - _psi_sum(18, 6))
    assert p.c_upper - p.c_lower == pytest.approx(
        expected / math.log(2.0), rel=1e-12
    )


def test_partial_without_noise_is_deterministic(mc):
    cfg = balanced_config(M=8, K=2, N_E=10, N_J=0, T=20)
    p = partial_coherent_bounds(cfg, mc)
    assert p.dof == 2.0
    assert p.c_lower == p.c_upper
    assert p.c_std_error == 0.0


def test_partial_preconditions(mc):
    with pytest.raises(ValueError):
        partial_coherent_bounds(balanced_config(M=8, K=2, N_E=7, N_J=6, T=20), mc)
    with pytest.raises(ValueError):
        partial_coherent_bounds(balanced_config(M=8, K=2, N_E=10, N_J=6, T=7), mc)


# ---------------------------------------------------------------------------
# Universal bound and its low-SNR limit
# ---------------------------------------------------------------------------


def test_universal_at_low_snr_matches_data_only_leakage():
    mc = MonteCarlo(trials=20000, seed=0)
    cfg = balanced_config(M=8, K=2, N_E=4, N_J=6, T=8)
    uni = universal_upper(cfg, -45.0, mc)
    coh = coherent_data_leakage(cfg, -45.0, mc)
    assert uni.mean == pytest.approx(coh.mean, rel=0.01)


def test_coherent_data_leakage_drops_the_noise_part(mc):
    cfg = balanced_config(M=8, K=2, N_E=4, N_J=4, T=16, snr_e_db=10.0)
    data_only = dataclasses.replace(cfg, N_J=0, beta2=0.0)
    assert coherent_data_leakage(cfg, 10.0, mc) == mc.ergodic_leakage(
        data_only, 0.1
    )


def test_ergodic_highsnr_tracks_the_leakage_curve():
    mc = MonteCarlo(trials=4000, seed=0)
    cfg = balanced_config(M=8, K=2, N_E=4, N_J=2, T=16)
    erg = ergodic_highsnr(cfg, mc)
    est = ergodic_leakage(cfg, 10.0 ** (-3.5), trials=4000, seed=0)
    band = 4.0 * math.hypot(est.std_error, erg.c_std_error) + 0.1
    assert abs(est.mean - erg.rate_at(35.0)) <= band


# ---------------------------------------------------------------------------
# Secrecy rates
# ---------------------------------------------------------------------------


def _stub(cfg, dof, c, regime):
    return LeakageBounds(
        dof=dof, c_lower=c - 0.25, c_upper=c, regime=regime, cfg=cfg
    )


def test_secrecy_rates_arithmetic():
    cfg = balanced_config(M=8, K=2, N_E=8, N_J=6, T=20, snr_l_db=30.0)
    view = single_stream_view(cfg)
    su = LeakagePair(
        noncoherent=_stub(cfg, 1.5, 2.0, "noncoherent"),
        partial=_stub(cfg, 2.0, 1.0, "partial"),
    )
    mu = LeakagePair(
        noncoherent=_stub(view, 1.0, 0.5, "noncoherent"),
        partial=_stub(view, 1.0, 0.4, "partial"),
    )
    rates = secrecy_rates(cfg, su, mu, snr_e_db=10.0, snr_l_db=30.0)
    cap = math.log2(1.0 + 8 * 1000.0)
    assert rates.su_noncoherent == pytest.approx(
        2 * cap - (1.5 * LOG2_10 + 2.0), rel=1e-12
    )
    assert rates.su_partial == pytest.approx(
        (18 / 20) * (2 * cap - (2.0 * LOG2_10 + 1.0)), rel=1e-12
    )
    assert rates.mu_noncoherent == pytest.approx(
        2 * (cap - (1.0 * LOG2_10 + 0.5)), rel=1e-12
    )
    assert rates.mu_partial == pytest.approx(
        2 * (18 / 20) * (cap - (1.0 * LOG2_10 + 0.4)), rel=1e-12
    )


def test_secrecy_rates_clamp_at_zero():
    cfg = balanced_config(M=8, K=2, N_E=8, N_J=6, T=20)
    view = single_stream_view(cfg)
    flood = LeakagePair(
        noncoherent=_stub(cfg, 0.0, 1e4, "noncoherent"),
        partial=_stub(cfg, 0.0, 1e4, "partial"),
    )
    flood_mu = LeakagePair(
        noncoherent=_stub(view, 0.0, 1e4, "noncoherent"),
        partial=_stub(view, 0.0, 1e4, "partial"),
    )
    rates = secrecy_rates(cfg, flood, flood_mu, 10.0, 30.0)
    assert rates.su_noncoherent == 0.0
    assert rates.su_partial == 0.0
    assert rates.mu_noncoherent == 0.0
    assert rates.mu_partial == 0.0


def test_secrecy_rates_validate_the_pairing():
    cfg = balanced_config(M=8, K=2, N_E=8, N_J=6, T=20)
    view = single_stream_view(cfg)
    su = LeakagePair(
        noncoherent=_stub(cfg, 1.0, 1.0, "noncoherent"),
        partial=_stub(cfg, 1.0, 1.0, "partial"),
    )
    mu = LeakagePair(
        noncoherent=_stub(view, 1.0, 1.0, "noncoherent"),
        partial=_stub(view, 1.0, 1.0, "partial"),
    )
    with pytest.raises(ValueError):
        secrecy_rates(cfg, mu, mu, 10.0, 30.0)  # joint pair has K = 1
    with pytest.raises(ValueError):
        secrecy_rates(cfg, su, su, 10.0, 30.0)  # per-stream pair has K = 2
    shrunk = dataclasses.replace(view, N_E=4)
    bad_mu = LeakagePair(
        noncoherent=_stub(shrunk, 1.0, 1.0, "noncoherent"),
        partial=_stub(shrunk, 1.0, 1.0, "partial"),
    )
    with pytest.raises(ValueError):
        secrecy_rates(cfg, su, bad_mu, 10.0, 30.0)


def test_secrecy_from_config_is_reproducible():
    cfg = balanced_config(M=8, K=2, N_E=8, N_J=6, T=24)
    mc = MonteCarlo(trials=400, seed=0)
    rates = secrecy_from_config(cfg, mc)
    assert rates == secrecy_from_config(cfg, mc)
    for value in dataclasses.astuple(rates):
        assert value >= 0.0
    su = leakage_pair(cfg, mc)
    mu = leakage_pair(single_stream_view(cfg), mc)
    assert rates == secrecy_rates(cfg, su, mu, cfg.snr_e_db, cfg.snr_l_db)
