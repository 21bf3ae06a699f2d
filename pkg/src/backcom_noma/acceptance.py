"""Acceptance suite: the binding cross-validation checks for the toolkit.

Each criterion function is self-contained and returns a CriterionResult; the
CLI validate subcommand and the test suite both run these.  Monte Carlo
checks default to one million trials per estimate.
"""

from __future__ import annotations

import dataclasses
import filecmp
import math
import tempfile
from dataclasses import dataclass

import numpy as np

from .config import Nakagami, SystemConfig, default_partition
from .design import design_ladder, max_weak_coefficient
from .experiments import emit_csv, presets
from .experiments import run as run_experiment
from .fading import (
    CompositeDist,
    composite_cdf,
    composite_pdf,
    full_annulus_dist,
    pair_probs_power,
    solo_success_power,
    solve_beta_tilde,
)
from .fading_free import (
    m2_asymptotic,
    pair_probs_ff,
    solo_success_ff,
    throughput_two_node,
)
from .mgf import EulerInversionParams, mgf_inverse_sinr, multiplex_outcome
from .simulator import PowerDivision, RegionDivision, benchmark, estimate_metrics
from .specfun import DEFAULT_QUAD, integrate

DEFAULT_TRIALS = 1_000_000
DEFAULT_SEED = 20240901


@dataclass(frozen=True)
class CriterionResult:
    index: str
    title: str
    passed: bool
    detail: str


def _ff_two_node_analytics(cfg: SystemConfig, xi1: float, xi2: float):
    """Analytic pair probabilities and throughput, pure path loss, N=2."""
    partition = default_partition(cfg)
    probs = pair_probs_ff(cfg, xi1, xi2, partition)
    m1n = solo_success_ff(cfg, xi1, *partition.bounds(1))
    m1f = solo_success_ff(cfg, xi2, *partition.bounds(2))
    rep = throughput_two_node(cfg, probs, m1n, m1f, partition.membership_probability(1))
    return probs, rep


def criterion_equivalence(trials: int = DEFAULT_TRIALS, seed: int = DEFAULT_SEED) -> CriterionResult:
    """Two-node analytics match simulation within 3 SE across the grid."""
    worst, worst_at = 0.0, ""
    for xi2 in (0.5, 0.05):
        for gdb in (0.0, 2.0, 4.0, 6.0, 8.0, 10.0):
            cfg = SystemConfig(sinr_threshold_db=gdb)
            probs, rep = _ff_two_node_analytics(cfg, 0.7, xi2)
            est = estimate_metrics(
                cfg, RegionDivision(default_partition(cfg)), (0.7, xi2), trials, seed
            )
            seed += 1
            for name, analytic, key in (
                ("p_2", probs.p2, "p_2"),
                ("p_1", probs.p1, "p_1"),
                ("m_2", probs.m2, "m_n"),
                ("c_suc", rep.c_suc_bits, "c_suc"),
            ):
                e = est[key]
                z = abs(analytic - e.mean) / max(e.std_error, 1e-12)
                if z > worst:
                    worst, worst_at = z, f"{name} at xi2={xi2}, gamma={gdb} dB"
    return CriterionResult(
        "1",
        "two-node analytic/Monte Carlo equivalence (pure path loss)",
        worst <= 3.0,
        f"worst |z| = {worst:.2f} ({worst_at}), limit 3",
    )


def criterion_certificate(trials: int = DEFAULT_TRIALS, seed: int = DEFAULT_SEED) -> CriterionResult:
    """Slack-1 ladder guarantees every decode: m_2 = 2, zero failures."""
    cfg = SystemConfig(sinr_threshold_db=5.0)
    ladder = design_ladder(cfg, slack=1.0)
    probs, _ = _ff_two_node_analytics(cfg, ladder[0], ladder[1])
    est = estimate_metrics(cfg, RegionDivision(default_partition(cfg)), ladder, trials, seed)
    ok = (
        probs.m2 == 2.0
        and est["normalized"].mean == 1.0
        and est["failures"].mean == 0.0
    )
    return CriterionResult(
        "2",
        "worst-case ladder certificate (slack 1, gamma 5 dB)",
        ok,
        f"analytic m_2 = {probs.m2!r}, simulated normalized = {est['normalized'].mean!r}, "
        f"failures/slot = {est['failures'].mean!r} over {trials} trials",
    )


def criterion_marks(trials: int = DEFAULT_TRIALS, seed: int = DEFAULT_SEED) -> CriterionResult:
    """Region-division normalized throughput hits the reference marks."""
    from .fading import pair_probs_region, solo_success_region

    parts = []
    ok = True
    for gdb, target in ((5.0, 0.9306), (10.0, 0.9265)):
        cfg = SystemConfig(sinr_threshold_db=gdb, fading=Nakagami(4.0))
        partition = default_partition(cfg)
        xi2 = max_weak_coefficient(cfg, 0.7, partition)
        probs = pair_probs_region(cfg, 0.7, xi2, partition)
        m1n = solo_success_region(cfg, "near", 0.7, xi2, partition)
        m1f = solo_success_region(cfg, "far", 0.7, xi2, partition)
        rep = throughput_two_node(cfg, probs, m1n, m1f, partition.membership_probability(1))
        est = estimate_metrics(cfg, RegionDivision(partition), (0.7, xi2), trials, seed)
        seed += 1
        mc = est["normalized"].mean
        ok = ok and abs(rep.normalized - target) <= 0.01 and abs(mc - target) <= 0.01
        parts.append(
            f"gamma={gdb} dB: analytic {rep.normalized:.4f} / simulated {mc:.4f} "
            f"vs {target} +- 0.01"
        )
    return CriterionResult(
        "3", "normalized throughput reference marks (m=4, alpha=2.5)", ok, "; ".join(parts)
    )


def criterion_asymptotic(trials: int = 0, seed: int = 0) -> CriterionResult:
    """Vanishing-noise closed form agrees with the exact one on all branches."""
    worst, worst_at = 0.0, ""
    for gk in (0.5, 3.0, 1e4, 5e8, 2e9):
        cfg = SystemConfig(
            sinr_threshold_db=10.0 * math.log10(gk), noise_power_dbm=-200.0
        )
        probs = pair_probs_ff(cfg, 0.7, 0.7)
        diff = abs(m2_asymptotic(cfg, 1.0) - probs.m2)
        if diff > worst:
            worst, worst_at = diff, f"gamma*kappa = {gk:g}"
    return CriterionResult(
        "4",
        "vanishing-noise asymptote over all five branches",
        worst <= 1e-3,
        f"worst |difference| = {worst:.2e} ({worst_at}), limit 1e-3",
    )


def criterion_mgf_degenerate(trials: int = 0, seed: int = 0) -> CriterionResult:
    """The weakest rank has no interferers, so its outage must invert to the
    closed-form solo failure."""
    cfg = SystemConfig(sinr_threshold_db=5.0)
    partition = default_partition(cfg)
    p_inv = mgf_inverse_sinr(cfg, (0.7, 0.5), partition, rank=2)
    p_ref = 1.0 - solo_success_ff(cfg, 0.5, *partition.bounds(2))
    diff = abs(p_inv - p_ref)
    return CriterionResult(
        "5a",
        "inversion engine degenerate form",
        diff <= 1e-6,
        f"|inversion - closed form| = {diff:.2e}, limit 1e-6",
    )


def criterion_mgf_agreement(trials: int = DEFAULT_TRIALS, seed: int = DEFAULT_SEED) -> CriterionResult:
    """N=3 decoded-count mean vs Monte Carlo across the threshold sweep."""
    worst, worst_at, ok = 0.0, "", True
    for gdb in range(0, 11):
        cfg3 = SystemConfig(subregion_count=3, sinr_threshold_db=float(gdb))
        part3 = default_partition(cfg3)
        out = multiplex_outcome(cfg3, (0.7, 0.5, 0.3), part3)
        est = estimate_metrics(cfg3, RegionDivision(part3), (0.7, 0.5, 0.3), trials, seed)
        seed += 1
        diff = abs(out.m_n - est["m_n"].mean)
        tol = 0.03 if gdb <= 5 else 0.1
        if diff > tol:
            ok = False
        if diff > worst:
            worst, worst_at = diff, f"gamma={gdb} dB (tol {tol})"
    return CriterionResult(
        "5b",
        "inversion engine N=3 decoded-count agreement",
        ok,
        f"worst |m_n error| = {worst:.4f} at {worst_at}",
    )


def criterion_mgf_depth(trials: int = 0, seed: int = 0) -> CriterionResult:
    """Doubling the inversion depths should not move the result.

    Known red: the intrinsic truncation error of the default inversion depths
    is about 3e-5, larger than the 1e-5 limit, so this check fails honestly.
    """
    cfg3 = SystemConfig(subregion_count=3, sinr_threshold_db=5.0)
    part3 = default_partition(cfg3)
    p_def = mgf_inverse_sinr(cfg3, (0.7, 0.5, 0.3), part3, rank=2)
    deep = EulerInversionParams(B=22, C=28)
    p_deep = mgf_inverse_sinr(cfg3, (0.7, 0.5, 0.3), part3, rank=2, params=deep)
    diff = abs(p_def - p_deep)
    return CriterionResult(
        "5c",
        "inversion engine depth stability",
        diff <= 1e-5,
        f"depth-doubling shift = {diff:.2e}, limit 1e-5",
    )


def criterion_composite(trials: int = DEFAULT_TRIALS, seed: int = DEFAULT_SEED) -> CriterionResult:
    """Composite density integrates to one and matches the empirical CDF."""
    parts = []
    ok = True
    rng = np.random.default_rng(seed)
    for m, alpha in ((1.0, 4.0), (4.0, 2.5)):
        d = CompositeDist(m, 1.0, 65.0, alpha)
        # the density lives across ~10 decades; integrate on the log axis
        anchor = 65.0 ** (-2.0 * alpha)
        t_lo = math.log(anchor) - 69.0
        mass = integrate(
            lambda t: composite_pdf(d, math.exp(t)) * math.exp(t), t_lo, t_lo + 250.0, DEFAULT_QUAD
        )
        n = trials
        r = np.sqrt(1.0 + rng.random(n) * (65.0**2 - 1.0))
        x = np.sort(rng.gamma(m, 1.0 / m, n) ** 2 * r ** (-2.0 * alpha))
        f = composite_cdf(d, x)
        i = np.arange(1, n + 1)
        sup = max(float(np.max(i / n - f)), float(np.max(f - (i - 1) / n)))
        ok = ok and abs(mass - 1.0) <= 1e-6 and sup <= 0.005
        parts.append(f"(m={m:g}, alpha={alpha:g}): mass 1{mass - 1.0:+.1e}, sup-dist {sup:.5f}")
    return CriterionResult(
        "6", "composite fading-distance distribution", ok, "; ".join(parts) + " (limits 1e-6, 0.005)"
    )


def criterion_power_division(
    trials: int = DEFAULT_TRIALS, seed: int = DEFAULT_SEED
) -> CriterionResult:
    """Threshold solve and power-division analytics match simulation."""
    cfg = SystemConfig(fading=Nakagami(4.0))
    policy = solve_beta_tilde(cfg, 0.5)
    d = full_annulus_dist(cfg)
    resid = abs(float(composite_cdf(d, policy.beta_tilde)) - 0.5)

    rng = np.random.default_rng(seed)
    n = trials
    r = np.sqrt(cfg.inner_radius_m**2 + rng.random(n) * (cfg.outer_radius_m**2 - cfg.inner_radius_m**2))
    x = rng.gamma(4.0, 0.25, n) ** 2 * r ** (-2.0 * cfg.path_loss_exponent)
    frac = float(np.mean(x >= policy.beta_tilde))
    frac_se = math.sqrt(0.25 / n)
    ok = resid <= 1e-9 and abs(frac - 0.5) <= 3.0 * frac_se

    worst, worst_at = 0.0, ""
    for gdb in (5.0, 10.0):
        cfg_g = cfg.with_(sinr_threshold_db=gdb)
        probs = pair_probs_power(cfg_g, 0.7, 0.05, policy)
        solo_n = solo_success_power(cfg_g, "near", 0.7, 0.05, policy)
        solo_f = solo_success_power(cfg_g, "far", 0.7, 0.05, policy)
        est = estimate_metrics(cfg_g, PowerDivision(policy), (0.7, 0.05), trials, seed)
        seed += 1
        for name, analytic, key in (
            ("p_2", probs.p2, "p_2"),
            ("p_1", probs.p1, "p_1"),
            ("solo high", solo_n, "solo_1"),
            ("solo low", solo_f, "solo_2"),
        ):
            e = est[key]
            z = abs(analytic - e.mean) / max(e.std_error, 1e-12)
            if z > worst:
                worst, worst_at = z, f"{name} at gamma={gdb} dB"
    ok = ok and worst <= 3.0
    return CriterionResult(
        "7",
        "power-division threshold and pairing analytics",
        ok,
        f"threshold residual {resid:.1e} (limit 1e-9), high fraction {frac:.4f} "
        f"(0.5 +- {3 * frac_se:.4f}), worst |z| = {worst:.2f} ({worst_at}), limit 3",
    )


def criterion_benchmarks(trials: int = DEFAULT_TRIALS, seed: int = DEFAULT_SEED) -> CriterionResult:
    """Multiplexed backscatter dominates solo access and, at low thresholds,
    conventional multiplexed uplinks."""
    cfg0 = SystemConfig(fading=Nakagami(4.0))
    ok = True
    margins = []
    for gdb in range(0, 11):
        cfg = cfg0.with_(sinr_threshold_db=float(gdb))
        a = benchmark(cfg, "backcom_noma", trials, seed)
        b = benchmark(cfg, "backcom_tdma", trials, seed + 1)
        slack = 3.0 * math.hypot(a.std_error, b.std_error)
        if a.mean < b.mean - slack:
            ok = False
            margins.append(f"noma<tdma at {gdb} dB ({a.mean:.2f} vs {b.mean:.2f})")
        if gdb <= 5:
            c = benchmark(cfg, "conv_noma", trials, seed + 2)
            slack_c = 3.0 * math.hypot(a.std_error, c.std_error)
            if a.mean < c.mean - slack_c:
                ok = False
                margins.append(f"backcom<conventional at {gdb} dB ({a.mean:.2f} vs {c.mean:.2f})")
        seed += 3
    detail = "all orderings hold within 3-SE slack" if not margins else "; ".join(margins)
    return CriterionResult("8", "benchmark system ordering (m=4, alpha=2.5)", ok, detail)


def criterion_determinism(trials: int = 2000, seed: int = DEFAULT_SEED) -> CriterionResult:
    """Identical seed gives byte-identical CSV output."""
    same = True
    names = []
    for name in ("fig4a", "fig8b"):
        exp = dataclasses.replace(presets()[name], trials=trials, seed=seed)
        with tempfile.NamedTemporaryFile(suffix=".csv") as f1, tempfile.NamedTemporaryFile(
            suffix=".csv"
        ) as f2:
            emit_csv(run_experiment(exp), f1.name)
            emit_csv(run_experiment(exp), f2.name)
            if not filecmp.cmp(f1.name, f2.name, shallow=False):
                same = False
        names.append(name)
    return CriterionResult(
        "9",
        "seeded preset determinism",
        same,
        f"presets {', '.join(names)}: repeated runs byte-identical = {same}",
    )


ALL_CRITERIA = (
    criterion_equivalence,
    criterion_certificate,
    criterion_marks,
    criterion_asymptotic,
    criterion_mgf_degenerate,
    criterion_mgf_agreement,
    criterion_mgf_depth,
    criterion_composite,
    criterion_power_division,
    criterion_benchmarks,
    criterion_determinism,
)


def run_all(trials: int = DEFAULT_TRIALS, seed: int = DEFAULT_SEED) -> list:
    results = []
    for i, fn in enumerate(ALL_CRITERIA):
        if fn is criterion_determinism:
            results.append(fn(seed=seed + 1000 * i))
        else:
            results.append(fn(trials=trials, seed=seed + 1000 * i))
    return results
