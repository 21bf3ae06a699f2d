"""Parameter-sweep harness: scenario evaluation, presets, CSV/SVG emission.

An Experiment fixes a base config and a scenario (which analytics/simulation
pairing to evaluate), then sweeps one parameter over a grid.  Rows carry the
swept value, a metric name, the producing engine and mean/std_error, sorted
by (value, metric, engine) so output bytes never depend on evaluation order.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .config import (
    FadingFree,
    Nakagami,
    SubregionPartition,
    SystemConfig,
    default_partition,
    two_region_partition,
)
from .design import design_power_division_floor, max_weak_coefficient, min_coefficient
from .fading import (
    pair_probs_power,
    pair_probs_region,
    solo_success_power,
    solo_success_region,
    solve_beta_tilde,
)
from .fading_free import pair_probs_ff, solo_success_ff, throughput_two_node
from .mgf import multiplex_outcome
from .simulator import (
    PowerDivision,
    RegionDivision,
    SoloAccess,
    benchmark,
    estimate_metrics,
)

ENGINES = ("analytic", "montecarlo")


@dataclass(frozen=True)
class SweepSpec:
    """Identifier of the swept parameter and its grid (non-empty, sorted)."""

    parameter: str
    values: tuple

    def __post_init__(self):
        if not self.values:
            raise ValueError("grid must be non-empty")
        if any(b < a for a, b in zip(self.values, self.values[1:])):
            raise ValueError("grid must be sorted ascending")


@dataclass(frozen=True)
class Experiment:
    name: str
    config: SystemConfig
    scenario: str
    sweep: SweepSpec
    engines: tuple = ENGINES
    trials: int = 100_000
    seed: int = 12345
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if not set(self.engines) <= set(ENGINES) or not self.engines:
            raise ValueError(f"engines must be a non-empty subset of {ENGINES}")
        if "montecarlo" in self.engines and self.trials < 1:
            raise ValueError("trials must be >= 1 when montecarlo is selected")


@dataclass(frozen=True)
class Row:
    value: float
    metric: str
    engine: str
    mean: float
    std_error: float


@dataclass(frozen=True)
class SweepResult:
    swept_param: str
    rows: tuple


def experiment_from_dict(d: dict) -> Experiment:
    d = dict(d)
    d["config"] = SystemConfig.from_dict(d.get("config", {}))
    sweep = d["sweep"]
    d["sweep"] = SweepSpec(sweep["parameter"], tuple(float(v) for v in sweep["values"]))
    if "engines" in d:
        d["engines"] = tuple(d["engines"])
    return Experiment(**d)


def experiment_from_json(path: str) -> Experiment:
    with open(path) as fh:
        return experiment_from_dict(json.load(fh))


def _point_seed(seed: int, index: int) -> int:
    return int(np.random.SeedSequence([seed, index]).generate_state(1)[0])


def _resolve_pair_region(cfg: SystemConfig, opt: dict):
    """Partition and (xi1, xi2) for a two-group region-division point."""
    r2 = opt.get("r2")
    partition = two_region_partition(cfg, float(r2)) if r2 is not None else default_partition(cfg)
    xi2 = opt["xi2"]
    if xi2 == "max_weak":
        xi2 = max_weak_coefficient(cfg, float(opt["xi1"]), partition)
    xi1 = opt["xi1"]
    if xi1 == "design":
        xi1 = min_coefficient(cfg, partition, 0, (float(xi2),))
    return partition, float(xi1), float(xi2)


def _pair_region_point(cfg, opt, engines, trials, seed):
    partition, xi1, xi2 = _resolve_pair_region(cfg, opt)
    rows = []
    if "analytic" in engines:
        if isinstance(cfg.fading, Nakagami):
            probs = pair_probs_region(cfg, xi1, xi2, partition)
            m1n = solo_success_region(cfg, "near", xi1, xi2, partition)
            m1f = solo_success_region(cfg, "far", xi1, xi2, partition)
        else:
            probs = pair_probs_ff(cfg, xi1, xi2, partition)
            m1n = solo_success_ff(cfg, xi1, *partition.bounds(1))
            m1f = solo_success_ff(cfg, xi2, *partition.bounds(2))
        rep = throughput_two_node(cfg, probs, m1n, m1f, partition.membership_probability(1))
        rows += [
            ("p_2", "analytic", probs.p2, 0.0),
            ("p_1", "analytic", probs.p1, 0.0),
            ("m_2", "analytic", probs.m2, 0.0),
            ("c_suc", "analytic", rep.c_suc_bits, 0.0),
            ("normalized", "analytic", rep.normalized, 0.0),
        ]
    if "montecarlo" in engines:
        est = estimate_metrics(cfg, RegionDivision(partition), (xi1, xi2), trials, seed)
        for name, key in [
            ("p_2", "p_2"),
            ("p_1", "p_1"),
            ("m_2", "m_n"),
            ("c_suc", "c_suc"),
            ("normalized", "normalized"),
        ]:
            e = est[key]
            rows.append((name, "montecarlo", e.mean, e.std_error))
    return rows


def _pair_power_point(cfg, opt, engines, trials, seed):
    policy = solve_beta_tilde(cfg, float(opt["p_near"]))
    xi2 = float(opt["xi2"])
    xi1 = opt["xi1"]
    if xi1 == "design":
        xi1 = design_power_division_floor(cfg, policy.beta_tilde, xi2)
    xi1 = float(xi1)
    rows = []
    if "analytic" in engines:
        probs = pair_probs_power(cfg, xi1, xi2, policy)
        m1n = solo_success_power(cfg, "near", xi1, xi2, policy)
        m1f = solo_success_power(cfg, "far", xi1, xi2, policy)
        rep = throughput_two_node(cfg, probs, m1n, m1f, policy.p_near)
        rows += [
            ("p_2", "analytic", probs.p2, 0.0),
            ("p_1", "analytic", probs.p1, 0.0),
            ("m_2", "analytic", probs.m2, 0.0),
            ("c_suc", "analytic", rep.c_suc_bits, 0.0),
            ("normalized", "analytic", rep.normalized, 0.0),
        ]
    if "montecarlo" in engines:
        est = estimate_metrics(cfg, PowerDivision(policy), (xi1, xi2), trials, seed)
        for name, key in [
            ("p_2", "p_2"),
            ("p_1", "p_1"),
            ("m_2", "m_n"),
            ("c_suc", "c_suc"),
            ("normalized", "normalized"),
        ]:
            e = est[key]
            rows.append((name, "montecarlo", e.mean, e.std_error))
    return rows


def _resolve_coefficients(cfg: SystemConfig, opt: dict, partition: SubregionPartition):
    """Coefficient entries back to front; "min" entries take their worst-case
    decode floor given the already-resolved weaker coefficients, "sweep"
    entries take the swept strong coefficient."""
    spec = list(opt["coefficients"])
    xi = [0.0] * len(spec)
    for i in range(len(spec) - 1, -1, -1):
        if spec[i] == "min":
            xi[i] = min_coefficient(cfg, partition, i, tuple(xi[i + 1 :]))
        elif spec[i] == "sweep":
            xi[i] = float(opt["xi1"])
        else:
            xi[i] = float(spec[i])
    return tuple(xi)


def _multiplex_point(cfg, opt, engines, trials, seed):
    partition = default_partition(cfg)
    xi = _resolve_coefficients(cfg, opt, partition)
    rows = []
    if "analytic" in engines:
        out = multiplex_outcome(cfg, xi, partition)
        rows.append(("m_n", "analytic", out.m_n, 0.0))
    if "montecarlo" in engines:
        est = estimate_metrics(cfg, RegionDivision(partition), xi, trials, seed)
        for key in ("m_n", "c_suc", "normalized"):
            e = est[key]
            rows.append((key, "montecarlo", e.mean, e.std_error))
    return rows


def _general_sim_point(cfg, opt, engines, trials, seed):
    if "analytic" in engines:
        raise ValueError("scenario 'general_sim' is simulation-only")
    partition = default_partition(cfg)
    xi = _resolve_coefficients(cfg, opt, partition)
    est = estimate_metrics(cfg, RegionDivision(partition), xi, trials, seed)
    return [
        (key, "montecarlo", est[key].mean, est[key].std_error)
        for key in ("m_n", "c_suc", "normalized")
    ]


def _benchmarks_point(cfg, opt, engines, trials, seed):
    if "analytic" in engines:
        raise ValueError("scenario 'benchmarks' is simulation-only")
    rows = []
    for system in ("backcom_noma", "backcom_tdma", "conv_noma", "conv_tdma"):
        e = benchmark(cfg, system, trials, seed)
        rows.append((system, "montecarlo", e.mean, e.std_error))
    return rows


def _benchmark_ratio_point(cfg, opt, engines, trials, seed):
    if "analytic" in engines:
        raise ValueError("scenario 'benchmark_ratio' is simulation-only")
    rows = []
    for name, noma, tdma in [
        ("noma_gain_backcom", "backcom_noma", "backcom_tdma"),
        ("noma_gain_conventional", "conv_noma", "conv_tdma"),
    ]:
        a = benchmark(cfg, noma, trials, seed)
        b = benchmark(cfg, tdma, trials, seed + 1)
        ratio = a.mean / b.mean
        se = abs(ratio) * math.sqrt(
            (a.std_error / a.mean) ** 2 + (b.std_error / b.mean) ** 2
        )
        rows.append((name, "montecarlo", ratio, se))
    return rows


_SCENARIOS = {
    "pair_region": _pair_region_point,
    "pair_power": _pair_power_point,
    "multiplex": _multiplex_point,
    "general_sim": _general_sim_point,
    "benchmarks": _benchmarks_point,
    "benchmark_ratio": _benchmark_ratio_point,
}

# swept parameters living on the config rather than in the options
_CONFIG_PARAMS = {"gamma_db": "sinr_threshold_db"}


def run(experiment: Experiment) -> SweepResult:
    """Evaluate every grid point with the selected engines.

    Deterministic given the seed: each point draws its own sub-seed from the
    master seed and its grid index, so concurrent evaluation (and the row
    sort) cannot change output bytes.
    """
    if experiment.scenario not in _SCENARIOS:
        raise ValueError(f"unknown scenario {experiment.scenario!r}")
    handler = _SCENARIOS[experiment.scenario]
    param = experiment.sweep.parameter
    rows = []
    for idx, value in enumerate(experiment.sweep.values):
        cfg, opt = experiment.config, dict(experiment.options)
        if param in _CONFIG_PARAMS:
            cfg = cfg.with_(**{_CONFIG_PARAMS[param]: value})
        else:
            opt[param] = value
        try:
            point = handler(
                cfg, opt, experiment.engines, experiment.trials, _point_seed(experiment.seed, idx)
            )
        except Exception as exc:
            raise RuntimeError(f"{experiment.name}: {param} = {value!r} failed: {exc}") from exc
        rows += [Row(float(value), metric, engine, m, se) for metric, engine, m, se in point]
    rows.sort(key=lambda r: (r.value, r.metric, r.engine))
    return SweepResult(swept_param=param, rows=tuple(rows))


CSV_HEADER = ("swept_param", "value", "metric", "engine", "mean", "std_error")


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def emit_csv(result: SweepResult, path) -> None:
    """RFC-4180 CSV, LF line endings, 12 significant digits."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in result.rows:
        w.writerow(
            [result.swept_param, _fmt(r.value), r.metric, r.engine, _fmt(r.mean), _fmt(r.std_error)]
        )
    with open(path, "w", newline="") as fh:
        fh.write(buf.getvalue())


def parse_csv(path) -> SweepResult:
    """Inverse of emit_csv up to the 12-digit rounding of the means."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != CSV_HEADER:
            raise ValueError(f"unexpected CSV header {header!r}")
        rows, param = [], ""
        for rec in reader:
            param = rec[0]
            rows.append(Row(float(rec[1]), rec[2], rec[3], float(rec[4]), float(rec[5])))
    return SweepResult(swept_param=param, rows=tuple(rows))


_PALETTE = (
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
)


def emit_svg(result: SweepResult, path) -> None:
    """Self-contained line chart: one polyline per (metric, engine)."""
    width, height, pad = 800, 500, 60
    series: dict[tuple, list] = {}
    for r in result.rows:
        series.setdefault((r.metric, r.engine), []).append((r.value, r.mean))
    xs = [r.value for r in result.rows] or [0.0]
    ys = [r.mean for r in result.rows] or [0.0]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    xs_span = (x1 - x0) or 1.0
    ys_span = (y1 - y0) or 1.0

    def sx(v):
        return pad + (v - x0) / xs_span * (width - 2 * pad)

    def sy(v):
        return height - pad - (v - y0) / ys_span * (height - 2 * pad)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" stroke="black"/>',
        f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" stroke="black"/>',
        f'<text x="{width / 2:.1f}" y="{height - pad / 3:.1f}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="14">{result.swept_param}</text>',
    ]
    for k, (key, pts) in enumerate(sorted(series.items())):
        color = _PALETTE[k % len(_PALETTE)]
        coords = " ".join(f"{sx(v):.2f},{sy(m):.2f}" for v, m in sorted(pts))
        parts.append(f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        parts.append(
            f'<text x="{width - pad + 4}" y="{pad + 16 * k:.1f}" font-family="sans-serif" '
            f'font-size="11" fill="{color}" text-anchor="end">{key[0]} ({key[1]})</text>'
        )
    parts.append("</svg>")
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(parts) + "\n")


def _grid(lo, hi, n):
    return tuple(float(v) for v in np.linspace(lo, hi, n))


def _log_grid(lo, hi, n):
    return tuple(float(v) for v in np.geomspace(lo, hi, n))


_GAMMA_GRID = tuple(float(v) for v in range(0, 11))
_FF = SystemConfig()
_NAK4 = SystemConfig(fading=Nakagami(4.0))
_RAYLEIGH = SystemConfig(fading=Nakagami(1.0), path_loss_exponent=4.0)


def presets() -> dict:
    """Built-in experiments covering the standard sweeps."""
    gamma5 = {"sinr_threshold_db": 5.0}
    return {
        # two-node validation sweeps over the SINR threshold
        "fig4a": Experiment(
            "fig4a", _FF, "pair_region", SweepSpec("gamma_db", _GAMMA_GRID),
            options={"xi1": 0.7, "xi2": 0.5},
        ),
        "fig4b": Experiment(
            "fig4b", _FF.with_(subregion_count=3), "multiplex",
            SweepSpec("gamma_db", _GAMMA_GRID),
            options={"coefficients": (0.7, 0.5, 0.3)},
        ),
        "fig4c": Experiment(
            "fig4c", _FF.with_(subregion_count=5), "general_sim",
            SweepSpec("gamma_db", _GAMMA_GRID), engines=("montecarlo",),
            options={"coefficients": (0.7, 0.5, 0.3, 0.1, 0.05)},
        ),
        # weak-coefficient sweep with the interior throughput maximum
        "fig5": Experiment(
            "fig5", _FF.with_(**gamma5), "pair_region",
            SweepSpec("xi2", _log_grid(1e-4, 0.7, 13)),
            options={"xi1": 0.7},
        ),
        # strong-coefficient sweeps with the weaker ladder at its decode floor
        "fig6a": Experiment(
            "fig6a", _FF.with_(subregion_count=3, **gamma5), "multiplex",
            SweepSpec("xi1", _grid(0.05, 1.0, 20)),
            options={"coefficients": ("sweep", "min", 0.007)},
        ),
        "fig6b": Experiment(
            "fig6b", _FF.with_(subregion_count=5, **gamma5), "multiplex",
            SweepSpec("xi1", _grid(0.1, 1.0, 10)),
            options={"coefficients": ("sweep", "min", "min", "min", "min")},
        ),
        # pairing-boundary sweeps at gamma = 5 dB, weak coefficient fixed
        "fig7a": Experiment(
            "fig7a", _FF.with_(**gamma5), "pair_region",
            SweepSpec("r2", _grid(5.0, 60.0, 12)),
            options={"xi1": "design", "xi2": 0.05},
        ),
        "fig7b": Experiment(
            "fig7b", _NAK4.with_(**gamma5), "pair_region",
            SweepSpec("r2", _grid(5.0, 60.0, 12)),
            options={"xi1": "design", "xi2": 0.05},
        ),
        "fig7c": Experiment(
            "fig7c", _NAK4.with_(**gamma5), "pair_power",
            SweepSpec("p_near", tuple(round(0.05 * i, 2) for i in range(1, 20))),
            options={"xi1": "design", "xi2": 0.05},
        ),
        # reference-system comparison under near-LOS fading
        "fig8a": Experiment(
            "fig8a", _NAK4, "benchmarks", SweepSpec("gamma_db", _GAMMA_GRID),
            engines=("montecarlo",),
        ),
        "fig8b": Experiment(
            "fig8b", _NAK4, "benchmark_ratio", SweepSpec("gamma_db", _GAMMA_GRID),
            engines=("montecarlo",),
        ),
    }
