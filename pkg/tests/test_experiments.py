import json

import pytest

from backcom_noma.config import SystemConfig
from backcom_noma.experiments import (
    Experiment,
    Row,
    SweepResult,
    SweepSpec,
    emit_csv,
    emit_svg,
    experiment_from_dict,
    parse_csv,
    presets,
    run,
)

PRESET_NAMES = (
    "fig4a", "fig4b", "fig4c", "fig5", "fig6a", "fig6b",
    "fig7a", "fig7b", "fig7c", "fig8a", "fig8b",
)


def _tiny(name, **changes):
    import dataclasses

    return dataclasses.replace(presets()[name], trials=300, seed=5, **changes)


def test_sweep_spec_validation():
    with pytest.raises(ValueError):
        SweepSpec("gamma_db", ())
    with pytest.raises(ValueError):
        SweepSpec("gamma_db", (1.0, 0.5))
    with pytest.raises(ValueError):
        Experiment("x", SystemConfig(), "pair_region", SweepSpec("gamma_db", (1.0,)), engines=())


def test_all_presets_defined():
    table = presets()
    assert set(PRESET_NAMES) <= set(table)
    for name in PRESET_NAMES:
        assert table[name].name == name
        assert table[name].sweep.values


def test_run_pair_region_rows_sorted_and_complete():
    exp = _tiny("fig4a")
    exp = Experiment(exp.name, exp.config, exp.scenario, SweepSpec("gamma_db", (0.0, 5.0)),
                     exp.engines, exp.trials, exp.seed, exp.options)
    res = run(exp)
    keys = [(r.value, r.metric, r.engine) for r in res.rows]
    assert keys == sorted(keys)
    assert len(keys) == len(set(keys))
    # 2 grid points x 5 metrics x 2 engines
    assert len(res.rows) == 20
    analytic = [r for r in res.rows if r.engine == "analytic"]
    assert all(r.std_error == 0.0 for r in analytic)


def test_run_is_deterministic():
    exp = _tiny("fig8b")
    import dataclasses

    exp = dataclasses.replace(exp, sweep=SweepSpec("gamma_db", (0.0, 5.0)))
    assert run(exp) == run(exp)


def test_run_surfaces_grid_point_in_errors():
    exp = Experiment(
        "broken", SystemConfig(), "pair_region", SweepSpec("gamma_db", (5.0,)),
        engines=("analytic",), options={"xi1": 0.05, "xi2": 0.7},
    )
    with pytest.raises(RuntimeError, match="gamma_db = 5.0"):
        run(exp)
    with pytest.raises(ValueError):
        run(Experiment("x", SystemConfig(), "mystery", SweepSpec("gamma_db", (1.0,))))


def test_simulation_only_scenarios_reject_analytic():
    import dataclasses

    exp = dataclasses.replace(_tiny("fig8a"), engines=("analytic", "montecarlo"))
    with pytest.raises(RuntimeError):
        run(exp)


def test_csv_round_trip(tmp_path):
    import dataclasses

    exp = dataclasses.replace(_tiny("fig4a"), sweep=SweepSpec("gamma_db", (0.0, 5.0)))
    res = run(exp)
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    emit_csv(res, p1)
    emit_csv(parse_csv(p1), p2)
    assert p1.read_bytes() == p2.read_bytes()
    text = p1.read_text()
    assert text.startswith("swept_param,value,metric,engine,mean,std_error\n")
    assert "\r" not in text


def test_empty_result_is_header_only(tmp_path):
    path = tmp_path / "empty.csv"
    emit_csv(SweepResult("gamma_db", ()), path)
    assert path.read_text() == "swept_param,value,metric,engine,mean,std_error\n"


def test_parse_csv_rejects_bad_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("a,b\n1,2\n")
    with pytest.raises(ValueError):
        parse_csv(path)


def test_emit_svg_is_self_contained(tmp_path):
    rows = (
        Row(0.0, "m_2", "analytic", 2.0, 0.0),
        Row(5.0, "m_2", "analytic", 1.5, 0.0),
        Row(0.0, "m_2", "montecarlo", 1.99, 0.01),
        Row(5.0, "m_2", "montecarlo", 1.48, 0.01),
    )
    path = tmp_path / "chart.svg"
    emit_svg(SweepResult("gamma_db", rows), path)
    text = path.read_text()
    assert text.startswith("<svg")
    assert text.count("<polyline") == 2
    assert "gamma_db" in text


def test_experiment_from_dict():
    exp = experiment_from_dict(
        {
            "name": "custom",
            "config": {"sinr_threshold_db": 3.0},
            "scenario": "pair_region",
            "sweep": {"parameter": "gamma_db", "values": [0, 2]},
            "engines": ["analytic"],
            "options": {"xi1": 0.7, "xi2": 0.5},
        }
    )
    assert exp.config.sinr_threshold_db == 3.0
    res = run(exp)
    assert {r.engine for r in res.rows} == {"analytic"}


def test_multiplex_preset_resolves_cascade():
    import dataclasses

    exp = dataclasses.replace(
        _tiny("fig6a"), sweep=SweepSpec("xi1", (0.5,)), engines=("montecarlo",)
    )
    res = run(exp)
    assert any(r.metric == "m_n" for r in res.rows)


def test_power_division_preset_runs():
    import dataclasses

    exp = dataclasses.replace(
        _tiny("fig7c"), sweep=SweepSpec("p_near", (0.5,)), engines=("montecarlo",)
    )
    res = run(exp)
    metrics = {r.metric for r in res.rows}
    assert {"p_2", "p_1", "c_suc"} <= metrics
