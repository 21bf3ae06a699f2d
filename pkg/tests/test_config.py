import json
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from backcom_noma.config import (
    FadingFree,
    Nakagami,
    SubregionPartition,
    SystemConfig,
    db_to_linear,
    dbm_to_watts,
    default_partition,
    two_region_partition,
)


def test_unit_conversions():
    assert dbm_to_watts(30.0) == pytest.approx(1.0)
    assert dbm_to_watts(0.0) == pytest.approx(1e-3)
    assert db_to_linear(10.0) == pytest.approx(10.0)
    assert db_to_linear(0.0) == pytest.approx(1.0)


def test_default_config_matches_reference_setup():
    cfg = SystemConfig()
    assert cfg.inner_radius_m == 1.0
    assert cfg.outer_radius_m == 65.0
    assert cfg.node_count == 60
    assert cfg.reader_power_w == pytest.approx(10 ** (35 / 10) / 1000)
    assert cfg.noise_power_w == pytest.approx(1e-13)
    assert cfg.sinr_threshold == pytest.approx(10 ** 0.5)
    assert isinstance(cfg.fading, FadingFree)


def test_with_returns_modified_copy():
    cfg = SystemConfig()
    other = cfg.with_(sinr_threshold_db=10.0)
    assert other.sinr_threshold_db == 10.0
    assert cfg.sinr_threshold_db == 5.0


def test_from_dict_fading_forms():
    assert isinstance(SystemConfig.from_dict({"fading": "rayleigh"}).fading, Nakagami)
    assert SystemConfig.from_dict({"fading": {"m": 4}}).fading == Nakagami(4.0)
    assert isinstance(SystemConfig.from_dict({"fading": "none"}).fading, FadingFree)
    with pytest.raises(ValueError):
        SystemConfig.from_dict({"fading": "weird"})


def test_from_json_round_trip(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"sinr_threshold_db": 8.0, "fading": {"m": 2.0}}))
    cfg = SystemConfig.from_json(str(path))
    assert cfg.sinr_threshold_db == 8.0
    assert cfg.fading == Nakagami(2.0)


def test_nakagami_rejects_small_shape():
    with pytest.raises(ValueError):
        Nakagami(0.4)


def test_partition_requires_increasing_radii():
    with pytest.raises(ValueError):
        SubregionPartition((1.0, 1.0, 65.0))


@given(st.integers(min_value=1, max_value=8))
def test_default_partition_equal_area(n):
    cfg = SystemConfig(subregion_count=n)
    part = default_partition(cfg)
    assert part.subregion_count == n
    areas = [part.bounds(i)[1] ** 2 - part.bounds(i)[0] ** 2 for i in range(1, n + 1)]
    assert all(math.isclose(a, areas[0], rel_tol=1e-12) for a in areas)
    assert math.isclose(sum(part.membership_probability(i) for i in range(1, n + 1)), 1.0)


def test_two_region_partition_boundary():
    cfg = SystemConfig()
    part = two_region_partition(cfg, 30.0)
    assert part.radii == (1.0, 30.0, 65.0)
    assert part.membership_probability(1) == pytest.approx((900 - 1) / (65**2 - 1))
