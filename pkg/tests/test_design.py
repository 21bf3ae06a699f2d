import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from backcom_noma.config import SystemConfig, default_partition
from backcom_noma.design import (
    CoefficientLadder,
    design_ladder,
    design_power_division_floor,
    max_weak_coefficient,
    min_coefficient,
)


def test_ladder_validation():
    with pytest.raises(ValueError):
        CoefficientLadder((0.1, 0.5), True, (0.0, 0.0))
    with pytest.raises(ValueError):
        CoefficientLadder((0.5, 0.0), True, (0.0, 0.0))
    lad = CoefficientLadder((0.5, 0.1), True, (0.5, 0.1))
    assert len(lad) == 2 and lad[0] == 0.5
    assert lad.kappa == pytest.approx(0.2)


@settings(deadline=None, max_examples=30)
@given(
    st.floats(min_value=-3.0, max_value=15.0),
    st.integers(min_value=1, max_value=6),
    st.floats(min_value=1.0, max_value=3.0),
)
def test_ladder_properties(gamma_db, n, slack):
    cfg = SystemConfig(sinr_threshold_db=gamma_db, subregion_count=n)
    lad = design_ladder(cfg, slack=slack)
    xs = lad.coefficients
    assert len(xs) == n
    assert all(x > 0 for x in xs)
    assert all(a >= b for a, b in zip(xs, xs[1:]))
    assert all(x >= f for x, f in zip(xs, lad.binding_constraints))
    assert lad.feasible == (xs[0] <= 1.0)


def test_slack_one_ladder_guarantees_worst_case_sinr():
    cfg = SystemConfig(sinr_threshold_db=5.0, subregion_count=3)
    part = default_partition(cfg)
    lad = design_ladder(cfg, part, slack=1.0)
    a2 = 2.0 * cfg.path_loss_exponent
    radii = part.radii
    gamma = cfg.sinr_threshold
    for i in range(3):
        # node on its outer bound, weaker nodes on their inner bounds
        sig = lad[i] * radii[i + 1] ** -a2 * cfg.reader_power_w
        interf = sum(
            lad[j] * radii[j] ** -a2 * cfg.reader_power_w for j in range(i + 1, 3)
        )
        sinr = sig / (interf + cfg.noise_power_w)
        assert sinr >= gamma * (1 - 1e-12)
        # unless the ordering constraint binds, the floor is exactly tight
        if i == 2 or lad[i] > lad[i + 1]:
            assert sinr == pytest.approx(gamma, rel=1e-9)


def test_min_coefficient_agrees_with_ladder():
    cfg = SystemConfig(sinr_threshold_db=7.0, subregion_count=4)
    part = default_partition(cfg)
    lad = design_ladder(cfg, part, slack=1.0)
    for i in range(4):
        assert min_coefficient(cfg, part, i, lad.coefficients[i + 1 :]) == pytest.approx(
            lad[i], rel=1e-12
        )
    with pytest.raises(ValueError):
        min_coefficient(cfg, part, 0, (0.1,))


def test_max_weak_coefficient_inverts_the_constraint():
    cfg = SystemConfig(sinr_threshold_db=5.0)
    part = default_partition(cfg)
    xi2 = max_weak_coefficient(cfg, 0.7, part)
    assert 0 < xi2 <= 0.7
    # plugging the result back, the strong floor equals 0.7 (or xi2 binds)
    floor = min_coefficient(cfg, part, 0, (xi2,))
    assert floor == pytest.approx(0.7, rel=1e-9) or xi2 == 0.7


def test_power_division_floor():
    cfg = SystemConfig(sinr_threshold_db=5.0)
    beta = 1e-9
    xi1 = design_power_division_floor(cfg, beta, 0.05)
    gamma = cfg.sinr_threshold
    assert xi1 == pytest.approx(
        max(0.05, gamma * (0.05 + cfg.noise_power_w / (cfg.reader_power_w * beta)))
    )
    with pytest.raises(ValueError):
        design_power_division_floor(cfg, 0.0, 0.05)
    with pytest.raises(ValueError):
        design_power_division_floor(cfg, beta, 0.0)
