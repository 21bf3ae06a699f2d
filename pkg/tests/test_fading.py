import math

import numpy as np
import pytest

from backcom_noma.config import Nakagami, SystemConfig
from backcom_noma.fading import (
    CompositeDist,
    composite_cdf,
    composite_pdf,
    full_annulus_dist,
    pair_probs_power,
    pair_probs_region,
    solo_success_power,
    solo_success_region,
    solve_beta_tilde,
)

NAK4 = SystemConfig(fading=Nakagami(4.0))


def test_composite_dist_validation():
    with pytest.raises(ValueError):
        CompositeDist(0.3, 1.0, 65.0, 2.5)
    with pytest.raises(ValueError):
        CompositeDist(1.0, 65.0, 1.0, 2.5)
    with pytest.raises(ValueError):
        composite_cdf(CompositeDist(1.0, 1.0, 65.0, 2.5), -1.0)


def test_composite_cdf_frozen_oracles():
    # empirical CDF oracle, 8e6 independent draws
    d = CompositeDist(4.0, 1.0, 65.0, 2.5)
    assert composite_cdf(d, 1e-9) == pytest.approx(0.191141, abs=1e-3)
    assert composite_cdf(d, 1e-8) == pytest.approx(0.632368, abs=1e-3)
    assert composite_cdf(d, 1e-7) == pytest.approx(0.853669, abs=1e-3)
    assert composite_cdf(d, 0.0) == 0.0
    assert composite_cdf(d, 1e6) == pytest.approx(1.0, abs=1e-12)


def test_composite_cdf_monotone_and_pdf_is_derivative():
    d = CompositeDist(2.0, 1.0, 65.0, 3.0)
    xs = np.geomspace(1e-13, 1e-3, 40)
    cdf = composite_cdf(d, xs)
    assert np.all(np.diff(cdf) >= 0)
    for x in (1e-11, 1e-9, 1e-7):
        h = x * 1e-4
        numeric = (composite_cdf(d, x + h) - composite_cdf(d, x - h)) / (2 * h)
        assert composite_pdf(d, x) == pytest.approx(numeric, rel=1e-5)


def test_region_pair_probs_frozen_oracles():
    # brute-force Monte Carlo oracles, 4e6 independent draws
    probs = pair_probs_region(NAK4.with_(sinr_threshold_db=5.0), 0.7, 0.5)
    assert probs.p2 == pytest.approx(0.855933, abs=1e-3)
    assert probs.p1 == pytest.approx(0.0, abs=1e-4)

    rayleigh = SystemConfig(
        fading=Nakagami(1.0), path_loss_exponent=4.0, sinr_threshold_db=0.0
    )
    probs = pair_probs_region(rayleigh, 0.7, 0.5)
    assert probs.p2 == pytest.approx(0.074426, abs=1e-3)
    assert probs.p1 == pytest.approx(0.684112, abs=2e-3)


def test_region_pair_probs_requires_fading_and_order():
    with pytest.raises(ValueError):
        pair_probs_region(SystemConfig(), 0.7, 0.5)
    with pytest.raises(ValueError):
        pair_probs_region(NAK4, 0.05, 0.7)


def test_solve_beta_tilde():
    policy = solve_beta_tilde(NAK4, 0.5)
    # independent 8e6-draw quantile oracle: 4.595e-9
    assert policy.beta_tilde == pytest.approx(4.5952e-9, rel=2e-3)
    d = full_annulus_dist(NAK4)
    assert composite_cdf(d, policy.beta_tilde) == pytest.approx(0.5, abs=1e-9)
    with pytest.raises(ValueError):
        solve_beta_tilde(NAK4, 0.0)


def test_power_pair_probs_frozen_oracle():
    policy = solve_beta_tilde(NAK4, 0.5)
    probs = pair_probs_power(NAK4.with_(sinr_threshold_db=5.0), 0.7, 0.05, policy)
    assert probs.p2 == pytest.approx(0.999983, abs=1e-4)
    assert probs.p1 == pytest.approx(0.000017, abs=1e-4)


def test_power_pair_probs_degenerate_threshold():
    # a threshold below the weak-decode floor leaves nothing for the pair
    policy = solve_beta_tilde(NAK4, 0.999999)
    cfg = NAK4.with_(sinr_threshold_db=30.0)
    probs = pair_probs_power(cfg, 0.7, 0.0001, policy)
    assert probs.p2 == 0.0


def test_solo_success_region_limits():
    lo = solo_success_region(NAK4.with_(sinr_threshold_db=-50.0), "near", 0.7, 0.05)
    hi = solo_success_region(NAK4.with_(sinr_threshold_db=80.0), "far", 0.7, 0.05)
    assert lo == pytest.approx(1.0, abs=1e-9)
    assert hi == pytest.approx(0.0, abs=1e-9)
    with pytest.raises(ValueError):
        solo_success_region(NAK4, "middle", 0.7, 0.05)


def test_solo_success_power_truncation():
    policy = solve_beta_tilde(NAK4, 0.5)
    cfg = NAK4.with_(sinr_threshold_db=5.0)
    s_hi = solo_success_power(cfg, "near", 0.7, 0.05, policy)
    s_lo = solo_success_power(cfg, "far", 0.7, 0.05, policy)
    assert 0.0 <= s_lo <= s_hi <= 1.0
    # decode floor below the threshold: every high-group member succeeds
    assert solo_success_power(NAK4.with_(sinr_threshold_db=-20.0), "near", 0.7, 0.05, policy) == 1.0
    # decode floor above the threshold: no low-group member can succeed
    assert solo_success_power(NAK4.with_(sinr_threshold_db=60.0), "far", 0.7, 0.0001, policy) == 0.0


def test_pdf_total_mass():
    for m, alpha in ((1.0, 4.0), (4.0, 2.5)):
        d = CompositeDist(m, 1.0, 65.0, alpha)
        ts = np.linspace(math.log(65.0 ** (-2 * alpha)) - 40.0, 12.0, 20001)
        mass = np.trapezoid(composite_pdf(d, np.exp(ts)) * np.exp(ts), ts)
        assert mass == pytest.approx(1.0, abs=1e-6)
