import math

import numpy as np
import pytest
from scipy import special

from backcom_noma.specfun import (
    QuadratureError,
    QuadratureSpec,
    gamma_gen_incomplete,
    gamma_gen_incomplete_real,
    gamma_upper,
    gauss_2f1,
    integrate,
)


def test_gauss_2f1_binomial_identity():
    # 2F1(a, b; b; z) = (1 - z)^(-a)
    for a, b, z in [(0.3, 1.7, 0.5), (-0.4, 0.25, -2.0), (1.2, 0.8, 0.9)]:
        assert gauss_2f1(a, b, b, z) == pytest.approx((1 - z) ** (-a), rel=1e-12)


def test_gauss_2f1_rejects_unsupported():
    with pytest.raises(ValueError):
        gauss_2f1(0.5, 0.5, -1.0, 0.5)
    with pytest.raises(ValueError):
        gauss_2f1(0.5, 0.5, 1.5, 1.0)


def test_integrate_finite_and_infinite():
    assert integrate(math.sin, 0.0, math.pi) == pytest.approx(2.0, abs=1e-10)
    assert integrate(lambda x: math.exp(-x), 3.0, math.inf) == pytest.approx(
        math.exp(-3.0), rel=1e-9
    )
    assert integrate(lambda x: x, 1.0, 1.0) == 0.0


def test_integrate_complex_valued():
    val = integrate(lambda x: complex(math.cos(x), math.sin(x)), 0.0, math.pi, complex_valued=True)
    assert val == pytest.approx(complex(0.0, 2.0), abs=1e-10)


def test_integrate_raises_on_breakdown():
    spec = QuadratureSpec(abs_tol=1e-12, rel_tol=1e-12, max_subdivisions=1)
    with pytest.raises(QuadratureError) as exc:
        integrate(lambda x: math.sin(1000.0 * x), 0.0, 10.0, spec)
    assert exc.value.error_estimate > 0


def test_quadrature_spec_validation():
    with pytest.raises(ValueError):
        QuadratureSpec(abs_tol=0.0)
    with pytest.raises(ValueError):
        QuadratureSpec(max_subdivisions=0)


def test_gamma_upper_matches_exponential():
    for z in (0.1, 1.0, 7.5):
        assert gamma_upper(1.0, z) == pytest.approx(math.exp(-z), rel=1e-12)
    with pytest.raises(ValueError):
        gamma_upper(-0.5, 1.0)


def test_gamma_gen_incomplete_real_fast_path():
    a, x0, x1 = 2.5, 0.3, 4.0
    direct = integrate(lambda t: t ** (a - 1) * math.exp(-t), x0, x1)
    assert gamma_gen_incomplete(a, x0, x1) == pytest.approx(direct, rel=1e-9)
    assert gamma_gen_incomplete_real(a, x0, x1) == pytest.approx(direct, rel=1e-9)


def test_gamma_gen_incomplete_negative_order_contour():
    # a < 0 has no regularized fast path; check against the recurrence
    # Gamma(a, x0, x1) = (Gamma(a+1, x0, x1) - [-t^a e^-t]_{x0}^{x1}) / a
    a, x0, x1 = -0.4, 0.2, 3.0
    upper = gamma_gen_incomplete(a + 1.0, x0, x1)
    boundary = x1**a * math.exp(-x1) - x0**a * math.exp(-x0)
    expected = (upper + boundary) / a
    assert gamma_gen_incomplete(a, x0, x1) == pytest.approx(expected, rel=1e-8)


def test_gamma_gen_incomplete_complex_ray():
    a = -0.2
    z0, z1 = complex(0.5, 0.5), complex(5.0, 5.0)
    val = gamma_gen_incomplete(a, z0, z1)
    d = z1 - z0
    grid = np.linspace(0.0, 1.0, 20001)
    t = z0 + grid * d
    riemann = np.trapezoid(d * t ** (a - 1.0) * np.exp(-t), grid)
    assert val == pytest.approx(riemann, rel=1e-5)


def test_gamma_gen_incomplete_additive():
    a = 1.7
    assert gamma_gen_incomplete(a, 0.1, 5.0) == pytest.approx(
        gamma_gen_incomplete(a, 0.1, 1.0) + gamma_gen_incomplete(a, 1.0, 5.0), rel=1e-10
    )
    assert gamma_gen_incomplete(a, 2.0, 2.0) == 0.0


def test_gamma_gen_incomplete_vs_scipy_total():
    a = 3.2
    # integrating essentially the whole ray recovers the complete gamma
    assert gamma_gen_incomplete(a, 0.0, 50.0) == pytest.approx(special.gamma(a), rel=1e-9)
