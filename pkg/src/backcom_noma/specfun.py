"""Shared special functions and 1-D quadrature.

Only the parameter ranges the analytics actually visit are supported: the
hypergeometric evaluations stay left of z = 1, and the generalized incomplete
gamma arguments lie on a common ray from the origin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate as _integrate
from scipy import special as _special


class QuadratureError(RuntimeError):
    """Adaptive quadrature hit its subdivision limit.

    Carries the achieved absolute error estimate in ``error_estimate``.
    """

    def __init__(self, message: str, error_estimate: float):
        super().__init__(message)
        self.error_estimate = error_estimate


@dataclass(frozen=True)
class QuadratureSpec:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-8
    max_subdivisions: int = 2000

    def __post_init__(self):
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ValueError("tolerances must be > 0")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")


DEFAULT_QUAD = QuadratureSpec()


def gauss_2f1(a: float, b: float, c: float, z: float) -> float:
    """Gauss hypergeometric function 2F1(a, b; c; z) for real z < 1.

    Arguments with z <= -1 are continued via the Pfaff transform, which is
    what scipy does internally; z >= 1 is outside the supported range.
    """
    if c <= 0 and c == int(c):
        raise ValueError(f"2F1 pole: c = {c} is a non-positive integer")
    if z >= 1.0:
        raise ValueError(f"2F1 argument z = {z} outside supported range (z < 1)")
    out = float(_special.hyp2f1(a, b, c, z))
    if not math.isfinite(out):
        raise ValueError(f"2F1({a}, {b}; {c}; {z}) did not evaluate to a finite value")
    return out


def integrate(f, lo: float, hi: float, spec: QuadratureSpec = DEFAULT_QUAD, *, complex_valued: bool = False):
    """Adaptive integral of f over (lo, hi); hi may be inf.

    An infinite upper limit is mapped to (0, 1] with u = 1/(1 + x - lo).
    Raises QuadratureError when the tolerance cannot be met.
    """
    if not lo <= hi:
        raise ValueError("need lo <= hi")
    if lo == hi:
        return 0.0 + 0.0j if complex_valued else 0.0

    if math.isinf(hi):
        g = lambda u: f(lo + (1.0 - u) / u) / u**2
        a, b = 0.0, 1.0
    else:
        g, a, b = f, lo, hi

    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", _integrate.IntegrationWarning)
        value, err = _integrate.quad(
            g,
            a,
            b,
            epsabs=spec.abs_tol,
            epsrel=spec.rel_tol,
            limit=spec.max_subdivisions,
            complex_func=complex_valued,
        )
    # complex_func=True reports the real/imag error estimates as a complex pair
    err = abs(err)
    if err > max(1e3 * spec.abs_tol, 10 * spec.rel_tol * abs(value)):
        raise QuadratureError(
            f"integral did not converge (error estimate {err:.3e})", err
        )
    return value


def gamma_upper(a: float, z) -> complex | float:
    """Upper incomplete gamma integral from z to infinity (a > 0 for the
    scipy fast path; otherwise only used through gamma_gen_incomplete)."""
    if a <= 0:
        raise ValueError("gamma_upper requires a > 0")
    return _special.gammaincc(a, z) * _special.gamma(a)


def gamma_gen_incomplete(a: float, z0, z1, spec: QuadratureSpec = DEFAULT_QUAD):
    """Generalized incomplete gamma: integral of t^(a-1) e^(-t) from z0 to z1
    along the straight segment.

    Accepts real or complex endpoints on a common ray from the origin.  Real
    non-negative endpoints with a > 0 use the regularized-gamma fast path;
    everything else is direct contour quadrature.
    """
    z0c, z1c = complex(z0), complex(z1)
    if z0c == z1c:
        return 0.0 if (z0c.imag == 0 and z1c.imag == 0) else 0.0 + 0.0j

    real_case = z0c.imag == 0 and z1c.imag == 0 and z0c.real >= 0 and z1c.real >= 0
    if real_case and a > 0:
        x0, x1 = z0c.real, z1c.real
        return float(
            (_special.gammaincc(a, x0) - _special.gammaincc(a, x1)) * _special.gamma(a)
        )

    if not (min(z0c.real, z1c.real) > 0 or a > 0):
        raise ValueError("need Re(z) > 0 on the path or a > 0 for integrability")

    d = z1c - z0c

    def f(u):
        t = z0c + u * d
        return d * t ** (a - 1.0) * np.exp(-t)

    out = integrate(f, 0.0, 1.0, spec, complex_valued=True)
    if real_case:
        return out.real
    return out


def gamma_gen_incomplete_real(a, x0, x1):
    """Vectorized real-argument generalized incomplete gamma (a > 0 only)."""
    return (_special.gammaincc(a, x0) - _special.gammaincc(a, x1)) * _special.gamma(a)
