"""Two-node pairing analytics under Nakagami-m block fading.

The central object is the composite variable x = g^2 r^(-2*alpha) combining
the unit-mean Gamma fading term g and the random node distance r; every
probability here is a one-dimensional integral against its density.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize
from scipy import special as _special

from .config import Nakagami, SubregionPartition, SystemConfig, default_partition
from .fading_free import PairDecodeProbs, _pair_geometry
from .specfun import DEFAULT_QUAD, QuadratureSpec, integrate


@dataclass(frozen=True)
class CompositeDist:
    """Distribution of g^2 r^(-2*alpha) for r uniform-in-area on
    [r_lo, r_hi] and g ~ Gamma(shape m, mean 1)."""

    m: float
    r_lo: float
    r_hi: float
    alpha: float

    def __post_init__(self):
        if self.m < 0.5:
            raise ValueError("m must be >= 0.5")
        if not 0 < self.r_lo < self.r_hi:
            raise ValueError("need 0 < r_lo < r_hi")

    def cdf(self, x):
        return composite_cdf(self, x)

    def pdf(self, x):
        return composite_pdf(self, x)


def _gamma_upper(a, z):
    return _special.gammaincc(a, z) * _special.gamma(a)


def _gamma_between(a, z0, z1):
    return (_special.gammaincc(a, z0) - _special.gammaincc(a, z1)) * _special.gamma(a)


def composite_cdf(d: CompositeDist, x):
    """CDF of the composite variable; vectorized in x."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("x must be >= 0")
    m, alpha = d.m, d.alpha
    rl, ru = d.r_lo, d.r_hi
    s = np.sqrt(x)
    with np.errstate(divide="ignore"):
        tail = np.where(
            x > 0,
            (
                ru**2 * _gamma_upper(m, m * ru**alpha * s)
                - rl**2 * _gamma_upper(m, m * rl**alpha * s)
                + (m * np.where(s > 0, s, 1.0)) ** (-2.0 / alpha)
                * _gamma_between(m + 2.0 / alpha, m * rl**alpha * s, m * ru**alpha * s)
            )
            / ((ru**2 - rl**2) * _special.gamma(m)),
            1.0,
        )
    out = 1.0 - tail
    return float(out) if np.isscalar(x) or out.ndim == 0 else out


def composite_pdf(d: CompositeDist, x):
    """Density of the composite variable; vectorized in x."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise ValueError("x must be > 0 for the density")
    m, alpha = d.m, d.alpha
    rl, ru = d.r_lo, d.r_hi
    s = np.sqrt(x)
    out = _gamma_between(m + 2.0 / alpha, m * rl**alpha * s, m * ru**alpha * s) / (
        m ** (2.0 / alpha)
        * x ** (1.0 / alpha + 1.0)
        * alpha
        * (ru**2 - rl**2)
        * _special.gamma(m)
    )
    return float(out) if np.isscalar(x) or out.ndim == 0 else out


def _integral(f, lo: float, hi: float, spec: QuadratureSpec, anchor: float) -> float:
    """Quadrature of f over [lo, hi] after the substitution x = exp(t).

    The composite variable lives at scales like 1e-9, so integrating on the
    linear axis can miss the entire mass; the log axis keeps the integrand
    resolvable.  anchor sets the lower cutoff when lo == 0.
    """
    if hi <= lo:
        return 0.0
    t_lo = math.log(lo) if lo > 0 else math.log(anchor) - 69.0
    # the density decays like exp(-sqrt(x)); 250 e-folds is past all mass
    t_hi = t_lo + 250.0 if math.isinf(hi) else math.log(hi)
    return integrate(lambda t: f(math.exp(t)) * math.exp(t), t_lo, t_hi, spec)


def _require_nakagami(cfg: SystemConfig) -> float:
    if not isinstance(cfg.fading, Nakagami):
        raise ValueError("this analysis requires Nakagami fading in the config")
    return cfg.fading.m


def _near_far_dists(cfg: SystemConfig, partition: SubregionPartition | None):
    r1, r2, r = _pair_geometry(cfg, partition)
    m = _require_nakagami(cfg)
    alpha = cfg.path_loss_exponent
    return (
        CompositeDist(m, r1, r2, alpha),
        CompositeDist(m, r2, r, alpha),
    )


def pair_probs_region(
    cfg: SystemConfig,
    xi1: float,
    xi2: float,
    partition: SubregionPartition | None = None,
    spec: QuadratureSpec = DEFAULT_QUAD,
) -> PairDecodeProbs:
    """Pair-decode probabilities for region-division pairing with fading.

    Either node can carry the instantaneously stronger signal, so both
    orderings contribute; each contribution is a single integral against the
    composite density of the interfering node.
    """
    if xi1 < xi2:
        raise ValueError("need xi1 >= xi2")
    da, db = _near_far_dists(cfg, partition)
    pt, noise, gamma = cfg.reader_power_w, cfg.noise_power_w, cfg.sinr_threshold
    kappa = xi2 / xi1
    c1 = noise * gamma / (pt * xi1)
    c2 = noise * gamma / (pt * xi2)

    def near_stronger_sinr(x2):
        return (1.0 - composite_cdf(da, gamma * kappa * x2 + c1)) * composite_pdf(db, x2)

    def far_stronger_sinr(x1):
        return (1.0 - composite_cdf(db, gamma * x1 / kappa + c2)) * composite_pdf(da, x1)

    if gamma < 1.0:
        ordering_a = lambda x2: (1.0 - composite_cdf(da, kappa * x2)) * composite_pdf(db, x2)
        ordering_b = lambda x1: (1.0 - composite_cdf(db, x1 / kappa)) * composite_pdf(da, x1)
        p2 = (
            _integral(ordering_a, c2 / (1.0 - gamma), math.inf, spec, c2)
            + _integral(near_stronger_sinr, c2, c2 / (1.0 - gamma), spec, c2)
            + _integral(ordering_b, c1 / (1.0 - gamma), math.inf, spec, c1)
            + _integral(far_stronger_sinr, c1, c1 / (1.0 - gamma), spec, c1)
        )
    else:
        p2 = _integral(near_stronger_sinr, c2, math.inf, spec, c2) + _integral(
            far_stronger_sinr, c1, math.inf, spec, c1
        )

    p1 = _integral(near_stronger_sinr, 0.0, c2, spec, c2) + _integral(
        far_stronger_sinr, 0.0, c1, spec, c1
    )
    return PairDecodeProbs(p2=min(max(p2, 0.0), 1.0), p1=min(max(p1, 0.0), 1.0))


def solo_success_region(
    cfg: SystemConfig,
    which: str,
    xi1: float,
    xi2: float,
    partition: SubregionPartition | None = None,
) -> float:
    """Solo decode probability for a near- or far-subregion node."""
    da, db = _near_far_dists(cfg, partition)
    pt, noise, gamma = cfg.reader_power_w, cfg.noise_power_w, cfg.sinr_threshold
    if which == "near":
        return float(1.0 - composite_cdf(da, noise * gamma / (pt * xi1)))
    if which == "far":
        return float(1.0 - composite_cdf(db, noise * gamma / (pt * xi2)))
    raise ValueError("which must be 'near' or 'far'")


@dataclass(frozen=True)
class PowerDivisionPolicy:
    """Instantaneous-power grouping rule: normalized threshold and the
    resulting high-power membership probability."""

    beta_tilde: float
    p_near: float

    def __post_init__(self):
        if self.beta_tilde <= 0:
            raise ValueError("beta_tilde must be > 0")
        if not 0 <= self.p_near <= 1:
            raise ValueError("p_near must be in [0, 1]")


def full_annulus_dist(cfg: SystemConfig) -> CompositeDist:
    return CompositeDist(
        _require_nakagami(cfg),
        cfg.inner_radius_m,
        cfg.outer_radius_m,
        cfg.path_loss_exponent,
    )


def solve_beta_tilde(cfg: SystemConfig, target_p_near: float) -> PowerDivisionPolicy:
    """Normalized power threshold giving the requested high-group share."""
    if not 0 < target_p_near < 1:
        raise ValueError("target_p_near must be in (0, 1)")
    d = full_annulus_dist(cfg)
    f = lambda logb: (1.0 - composite_cdf(d, math.exp(logb))) - target_p_near
    lo, hi = math.log(1e-30), math.log(1e10)
    if f(lo) * f(hi) > 0:
        raise RuntimeError("no bracketing interval for beta_tilde")
    logb = optimize.brentq(f, lo, hi, xtol=1e-15, rtol=1e-15)
    beta = math.exp(logb)
    # polish on the linear scale
    for _ in range(4):
        resid = (1.0 - composite_cdf(d, beta)) - target_p_near
        slope = -composite_pdf(d, beta)
        step = resid / slope
        if not math.isfinite(step):
            break
        beta -= step
    return PowerDivisionPolicy(beta_tilde=beta, p_near=target_p_near)


def pair_probs_power(
    cfg: SystemConfig,
    xi1: float,
    xi2: float,
    policy: PowerDivisionPolicy,
    spec: QuadratureSpec = DEFAULT_QUAD,
) -> PairDecodeProbs:
    """Pair-decode probabilities for power-division pairing.

    The high-power node's composite variable is truncated to [beta_tilde,
    inf), the low-power one to (0, beta_tilde); decode order is always high
    then low.
    """
    if xi1 < xi2:
        raise ValueError("need xi1 >= xi2")
    d = full_annulus_dist(cfg)
    pt, noise, gamma = cfg.reader_power_w, cfg.noise_power_w, cfg.sinr_threshold
    kappa = xi2 / xi1
    c1 = noise * gamma / (pt * xi1)
    c2 = noise * gamma / (pt * xi2)
    beta = policy.beta_tilde
    phi_beta = float(composite_cdf(d, beta))

    def high_tail(v):
        # survival of the truncated high-power variable at v >= beta
        return 1.0 - (composite_cdf(d, v) - phi_beta) / (1.0 - phi_beta)

    if beta <= c2:
        p2 = 0.0
    else:
        lo2 = min(beta, max(c2, beta / (gamma * kappa) - noise / (pt * xi2)))
        p2 = _integral(
            lambda x2: high_tail(gamma * kappa * x2 + c1) * composite_pdf(d, x2) / phi_beta,
            lo2,
            beta,
            spec,
            beta,
        ) + (float(composite_cdf(d, lo2)) - float(composite_cdf(d, c2))) / phi_beta

    lo1 = min(beta, c2, max(0.0, beta / (gamma * kappa) - noise / (pt * xi2)))
    hi1 = min(beta, c2)
    p1 = (
        _integral(
            lambda x2: high_tail(gamma * kappa * x2 + c1) * composite_pdf(d, x2) / phi_beta,
            lo1,
            hi1,
            spec,
            beta,
        )
        + float(composite_cdf(d, lo1)) / phi_beta
    )
    return PairDecodeProbs(p2=min(max(p2, 0.0), 1.0), p1=min(max(p1, 0.0), 1.0))


def solo_success_power(
    cfg: SystemConfig,
    which: str,
    xi1: float,
    xi2: float,
    policy: PowerDivisionPolicy,
) -> float:
    """Solo decode probability for a high- or low-power group node.

    Both probabilities are over the truncated composite distributions of the
    group members (the published forms omit the truncation normalization;
    the simulator arbitrates in favour of the normalized version).
    """
    d = full_annulus_dist(cfg)
    pt, noise, gamma = cfg.reader_power_w, cfg.noise_power_w, cfg.sinr_threshold
    beta = policy.beta_tilde
    phi_beta = float(composite_cdf(d, beta))
    if which == "near":
        c1 = noise * gamma / (pt * xi1)
        if c1 <= beta:
            return 1.0
        return float(1.0 - composite_cdf(d, c1)) / (1.0 - phi_beta)
    if which == "far":
        c2 = noise * gamma / (pt * xi2)
        if c2 >= beta:
            return 0.0
        return (phi_beta - float(composite_cdf(d, c2))) / phi_beta
    raise ValueError("which must be 'near' or 'far'")
