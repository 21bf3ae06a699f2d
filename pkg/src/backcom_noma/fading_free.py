"""Closed-form two-node analytics for the pure path-loss channel.

Geometry convention: the strong node is uniform in the inner ring
[R1, R2], the weak node in the outer ring [R2, R].  With ordered
coefficients the decode order is always strong-then-weak, so the pair
outcome reduces to events on y = r^(-2*alpha).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .config import SubregionPartition, SystemConfig, default_partition
from .specfun import gauss_2f1


@dataclass(frozen=True)
class PairDecodeProbs:
    """Decode-outcome probabilities for one multiplexed pair."""

    p2: float  # both signals decoded
    p1: float  # only the stronger signal decoded
    trials: int | None = None  # set when estimated by simulation

    def __post_init__(self):
        if not (-1e-9 <= self.p2 <= 1 + 1e-9 and -1e-9 <= self.p1 <= 1 + 1e-9):
            raise ValueError("probabilities must lie in [0, 1]")
        if self.p1 + self.p2 > 1 + 1e-9:
            raise ValueError("p1 + p2 must not exceed 1")

    @property
    def m2(self) -> float:
        """Average number of decoded nodes per pair."""
        return self.p1 + 2.0 * self.p2


@dataclass(frozen=True)
class ThroughputReport:
    c_suc_bits: float
    total_bits: float

    @property
    def normalized(self) -> float:
        return self.c_suc_bits / self.total_bits


def _pair_geometry(cfg: SystemConfig, partition: SubregionPartition | None):
    if partition is None:
        partition = default_partition(cfg)
    if partition.subregion_count != 2:
        raise ValueError("two-node analytics need a two-subregion partition")
    r1, r2, r = partition.radii
    return r1, r2, r


def omega(
    p: float,
    q: float,
    w: float,
    cfg: SystemConfig,
    xi1: float,
    xi2: float,
    partition: SubregionPartition | None = None,
) -> float:
    """Interior-branch probability mass for the pair-decode events.

    Integrates the strong-node tail probability over the weak-node density
    between q and p (hypergeometric antiderivative), plus the mass of the
    region where the strong signal decodes unconditionally (w to p).

    Note: the tail term enters with a plus sign; validated against 2-D
    brute-force integration of the defining probability.
    """
    if min(p, q, w) <= 0:
        raise ValueError("p, q, w must be > 0")
    r1, r2, r = _pair_geometry(cfg, partition)
    alpha = cfg.path_loss_exponent
    pt, noise, gamma = cfg.reader_power_w, cfg.noise_power_w, cfg.sinr_threshold

    def hyper_term(y: float) -> float:
        return (pt * xi1 / (noise * gamma * y)) ** (1.0 / alpha) * gauss_2f1(
            -1.0 / alpha, 1.0 / alpha, (alpha - 1.0) / alpha, -pt * xi2 * y / noise
        )

    inv = lambda y: y ** (-1.0 / alpha)
    bracket = (
        inv(q) * r1**2
        - hyper_term(q)
        - inv(p) * r1**2
        + hyper_term(p)
    )
    return bracket / ((r2**2 - r1**2) * (r**2 - r2**2)) + (inv(w) - inv(p)) / (
        r**2 - r2**2
    )


def pair_probs_ff(
    cfg: SystemConfig,
    xi1: float,
    xi2: float,
    partition: SubregionPartition | None = None,
) -> PairDecodeProbs:
    """Exact pair-decode probabilities without fading.

    Piecewise in the SINR threshold; guard ties resolve to the earlier
    branch.  Requires xi1 >= xi2 so the decode order is fixed.
    """
    if xi1 < xi2:
        raise ValueError("need xi1 >= xi2 (ordered reflection coefficients)")
    r1, r2, r = _pair_geometry(cfg, partition)
    alpha = cfg.path_loss_exponent
    a2 = 2.0 * alpha
    pt, noise, gamma = cfg.reader_power_w, cfg.noise_power_w, cfg.sinr_threshold
    kappa = xi2 / xi1
    c2 = noise * gamma / (pt * xi2)  # weak-signal decode floor on y2
    c1 = noise * gamma / (pt * xi1)
    inv = lambda y: y ** (-1.0 / alpha)

    # p2: both decoded
    if gamma >= pt * xi2 * r2 ** (-a2) / noise:
        p2 = 0.0
    elif gamma <= r2 ** (-a2) / (kappa * r2 ** (-a2) + noise / (xi1 * pt)):
        p2 = (inv(max(r ** (-a2), c2)) - r2**2) / (r**2 - r2**2)
    elif r1 ** (-a2) <= c1 + max(r ** (-a2), c2) * gamma * kappa:
        p2 = 0.0
    else:
        p = max(r ** (-a2), r2 ** (-a2) / (gamma * kappa) - noise / (xi2 * pt), c2)
        q = min(r2 ** (-a2), r1 ** (-a2) / (gamma * kappa) - noise / (xi2 * pt))
        w = max(r ** (-a2), c2)
        p2 = omega(p, q, w, cfg, xi1, xi2, partition)

    # p1: only the stronger decoded
    if gamma <= pt * xi2 * r ** (-a2) / noise:
        p1 = 0.0
    elif r2 ** (-a2) >= c1 + min(r2 ** (-a2), c2) * gamma * kappa:
        p1 = (r**2 - inv(min(r2 ** (-a2), c2))) / (r**2 - r2**2)
    elif gamma >= r1 ** (-a2) / (kappa * r ** (-a2) + noise / (xi1 * pt)):
        # strong signal fails everywhere the weak one does
        p1 = 0.0
    else:
        p = max(r ** (-a2), r2 ** (-a2) / (gamma * kappa) - noise / (xi2 * pt))
        q = min(r2 ** (-a2), r1 ** (-a2) / (gamma * kappa) - noise / (xi2 * pt), c2)
        w = r ** (-a2)
        p1 = omega(p, q, w, cfg, xi1, xi2, partition)

    return PairDecodeProbs(p2=min(max(p2, 0.0), 1.0), p1=min(max(p1, 0.0), 1.0))


def m2_asymptotic(
    cfg: SystemConfig,
    kappa: float,
    partition: SubregionPartition | None = None,
) -> float:
    """Vanishing-noise limit of the average decoded nodes per pair.

    Piecewise in the product gamma * kappa; depends only on the geometry
    once noise is out of the picture.
    """
    if not 0 < kappa <= 1:
        raise ValueError("kappa must be in (0, 1]")
    r1, r2, r = _pair_geometry(cfg, partition)
    alpha = cfg.path_loss_exponent
    a2 = 2.0 * alpha
    gk = cfg.sinr_threshold * kappa
    # denominators and the middle-branch exponent re-derived from the
    # zero-noise integral; checked against direct quadrature
    denom = (r2**2 - r1**2) * (r**2 - r2**2)

    if gk <= 1.0:
        return 2.0
    if gk <= r2 ** (-a2) / r ** (-a2):
        return (
            2 * r2**2 * r**2
            + 2 * r1**2 * r2**2
            - 2 * r1**2 * r**2
            - r2**4 * (gk ** (-1.0 / alpha) + gk ** (1.0 / alpha))
        ) / denom
    if gk <= r1 ** (-a2) / r2 ** (-a2):
        return (
            2 * r1**2 * r2**2 - 2 * r1**2 * r**2 + (r**4 - r2**4) * gk ** (-1.0 / alpha)
        ) / denom
    if gk <= r1 ** (-a2) / r ** (-a2):
        return (
            -2 * r1**2 * r**2
            + r**4 * gk ** (-1.0 / alpha)
            + r1**4 * gk ** (1.0 / alpha)
        ) / denom
    return 0.0


def solo_success_ff(cfg: SystemConfig, xi: float, r_lo: float, r_hi: float) -> float:
    """Probability that a lone node in [r_lo, r_hi] beats the SNR threshold."""
    if not cfg.inner_radius_m <= r_lo < r_hi <= cfg.outer_radius_m:
        raise ValueError("require inner radius <= r_lo < r_hi <= outer radius")
    alpha = cfg.path_loss_exponent
    pt, noise, gamma = cfg.reader_power_w, cfg.noise_power_w, cfg.sinr_threshold
    if pt * xi * r_lo ** (-2 * alpha) / noise < gamma:
        return 0.0
    reach = (pt * xi / (gamma * noise)) ** (1.0 / alpha)
    return (min(r_hi**2, reach) - r_lo**2) / (r_hi**2 - r_lo**2)


def throughput_two_node(
    cfg: SystemConfig,
    probs: PairDecodeProbs,
    m1_near: float,
    m1_far: float,
    p_near: float,
) -> ThroughputReport:
    """Average decoded bits per slot for two-group pairing.

    Averages over the binomial count t of strong-group nodes: min(t, M-t)
    pairs run in double-length mini-slots, leftovers go solo.  total_bits is
    the same accounting with every decode guaranteed.
    """
    if not 0 <= p_near <= 1:
        raise ValueError("p_near must be in [0, 1]")
    m = cfg.node_count
    lr = cfg.slot_bits

    def average(m2: float, m1n: float, m1f: float) -> float:
        t = np.arange(m + 1)
        pmf = stats.binom.pmf(t, m, p_near)
        half = m // 2
        low = t <= half
        paired = np.where(low, t, m - t)
        # leftovers: far-group solos when t <= M/2, strong-group otherwise
        solo = np.where(low, (m - 2 * t) * m1f, (2 * t - m) * m1n)
        per_t = paired * (2.0 * lr / m) * m2 + solo * (lr / m)
        return float(np.sum(pmf * per_t))

    c_suc = average(probs.m2, m1_near, m1_far)
    total = average(2.0, 1.0, 1.0)
    return ThroughputReport(c_suc_bits=c_suc, total_bits=total)
