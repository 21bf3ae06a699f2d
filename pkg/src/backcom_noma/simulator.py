"""Monte Carlo engine: node placement, grouping, SIC decoding, slot accounting.

Two code paths share the same model: a readable per-trial path built from
sample_nodes / schedule / sic_decode, and a chunked vectorized kernel used by
estimate_metrics for large trial counts.  Groups are formed by taking the
g-th arrival of every still-populated class; arrivals are iid, so this is
distributionally identical to picking uniformly among unserved nodes and
keeps both paths deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .config import Nakagami, SubregionPartition, SystemConfig, default_partition
from .design import CoefficientLadder
from .fading import PowerDivisionPolicy

CONVENTIONAL_POWER_DBM = 20.0


@dataclass(frozen=True)
class RegionDivision:
    """Group by home subregion (long-term geometry)."""

    partition: SubregionPartition


@dataclass(frozen=True)
class PowerDivision:
    """Group by instantaneous composite power against a threshold."""

    threshold: PowerDivisionPolicy


@dataclass(frozen=True)
class SoloAccess:
    """No multiplexing: every node gets its own mini-slot."""


PairingPolicy = RegionDivision | PowerDivision | SoloAccess


@dataclass(frozen=True)
class NodeRealization:
    node_id: int
    distance_m: float
    fading_amplitude_sq: float  # g^2; 1 when fading-free
    subregion_index: int  # 1-based
    reflection_coeff: float

    def __post_init__(self):
        if self.distance_m <= 0 or self.fading_amplitude_sq <= 0:
            raise ValueError("distance and fading power must be > 0")
        if not 0 < self.reflection_coeff <= 1:
            raise ValueError("reflection coefficient must be in (0, 1]")


@dataclass(frozen=True)
class MiniSlotRecord:
    node_ids: tuple
    duration_fraction: float  # of the slot length
    decoded_count: int
    bits: float


@dataclass(frozen=True)
class TrialOutcome:
    minislots: tuple
    bits_decoded: float
    bits_offered: float


@dataclass(frozen=True)
class Estimate:
    mean: float
    std_error: float
    trials: int

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.std_error < 0:
            raise ValueError("std_error must be >= 0")


def _coeffs(ladder) -> tuple:
    if isinstance(ladder, CoefficientLadder):
        return ladder.coefficients
    return tuple(float(v) for v in ladder)


def received_power(node: NodeRealization, cfg: SystemConfig, conventional: bool = False) -> float:
    """Instantaneous received power at the reader, watts."""
    if conventional:
        p_t = 10.0 ** (CONVENTIONAL_POWER_DBM / 10.0) / 1000.0
        return p_t * node.fading_amplitude_sq * node.distance_m ** (-cfg.path_loss_exponent)
    return (
        cfg.reader_power_w
        * node.reflection_coeff
        * node.fading_amplitude_sq
        * node.distance_m ** (-2.0 * cfg.path_loss_exponent)
    )


def sample_nodes(
    cfg: SystemConfig,
    rng_seed,
    partition: SubregionPartition | None = None,
    ladder=None,
) -> list[NodeRealization]:
    """One slot's worth of node placements and fading draws.

    Distances use the inverse transform of the uniform-in-area density;
    subregion indices come from the partition, and reflection coefficients
    from the ladder when given (1.0 otherwise).
    """
    rng = rng_seed if isinstance(rng_seed, np.random.Generator) else np.random.default_rng(rng_seed)
    if partition is None:
        partition = default_partition(cfg)
    xi = _coeffs(ladder) if ladder is not None else None
    r1sq, rsq = cfg.inner_radius_m**2, cfg.outer_radius_m**2
    u = rng.random(cfg.node_count)
    r = np.sqrt(r1sq + u * (rsq - r1sq))
    if isinstance(cfg.fading, Nakagami):
        g2 = rng.gamma(cfg.fading.m, 1.0 / cfg.fading.m, cfg.node_count) ** 2
    else:
        g2 = np.ones(cfg.node_count)
    inner_bounds = np.asarray(partition.radii[1:-1])
    sub = np.searchsorted(inner_bounds, r, side="left") + 1
    nodes = []
    for k in range(cfg.node_count):
        coeff = xi[min(sub[k] - 1, len(xi) - 1)] if xi else 1.0
        nodes.append(
            NodeRealization(
                node_id=k,
                distance_m=float(r[k]),
                fading_amplitude_sq=float(g2[k]),
                subregion_index=int(sub[k]),
                reflection_coeff=coeff,
            )
        )
    return nodes


def _classify(nodes, policy: PairingPolicy, cfg: SystemConfig, ladder=None):
    """Class label per node (0-based) and the policy-adjusted node list."""
    if isinstance(policy, SoloAccess):
        return list(range(len(nodes))), list(nodes)
    if isinstance(policy, RegionDivision):
        return [n.subregion_index - 1 for n in nodes], list(nodes)
    if isinstance(policy, PowerDivision):
        xi = _coeffs(ladder) if ladder is not None else (0.7, 0.7)
        a2 = 2.0 * cfg.path_loss_exponent
        labels, adjusted = [], []
        for n in nodes:
            x = n.fading_amplitude_sq * n.distance_m ** (-a2)
            high = x >= policy.threshold.beta_tilde
            labels.append(0 if high else 1)
            adjusted.append(replace(n, reflection_coeff=xi[0] if high else xi[1]))
        return labels, adjusted
    raise TypeError(f"unknown policy {policy!r}")


def schedule(nodes, policy: PairingPolicy, cfg: SystemConfig, ladder=None):
    """Mini-slot groups for one slot, as lists of NodeRealization.

    The g-th group takes the g-th arrival of every class that still has one;
    group sizes shrink as classes empty and the leftovers run solo.
    """
    if isinstance(policy, SoloAccess):
        return [[n] for n in nodes]
    labels, adjusted = _classify(nodes, policy, cfg, ladder)
    by_class: dict[int, list] = {}
    for lab, node in zip(labels, adjusted):
        by_class.setdefault(lab, []).append(node)
    groups = []
    g = 0
    while True:
        members = [q[g] for q in by_class.values() if len(q) > g]
        if not members:
            break
        groups.append(members)
        g += 1
    return groups


def sic_decode(group, cfg: SystemConfig, conventional: bool = False) -> int:
    """Number of signals decoded before the SIC cascade first fails.

    Strongest first; one failure aborts everything weaker.  Ties (measure
    zero) break by node id for determinism.
    """
    if not group:
        raise ValueError("group must be non-empty")
    powers = sorted(
        ((received_power(n, cfg, conventional), -n.node_id) for n in group), reverse=True
    )
    noise, gamma = cfg.noise_power_w, cfg.sinr_threshold
    remaining = sum(p for p, _ in powers)
    decoded = 0
    for p, _ in powers:
        remaining -= p
        if p < gamma * (remaining + noise):
            break
        decoded += 1
    return decoded


def run_trial(
    cfg: SystemConfig,
    policy: PairingPolicy,
    ladder,
    rng_seed,
    conventional: bool = False,
) -> TrialOutcome:
    """Reference per-trial path assembling full mini-slot records."""
    partition = policy.partition if isinstance(policy, RegionDivision) else None
    nodes = sample_nodes(cfg, rng_seed, partition, ladder)
    groups = schedule(nodes, policy, cfg, ladder)
    lr = cfg.slot_bits
    m = cfg.node_count
    records = []
    bits_total = 0.0
    offered = 0.0
    for group in groups:
        n = len(group)
        decoded = sic_decode(group, cfg, conventional)
        bits = decoded * n * lr / m
        records.append(
            MiniSlotRecord(
                node_ids=tuple(q.node_id for q in group),
                duration_fraction=n / m,
                decoded_count=decoded,
                bits=bits,
            )
        )
        bits_total += bits
        offered += n * n * lr / m
    return TrialOutcome(minislots=tuple(records), bits_decoded=bits_total, bits_offered=offered)


def _chunk_size(m: int, n_classes: int) -> int:
    return max(1000, int(2e6 / (m * max(n_classes, 1))))


def estimate_metrics(
    cfg: SystemConfig,
    policy: PairingPolicy,
    ladder,
    trials: int,
    seed: int,
    conventional: bool = False,
) -> dict:
    """Slot-level Monte Carlo estimates.

    Returns Estimates for c_suc (decoded bits per slot), offered bits,
    normalized throughput, decode failures per slot, and, over full-size
    multiplexing groups, the decoded-count distribution p_0..p_N and its
    mean m_n; solo_<i> gives the solo success rate of class i.

    The kernel scatters each chunk of trials into a (trial, group, class)
    power tensor, so one vectorized SIC pass covers every group size.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    m = cfg.node_count
    lr = cfg.slot_bits
    alpha = cfg.path_loss_exponent
    a2 = 2.0 * alpha
    noise, gamma = cfg.noise_power_w, cfg.sinr_threshold
    xi = np.asarray(_coeffs(ladder), dtype=float) if ladder is not None else None

    if isinstance(policy, RegionDivision):
        n_classes = policy.partition.subregion_count
        if xi is None or len(xi) != n_classes:
            raise ValueError("ladder must provide one coefficient per subregion")
    elif isinstance(policy, PowerDivision):
        n_classes = 2
        if xi is None or len(xi) < 2:
            raise ValueError("power division needs two coefficients")
    elif isinstance(policy, SoloAccess):
        n_classes = 1
        if xi is None or len(xi) < 1:
            raise ValueError("solo access needs one coefficient")
    else:
        raise TypeError(f"unknown policy {policy!r}")

    r1sq, rsq = cfg.inner_radius_m**2, cfg.outer_radius_m**2
    fading_m = cfg.fading.m if isinstance(cfg.fading, Nakagami) else None

    sum_c = sum_c2 = 0.0
    sum_o = sum_o2 = sum_co = 0.0
    sum_fail = sum_fail2 = 0.0
    full_groups = 0
    full_decoded_hist = np.zeros(n_classes + 1, dtype=np.int64)
    solo_counts = np.zeros(n_classes, dtype=np.int64)
    solo_successes = np.zeros(n_classes, dtype=np.int64)

    if isinstance(policy, RegionDivision):
        inner_bounds = np.asarray(policy.partition.radii[1:-1])
    chunk = _chunk_size(m, n_classes)
    done = 0
    while done < trials:
        n_t = min(chunk, trials - done)
        done += n_t
        u = rng.random((n_t, m))
        r = np.sqrt(r1sq + u * (rsq - r1sq))
        if fading_m is not None:
            g2 = rng.gamma(fading_m, 1.0 / fading_m, (n_t, m)) ** 2
        else:
            g2 = 1.0

        if conventional:
            p_t = 10.0 ** (CONVENTIONAL_POWER_DBM / 10.0) / 1000.0
            power_solo = p_t * g2 * r**-alpha
        else:
            power_solo = cfg.reader_power_w * g2 * r**-a2  # before the coefficient

        if isinstance(policy, SoloAccess):
            power = power_solo if conventional else power_solo * xi[0]
            decoded = power >= gamma * noise
            n_dec = decoded.sum(axis=1)
            c = n_dec * lr / m
            o = np.full(n_t, lr, dtype=float)
            fails = m - n_dec
            solo_counts[0] += n_t * m
            solo_successes[0] += int(n_dec.sum())
            sum_c += c.sum()
            sum_c2 += (c**2).sum()
            sum_o += o.sum()
            sum_o2 += (o**2).sum()
            sum_co += (c * o).sum()
            sum_fail += fails.sum()
            sum_fail2 += (fails.astype(float) ** 2).sum()
            continue

        if isinstance(policy, RegionDivision):
            label = np.searchsorted(inner_bounds, r, side="left")
        else:
            x = g2 * r**-a2
            label = np.where(x >= policy.threshold.beta_tilde, 0, 1)
        if conventional:
            power = power_solo
        else:
            power = power_solo * xi[label]

        # group index of each node = its arrival rank within its class
        gidx = np.zeros((n_t, m), dtype=np.int64)
        for c_ in range(n_classes):
            mask = label == c_
            gidx[mask] = (np.cumsum(mask, axis=1) - 1)[mask]

        grouped = np.zeros((n_t, m, n_classes))
        rows = np.broadcast_to(np.arange(n_t)[:, None], (n_t, m))
        grouped[rows.ravel(), gidx.ravel(), label.ravel()] = power.ravel()

        s = -np.sort(-grouped, axis=2)
        tail = np.cumsum(s[:, :, ::-1], axis=2)[:, :, ::-1] - s
        ok = (s > 0) & (s >= gamma * (tail + noise))
        decoded = np.cumprod(ok, axis=2).sum(axis=2)  # (n_t, m) per group
        sizes = (grouped > 0).sum(axis=2)

        c = (decoded * sizes).sum(axis=1) * lr / m
        o = (sizes**2).sum(axis=1) * lr / m
        fails = (sizes - decoded).sum(axis=1)

        full = sizes == n_classes
        full_groups += int(full.sum())
        if full.any():
            full_decoded_hist += np.bincount(decoded[full], minlength=n_classes + 1)
        solo = sizes == 1
        if solo.any():
            solo_class = np.argmax(grouped > 0, axis=2)
            sc = solo_class[solo]
            solo_counts += np.bincount(sc, minlength=n_classes)
            solo_successes += np.bincount(sc, weights=decoded[solo], minlength=n_classes).astype(
                np.int64
            )

        sum_c += c.sum()
        sum_c2 += (c**2).sum()
        sum_o += o.sum()
        sum_o2 += (o**2).sum()
        sum_co += (c * o).sum()
        sum_fail += float(fails.sum())
        sum_fail2 += float((fails.astype(float) ** 2).sum())

    def moments(total, total_sq):
        mean = total / trials
        var = max(total_sq / trials - mean**2, 0.0)
        return mean, math.sqrt(var / trials)

    c_mean, c_se = moments(sum_c, sum_c2)
    o_mean, o_se = moments(sum_o, sum_o2)
    f_mean, f_se = moments(sum_fail, sum_fail2)
    out = {
        "c_suc": Estimate(c_mean, c_se, trials),
        "offered": Estimate(o_mean, o_se, trials),
        "failures": Estimate(f_mean, f_se, trials),
    }
    # ratio of means; delta-method standard error
    cov = sum_co / trials - c_mean * o_mean
    ratio = c_mean / o_mean
    var_r = (
        (sum_c2 / trials - c_mean**2)
        - 2.0 * ratio * cov
        + ratio**2 * (sum_o2 / trials - o_mean**2)
    ) / (o_mean**2)
    out["normalized"] = Estimate(ratio, math.sqrt(max(var_r, 0.0) / trials), trials)

    if full_groups > 0:
        ks = np.arange(n_classes + 1)
        pk = full_decoded_hist / full_groups
        mn = float((ks * pk).sum())
        mn_se = math.sqrt(max(float((ks**2 * pk).sum()) - mn**2, 0.0) / full_groups)
        out["m_n"] = Estimate(mn, mn_se, full_groups)
        for k in ks:
            p = float(pk[k])
            out[f"p_{k}"] = Estimate(p, math.sqrt(p * (1.0 - p) / full_groups), full_groups)
    for c_ in range(n_classes):
        if solo_counts[c_] > 0:
            p = solo_successes[c_] / solo_counts[c_]
            out[f"solo_{c_ + 1}"] = Estimate(
                float(p), math.sqrt(p * (1.0 - p) / solo_counts[c_]), int(solo_counts[c_])
            )
    return out


def trace_trials(cfg, policy, ladder, trials, seed, stream, conventional=False):
    """Debug helper: line-delimited mini-slot records through the reference
    path (trial index, node ids, received powers in watts, decoded count)."""
    rng = np.random.default_rng(seed)
    partition = policy.partition if isinstance(policy, RegionDivision) else None
    for t in range(trials):
        nodes = sample_nodes(cfg, rng, partition, ladder)
        for group in schedule(nodes, policy, cfg, ladder):
            ids = ",".join(str(q.node_id) for q in group)
            pw = ",".join(f"{received_power(q, cfg, conventional):.6e}" for q in group)
            stream.write(f"{t}\t{ids}\t{pw}\t{sic_decode(group, cfg, conventional)}\n")


def benchmark(cfg: SystemConfig, system: str, trials: int, seed: int) -> Estimate:
    """Decoded bits per slot for one of the reference systems.

    Backscatter variants reflect at 0.7 with double path-loss attenuation;
    conventional variants transmit 20 dBm with single attenuation.  The NOMA
    variants pair near and far halves of the annulus; the others run solo.
    """
    part = default_partition(cfg.with_(subregion_count=2))
    if system == "backcom_noma":
        res = estimate_metrics(cfg, RegionDivision(part), (0.7, 0.7), trials, seed)
    elif system == "backcom_tdma":
        res = estimate_metrics(cfg, SoloAccess(), (0.7,), trials, seed)
    elif system == "conv_noma":
        res = estimate_metrics(cfg, RegionDivision(part), (0.7, 0.7), trials, seed, conventional=True)
    elif system == "conv_tdma":
        res = estimate_metrics(cfg, SoloAccess(), (0.7,), trials, seed, conventional=True)
    else:
        raise ValueError(f"unknown benchmark system {system!r}")
    return res["c_suc"]
