"""Scenario configuration, unit conversions and subregion geometry.

All public inputs use field units (dBm, dB, meters).  Everything downstream
works in linear watts, so the conversions live here and nowhere else.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field


def dbm_to_watts(p_dbm: float) -> float:
    """Convert a power in dBm to watts."""
    return 10.0 ** (p_dbm / 10.0) / 1000.0


def db_to_linear(x_db: float) -> float:
    """Convert a dB ratio to a linear ratio."""
    return 10.0 ** (x_db / 10.0)


@dataclass(frozen=True)
class Nakagami:
    """Nakagami-m block fading; the power-related gain g is Gamma distributed
    with shape m and unit mean.  m=1 corresponds to Rayleigh."""

    m: float = 4.0

    def __post_init__(self):
        if self.m < 0.5:
            raise ValueError(f"Nakagami shape must be >= 0.5, got {self.m}")


@dataclass(frozen=True)
class FadingFree:
    """Pure path-loss channel (strong line-of-sight)."""


FadingSpec = Nakagami | FadingFree


@dataclass(frozen=True)
class SystemConfig:
    """All scenario constants for one reader serving M backscatter nodes
    uniformly placed in the annulus [inner_radius_m, outer_radius_m]."""

    inner_radius_m: float = 1.0
    outer_radius_m: float = 65.0
    node_count: int = 60
    subregion_count: int = 2
    path_loss_exponent: float = 2.5
    reader_power_dbm: float = 35.0
    noise_power_dbm: float = -100.0
    slot_bits: float = 60.0
    sinr_threshold_db: float = 5.0
    fading: FadingSpec = field(default_factory=FadingFree)

    def __post_init__(self):
        if not 0 < self.inner_radius_m < self.outer_radius_m:
            raise ValueError("need 0 < inner radius < outer radius")
        if self.node_count < 1:
            raise ValueError("node_count must be >= 1")
        if self.subregion_count < 1:
            raise ValueError("subregion_count must be >= 1")
        if self.path_loss_exponent <= 1:
            raise ValueError("path_loss_exponent must be > 1")
        for name in ("reader_power_dbm", "noise_power_dbm", "sinr_threshold_db"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")

    # Linear-unit views used by all formula code.
    @property
    def reader_power_w(self) -> float:
        return dbm_to_watts(self.reader_power_dbm)

    @property
    def noise_power_w(self) -> float:
        return dbm_to_watts(self.noise_power_dbm)

    @property
    def sinr_threshold(self) -> float:
        return db_to_linear(self.sinr_threshold_db)

    @property
    def nakagami_m(self) -> float | None:
        return self.fading.m if isinstance(self.fading, Nakagami) else None

    def with_(self, **changes) -> "SystemConfig":
        from dataclasses import replace

        return replace(self, **changes)

    @classmethod
    def from_dict(cls, d: dict) -> "SystemConfig":
        d = dict(d)
        fading = d.pop("fading", "fading_free")
        if isinstance(fading, str):
            if fading in ("fading_free", "none"):
                d["fading"] = FadingFree()
            elif fading == "rayleigh":
                d["fading"] = Nakagami(1.0)
            else:
                raise ValueError(f"unknown fading spec {fading!r}")
        elif isinstance(fading, dict):
            d["fading"] = Nakagami(float(fading["m"]))
        elif isinstance(fading, (int, float)):
            d["fading"] = Nakagami(float(fading))
        else:
            d["fading"] = fading
        return cls(**d)

    @classmethod
    def from_json(cls, path: str) -> "SystemConfig":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


@dataclass(frozen=True)
class SubregionPartition:
    """Subregion boundary radii r_1 < r_2 < ... < r_{N+1}, in meters."""

    radii: tuple[float, ...]

    def __post_init__(self):
        if len(self.radii) < 2:
            raise ValueError("partition needs at least two radii")
        if any(b <= a for a, b in zip(self.radii, self.radii[1:])):
            raise ValueError("radii must be strictly increasing")

    @property
    def subregion_count(self) -> int:
        return len(self.radii) - 1

    def bounds(self, i: int) -> tuple[float, float]:
        """Inner/outer radius of the i-th subregion (1-based)."""
        return self.radii[i - 1], self.radii[i]

    def membership_probability(self, i: int) -> float:
        """Probability that a uniformly placed node lands in subregion i."""
        lo, hi = self.bounds(i)
        r1, r = self.radii[0], self.radii[-1]
        return (hi**2 - lo**2) / (r**2 - r1**2)


def default_partition(cfg: SystemConfig) -> SubregionPartition:
    """Equal-area split of the annulus into subregion_count rings."""
    n = cfg.subregion_count
    if n < 1:
        raise ValueError("subregion_count must be >= 1")
    r1sq, rsq = cfg.inner_radius_m**2, cfg.outer_radius_m**2
    radii = [
        math.sqrt(((i - 1) * rsq + (n + 1 - i) * r1sq) / n) for i in range(1, n + 1)
    ]
    radii.append(cfg.outer_radius_m)
    return SubregionPartition(tuple(radii))


def two_region_partition(cfg: SystemConfig, r2: float) -> SubregionPartition:
    """Two-subregion partition with an explicit boundary radius."""
    return SubregionPartition((cfg.inner_radius_m, r2, cfg.outer_radius_m))
