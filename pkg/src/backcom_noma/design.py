"""Reflection-coefficient selection rules.

Working from the weakest (outermost) group inwards, each coefficient is set
just large enough that the corresponding signal survives SIC in the worst
node placement: the outermost coefficient only has to beat noise, while every
inner one must additionally dominate the interference from all weaker groups.
"""

from __future__ import annotations

from dataclasses import dataclass

from .config import SubregionPartition, SystemConfig, default_partition


@dataclass(frozen=True)
class CoefficientLadder:
    """Ordered reflection coefficients, strongest group first.

    ``feasible`` is False when the ladder tops out above 1, which is data
    (the operating point is simply unreachable at this reader power), not an
    error.  ``binding_constraints`` records the worst-case SINR floor each
    coefficient had to clear.
    """

    coefficients: tuple[float, ...]
    feasible: bool
    binding_constraints: tuple[float, ...]

    def __post_init__(self):
        xs = self.coefficients
        if any(b > a for a, b in zip(xs, xs[1:])):
            raise ValueError("coefficients must be non-increasing")
        if xs and xs[-1] <= 0:
            raise ValueError("coefficients must be positive")

    def __len__(self) -> int:
        return len(self.coefficients)

    def __getitem__(self, i: int) -> float:
        return self.coefficients[i]

    @property
    def kappa(self) -> float:
        """Ratio of the weakest to the strongest coefficient."""
        return self.coefficients[-1] / self.coefficients[0]


def min_coefficient(
    cfg: SystemConfig,
    partition: SubregionPartition,
    index: int,
    tail: tuple[float, ...],
) -> float:
    """Worst-case decode floor for the coefficient of subregion ``index``
    (0-based) given the coefficients of all weaker subregions.

    The node sits on its outer bound while every weaker node sits on its
    inner bound; the outermost subregion only has to beat noise.
    """
    n = partition.subregion_count
    if not 0 <= index < n:
        raise ValueError("index out of range")
    if len(tail) != n - index - 1:
        raise ValueError("tail must cover every weaker subregion")
    a2 = 2.0 * cfg.path_loss_exponent
    gamma = cfg.sinr_threshold
    radii = partition.radii
    r_out = radii[index + 1]
    if index == n - 1:
        return gamma * cfg.noise_power_w * r_out**a2 / cfg.reader_power_w
    interference = sum(
        tail[j - index - 1] * r_out**a2 / radii[j] ** a2 for j in range(index + 1, n)
    )
    floor = gamma * (interference + cfg.noise_power_w * r_out**a2 / cfg.reader_power_w)
    return max(tail[0], floor)


def design_ladder(
    cfg: SystemConfig,
    partition: SubregionPartition | None = None,
    slack: float = 1.0,
) -> CoefficientLadder:
    """Build the minimum coefficient ladder guaranteeing worst-case decode.

    slack > 1 scales every coefficient above its binding floor; slack = 1
    sits exactly on the constraints.
    """
    if partition is None:
        partition = default_partition(cfg)
    if partition.subregion_count != cfg.subregion_count:
        raise ValueError("partition inconsistent with config")
    if not slack >= 1.0:
        raise ValueError("slack must be >= 1")

    n = cfg.subregion_count
    floors = [0.0] * n
    xi = [0.0] * n
    for i in range(n - 1, -1, -1):
        floors[i] = min_coefficient(cfg, partition, i, tuple(xi[i + 1 :]))
        xi[i] = slack * floors[i]

    return CoefficientLadder(
        coefficients=tuple(xi),
        feasible=xi[0] <= 1.0,
        binding_constraints=tuple(floors),
    )


def max_weak_coefficient(
    cfg: SystemConfig, xi1: float, partition: SubregionPartition | None = None
) -> float:
    """Largest two-group weak coefficient compatible with a given strong one.

    Inverts the worst-case pairing constraint for the strong signal; also
    capped at xi1 to keep the ladder ordered.
    """
    if partition is None:
        partition = default_partition(cfg)
    r2 = partition.radii[1]
    a2 = 2.0 * cfg.path_loss_exponent
    cap = xi1 / cfg.sinr_threshold - cfg.noise_power_w * r2**a2 / cfg.reader_power_w
    if cap <= 0:
        raise ValueError("no positive weak coefficient satisfies the constraint")
    return min(xi1, cap)


def design_power_division_floor(cfg: SystemConfig, beta_tilde: float, xi2: float) -> float:
    """Minimum feasible strong-group coefficient under power division.

    The high-power group is classified by normalized instantaneous power
    >= beta_tilde, so the worst decodable strong signal sits exactly on the
    threshold.
    """
    if not beta_tilde > 0:
        raise ValueError("beta_tilde must be > 0")
    if not 0 < xi2 <= 1:
        raise ValueError("xi2 must be in (0, 1]")
    gamma = cfg.sinr_threshold
    floor = gamma * (xi2 + cfg.noise_power_w / (cfg.reader_power_w * beta_tilde))
    return max(xi2, floor)
