"""Cross-validated evaluation toolkit for NOMA-enhanced backscatter uplinks.

Closed-form and transform-based analytics for multiplexed backscatter
decoding, a seeded Monte Carlo engine covering the same model, and a sweep
harness that plays the two against each other.
"""

from .config import (
    FadingFree,
    Nakagami,
    SubregionPartition,
    SystemConfig,
    db_to_linear,
    dbm_to_watts,
    default_partition,
    two_region_partition,
)
from .design import (
    CoefficientLadder,
    design_ladder,
    design_power_division_floor,
    max_weak_coefficient,
    min_coefficient,
)
from .experiments import (
    Experiment,
    Row,
    SweepResult,
    SweepSpec,
    emit_csv,
    emit_svg,
    experiment_from_json,
    parse_csv,
    presets,
    run,
)
from .fading import (
    CompositeDist,
    PowerDivisionPolicy,
    composite_cdf,
    composite_pdf,
    full_annulus_dist,
    pair_probs_power,
    pair_probs_region,
    solo_success_power,
    solo_success_region,
    solve_beta_tilde,
)
from .fading_free import (
    PairDecodeProbs,
    ThroughputReport,
    m2_asymptotic,
    pair_probs_ff,
    solo_success_ff,
    throughput_two_node,
)
from .mgf import (
    DEFAULT_EULER,
    EulerInversionParams,
    InversionError,
    MultiplexOutcome,
    mgf_inverse_sinr,
    multiplex_outcome,
)
from .simulator import (
    CONVENTIONAL_POWER_DBM,
    Estimate,
    MiniSlotRecord,
    NodeRealization,
    PowerDivision,
    RegionDivision,
    SoloAccess,
    TrialOutcome,
    benchmark,
    estimate_metrics,
    received_power,
    run_trial,
    sample_nodes,
    schedule,
    sic_decode,
)
from .specfun import (
    DEFAULT_QUAD,
    QuadratureError,
    QuadratureSpec,
    gamma_gen_incomplete,
    gauss_2f1,
    integrate,
)

__version__ = "0.1.0"
