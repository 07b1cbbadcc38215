"""Decision-tree decoders, syndrome-height bounds, and benchmarks for qLDPC codes."""

from .bounds import (
    BoundConfig,
    SensitivityProfile,
    brute_force_height,
    cluster_bound,
    color_subset_bound,
    combined_bound,
    h1,
    h2,
    h3,
    h4,
    sensitivity_profile,
    syndrome_clusters,
)
from .bp import BpConfig, BpResult, bp_decode
from .codes import (
    CheckColoring,
    CssCode,
    ParseError,
    bivariate_bicycle,
    check_coloring,
    color_code,
    gross_code,
    load_check_matrix,
    load_problem,
    make_css_code,
    save_check_matrix,
)
from .core import (
    CheckMatrix,
    DecodingProblem,
    FaultSet,
    Gf2Reduction,
    Syndrome,
    WeightVector,
    decimate,
    gf2_kernel_basis,
    gf2_rank,
    gf2_row_reduce,
    syndrome_of,
    weight_of,
)
from .dtd import (
    BpGuidedExplorer,
    BreadthFirstExplorer,
    DecodeOutcome,
    DecodeStatus,
    HeightBoundExplorer,
    HeightOracleExplorer,
    bp_cost_increment,
    check_selection,
    dtd_decode,
)
from .harness import (
    DecoderSpec,
    EvalStats,
    NoiseModel,
    SampleRecord,
    bootstrap_percentile_interval,
    cutoff_curve,
    evaluate,
    make_decoder,
    percentile_nearest_rank,
    sample_fixed_weight,
    sample_iid,
    wilson_interval,
)
from .logicals import (
    DistanceResult,
    LogicalSet,
    all_min_weight_logicals,
    enclosing_logicals,
    find_distance,
)
from .osd import OsdDecomposition, bp_osd_decode, osd_decompose, sweep_patterns

__all__ = [name for name in dir() if not name.startswith("_")]
