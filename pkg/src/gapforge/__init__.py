"""Exact spectral analysis of the weighted adjacent-transposition chain on
permutations, with sweeps over regular parameter vectors and
self-organizing-list diagnostics."""

__version__ = "0.1.0"

from .errors import (
    GapForgeError,
    NotReversibleError,
    NumericalError,
    ParseError,
    ResourceError,
    SizeLimitError,
    ValidationError,
)
from .perm import PermTable, adjacent_swap, build_table, reverse_of, sign_of
from .chain import (
    ParamVector,
    StationaryDistribution,
    TransitionMatrix,
    WeightVector,
    build_ma1_transition,
    build_mtf_transition,
    build_transition,
    ma1_stationary,
    is_regular,
    params_from_weights,
    parse_params,
    stationary,
    symmetrized,
)
from .spectral import (
    GapReport,
    SimilarityCertificate,
    Spectrum,
    eigen_sym,
    gap_report,
    kth_largest,
    n3_gap_closed,
    pairing_defect,
    similarity_certificate,
    spectrum_of,
    unweighted_gap,
)
from .explorer import (
    GridSpec,
    MultiplicityCensus,
    PathSpec,
    ScanResult,
    multiplicity_census,
    regular_grid,
    scan_grid_min,
    scan_path,
)
from .mixing import ESCReport, TVCurve, esc_report, front_probability, geometric_weights, tv_curve
