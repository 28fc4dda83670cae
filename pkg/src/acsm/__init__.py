"""Average common submatrix similarity measures for square symbol matrices."""

from .core import (
    DistanceMetric,
    MatchResult,
    MatcherSpec,
    MeasureParams,
    Scope,
    SimilarityReport,
    SymbolMatrix,
    index_bounds,
    validate_matrix,
)
from .ingest import (
    PlantedPair,
    gen_planted_pair,
    gen_random,
    load_csv,
    load_pgm,
    quantize,
    read_matrix_file,
    render_csv,
)
from .matching import (
    CandidateWindow,
    candidate_window,
    distance,
    exact_equal,
    find_anchor,
    interval_equal,
    largest_match,
    matches,
)
from .measures import (
    MeasureKind,
    acsm_similarity,
    approx_acsm,
    dissimilarity,
    eacsm,
    oracle_acsm,
    parse_metric,
    s_max,
)

__version__ = "0.1.0"

__all__ = [
    "CandidateWindow",
    "DistanceMetric",
    "MatchResult",
    "MatcherSpec",
    "MeasureKind",
    "MeasureParams",
    "PlantedPair",
    "Scope",
    "SimilarityReport",
    "SymbolMatrix",
    "__version__",
    "acsm_similarity",
    "approx_acsm",
    "candidate_window",
    "dissimilarity",
    "distance",
    "eacsm",
    "exact_equal",
    "find_anchor",
    "gen_planted_pair",
    "gen_random",
    "index_bounds",
    "interval_equal",
    "largest_match",
    "load_csv",
    "load_pgm",
    "matches",
    "oracle_acsm",
    "parse_metric",
    "quantize",
    "read_matrix_file",
    "render_csv",
    "s_max",
    "validate_matrix",
]
