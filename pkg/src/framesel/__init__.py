"""Query-aware video frame selection.

Select K frames from a bounded integer-second candidate pool by greedily
maximizing a weighted sum of modular query relevance and facility-location
semantic coverage, with presets routed from the question type.  Inputs are
precomputed embeddings; nothing here decodes video or calls a model.
"""

from .embeddings import (
    EMBEDDING_MAGIC,
    EMBEDDING_VERSION,
    RELEVANCE_MODES,
    EmbeddingSet,
    RelevanceScores,
    SimilarityMatrix,
    l2_normalize_rows,
    load_embeddings,
    read_embedding_file,
    relevance_scores,
    similarity_matrix,
    write_embedding_file,
    write_embedding_manifest,
)
from .errors import (
    AlignmentError,
    BoundViolationError,
    BudgetError,
    DegenerateDataError,
    DegenerateEmbeddingError,
    DegenerateSpacingError,
    DuplicateSelectionError,
    EmptyPoolError,
    FormatError,
    FrameselError,
    IncompleteTableError,
    InstanceTooLargeError,
    MissingClassError,
    ParameterError,
    RoutingGapError,
)
from .oracle import (
    GREEDY_RATIO_BOUND,
    MAX_EXACT_N,
    OracleReport,
    PropertySummary,
    RandomInstance,
    brute_force_optimum,
    check_bound,
    property_suite,
    random_instances,
)
from .pool import (
    DEFAULT_CAP,
    CandidatePool,
    VideoMeta,
    build_pool,
    frame_index_of_second,
    read_pool_manifest,
    second_of_position,
    write_pool_manifest,
)
from .routing import (
    DEFAULT_TYPES,
    PRESET_ORDER,
    ClassifierEvaluation,
    QuestionTypeModel,
    RoutingTable,
    evaluate_classifier,
    fit_routing,
    predict_type,
    read_accuracy_table,
    read_model,
    read_routing_table,
    read_training_examples,
    route,
    route_for_type,
    tokenize,
    train_classifier,
    write_model,
    write_routing_table,
)
from .selection import (
    COVERAGE_BASELINE,
    ENGINES,
    PRESET_NAMES,
    CoverageState,
    Preset,
    SelectionResult,
    coverage_value,
    make_preset,
    marginal_gain,
    objective_value,
    read_selection_result,
    relevance_sum,
    select,
    write_selection_result,
)

__version__ = "0.1.0"

__all__ = [
    "AlignmentError",
    "BoundViolationError",
    "BudgetError",
    "COVERAGE_BASELINE",
    "CandidatePool",
    "ClassifierEvaluation",
    "CoverageState",
    "DEFAULT_CAP",
    "DEFAULT_TYPES",
    "DegenerateDataError",
    "DegenerateEmbeddingError",
    "DegenerateSpacingError",
    "DuplicateSelectionError",
    "EMBEDDING_MAGIC",
    "EMBEDDING_VERSION",
    "ENGINES",
    "EmbeddingSet",
    "EmptyPoolError",
    "FormatError",
    "FrameselError",
    "GREEDY_RATIO_BOUND",
    "IncompleteTableError",
    "InstanceTooLargeError",
    "MAX_EXACT_N",
    "MissingClassError",
    "OracleReport",
    "PRESET_NAMES",
    "PRESET_ORDER",
    "ParameterError",
    "Preset",
    "PropertySummary",
    "QuestionTypeModel",
    "RELEVANCE_MODES",
    "RandomInstance",
    "RelevanceScores",
    "RoutingGapError",
    "RoutingTable",
    "SelectionResult",
    "SimilarityMatrix",
    "VideoMeta",
    "brute_force_optimum",
    "build_pool",
    "check_bound",
    "coverage_value",
    "evaluate_classifier",
    "fit_routing",
    "frame_index_of_second",
    "l2_normalize_rows",
    "load_embeddings",
    "make_preset",
    "marginal_gain",
    "objective_value",
    "predict_type",
    "property_suite",
    "random_instances",
    "read_accuracy_table",
    "read_embedding_file",
    "read_model",
    "read_pool_manifest",
    "read_routing_table",
    "read_selection_result",
    "read_training_examples",
    "relevance_scores",
    "relevance_sum",
    "route",
    "route_for_type",
    "second_of_position",
    "select",
    "similarity_matrix",
    "tokenize",
    "train_classifier",
    "write_embedding_file",
    "write_embedding_manifest",
    "write_model",
    "write_pool_manifest",
    "write_routing_table",
    "write_selection_result",
]
