"""Record keeping, splitting, classification and tabulation."""
from .crosstab import (
    CohortStat,
    CrossTable,
    SuccessSummary,
    cohort_stats,
    cross_table,
    percent_half_up,
    success_summary,
)
from .knn import (
    KnnConfig,
    StandardizeParams,
    feature_matrix,
    knn_classify,
    standardize_apply,
    standardize_fit,
)
from .records import TOKEN_LABELS, PerformanceRecord
from .split import SplitSpec, split

__all__ = [
    "CohortStat",
    "CrossTable",
    "KnnConfig",
    "PerformanceRecord",
    "SplitSpec",
    "StandardizeParams",
    "SuccessSummary",
    "TOKEN_LABELS",
    "cohort_stats",
    "cross_table",
    "feature_matrix",
    "knn_classify",
    "percent_half_up",
    "split",
    "standardize_apply",
    "standardize_fit",
    "success_summary",
]
