"""Artificial stock market lab: trade one session per subject under an
information-token condition, record net profit, and classify the token
from performance alone."""

__version__ = "0.1.0"

from .agents import (
    DEFAULT_BASE_PROFILE,
    BehaviorMapping,
    BehaviorProfile,
    CohortSpec,
    TokenAgent,
    agent_step,
    derive_behavior,
    position_target,
    run_cohort,
)
from .analytics import (
    CohortStat,
    CrossTable,
    KnnConfig,
    PerformanceRecord,
    SplitSpec,
    SuccessSummary,
    TOKEN_LABELS,
    cohort_stats,
    cross_table,
    feature_matrix,
    knn_classify,
    percent_half_up,
    split,
    standardize_apply,
    standardize_fit,
    success_summary,
)
from .config import (
    DEFAULT_COHORT_COUNTS,
    DEFAULT_FIXED_COUNTS,
    ExperimentConfig,
    config_digest,
    config_from_dict,
    config_to_dict,
    default_config,
    load_config,
)
from .dataset import read_records_csv, write_records_csv
from .experiment import (
    ClassificationResult,
    DistinctnessError,
    ReportBundle,
    classify_records,
    generate_records,
    run_experiment,
)
from .market import (
    FlowParams,
    FundamentalPath,
    MarketConfig,
    MarketView,
    Order,
    OrderBook,
    OrderTicket,
    SessionResult,
    Trade,
    generate_background_flow,
    generate_fundamental,
    replay_order_log,
    run_session,
)
from .rng import derive_seed, substream
from .tokens import (
    InformationToken,
    InformationVirtue,
    TokenDistinctnessReport,
    build_token_set,
    check_distinctness,
    encode_token,
)
