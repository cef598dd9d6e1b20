"""Transparent, auditable classification of actors and content along a
partisanship-to-terrorism continuum, crossed with five ideology types.

Evidence comes from declarative cue lexicons, scoring is linear and fully
explainable, regional policies adjust weights only with recorded reasons,
and every classification carries a replayable audit record.
"""

from .calibration import (
    DegenerateLabels,
    FitResult,
    FprCap,
    ItemStats,
    LabeledExample,
    NonFiniteFeature,
    RocCurve,
    RocPoint,
    YoudenJ,
    calibrate,
    calibrate_thresholds,
    choose_cutoff,
    fit_weights,
    item_stats,
    roc_curve,
)
from .matcher import (
    ContentItem,
    CueHit,
    CueScanner,
    SourceKind,
    scan_content,
    tokenize,
    tokenize_with_offsets,
)
from .pipeline import classify_and_explain, explain, profile_actor, what_if
from .policy import (
    CueMultiplier,
    Exemption,
    ExemptionScope,
    MissingReason,
    PolicyConfig,
    apply_policy,
    default_policy,
    load_policy,
)
from .profiler import (
    Actor,
    ActorKind,
    ActorProfile,
    ClassificationOutcome,
    HolisticProfile,
    ModelMismatch,
    Trend,
    aggregate_actor,
    classify_actor,
    detect_splinter,
    holistic_profile,
    jensen_shannon,
    merge_aggregates,
)
from .scoring import (
    ContentScore,
    DehumanizationAssessment,
    FiredCue,
    UnknownCue,
    WeightModel,
    assess_dehumanization,
    default_model,
    score_content,
    score_corpus,
)
from .store import CorpusStore, IngestReport
from .taxonomy import (
    CueDefinition,
    CueDimension,
    DehumanizationForm,
    DuplicateCueId,
    EmptyLevel,
    IdeologyType,
    InvalidWeight,
    Level,
    Lexicon,
    MatcherKind,
    MatcherSpec,
    SchemaError,
    cues_in_effect,
    load_lexicon,
    starter_lexicon,
    validate_lexicon,
)
from .temporal import (
    AlertKind,
    ProfileSeries,
    TrendAlert,
    build_series,
    detect_trends,
)

__version__ = "0.1.0"
