"""Sequential-trial contamination scoring, filtering and evaluation."""

from .classifiers import (
    MODEL_KINDS,
    TrainConfig,
    TrainedModel,
    class_scores,
    predict,
    softmax_loss_and_grad,
    train,
)
from .core import (
    ClassLabel,
    DataPoint,
    DatasetValidationError,
    SequenceDataset,
    Trial,
    ValidationReport,
    Violation,
    build_dataset,
    distinct_classes_in_sequence,
    require_valid,
    truncate_dataset,
    validate_dataset,
)
from .dataio import (
    DATASET_FORMATS,
    FORMAT_VERSION,
    TOOL_VERSION,
    DatasetFormatError,
    build_report_document,
    datasets_equal,
    format_priming_report,
    percent_display,
    read_dataset,
    read_report,
    read_scores,
    write_dataset,
    write_ground_truth,
    write_profile,
    write_report,
    write_scores,
)
from .filtering import AlignmentError, FilterConfig, FilterOutcome, filter_by_aps
from .metrics import LabeledPrediction, PrimingReport, priming_error
from .pipeline import EvaluationResult, EvaluationRun, evaluate_sequence, slice_scores
from .scoring import (
    ApsConfig,
    ApsResult,
    CentroidSet,
    aps_point,
    compute_centroids,
    mean_profile,
    priming_softmax,
    resolve_warmup,
    score_sequence,
)
from .synth import (
    PRESETS,
    SEED_LIKE_LABEL_NAMES,
    SynthConfig,
    SynthGroundTruth,
    generate,
    preset_config,
    random_order_config,
    seed_like_config,
)

__version__ = TOOL_VERSION

__all__ = [
    "MODEL_KINDS",
    "TrainConfig",
    "TrainedModel",
    "class_scores",
    "predict",
    "softmax_loss_and_grad",
    "train",
    "ClassLabel",
    "DataPoint",
    "DatasetValidationError",
    "SequenceDataset",
    "Trial",
    "ValidationReport",
    "Violation",
    "build_dataset",
    "distinct_classes_in_sequence",
    "require_valid",
    "truncate_dataset",
    "validate_dataset",
    "DATASET_FORMATS",
    "FORMAT_VERSION",
    "TOOL_VERSION",
    "DatasetFormatError",
    "build_report_document",
    "datasets_equal",
    "format_priming_report",
    "percent_display",
    "read_dataset",
    "read_report",
    "read_scores",
    "write_dataset",
    "write_ground_truth",
    "write_profile",
    "write_report",
    "write_scores",
    "AlignmentError",
    "FilterConfig",
    "FilterOutcome",
    "filter_by_aps",
    "LabeledPrediction",
    "PrimingReport",
    "priming_error",
    "EvaluationResult",
    "EvaluationRun",
    "evaluate_sequence",
    "slice_scores",
    "ApsConfig",
    "ApsResult",
    "CentroidSet",
    "aps_point",
    "compute_centroids",
    "mean_profile",
    "priming_softmax",
    "resolve_warmup",
    "score_sequence",
    "PRESETS",
    "SEED_LIKE_LABEL_NAMES",
    "SynthConfig",
    "SynthGroundTruth",
    "generate",
    "preset_config",
    "random_order_config",
    "seed_like_config",
    "__version__",
]
