"""Key-shot video summarization pipeline.

Feature files in, summaries and F-scores out: snippet windowing,
encoder-decoder compression, recurrent sigmoid regression, kernel temporal
segmentation, knapsack shot selection, and temporal-overlap evaluation.
"""

__version__ = "0.1.0"

from .config import RunConfig
from .dataio import (
    AnnotationSet,
    DatasetManifest,
    FeatureSequence,
    ManifestEntry,
    ModelBundle,
    load_model,
    read_annotations,
    read_features,
    read_manifest,
    save_model,
    write_annotations,
    write_features,
    write_manifest,
)
from .encdec import EncDec, EncDecConfig, train_encdec
from .errors import FormatError, IdMismatchError, IoError, ShapeError
from .evaluate import EvalReport, crossval, overlap_metrics
from .kts import Segmentation, gram_matrix, segment
from .preprocess import BinarizeRule, BinarizedTargets, SnippetBatch, consolidate_targets, make_windows, subsample
from .scorer import ScorerConfig, ScorerModel, ScoreVector, fuse_streams, score_video, train_scorer
from .selection import Summary, binarize_percentile, interval_scores, knapsack_select, summarize
from .synth import SynthSpec, generate
from .training import TrainConfig

__all__ = [
    "AnnotationSet",
    "BinarizeRule",
    "BinarizedTargets",
    "DatasetManifest",
    "EncDec",
    "EncDecConfig",
    "EvalReport",
    "FeatureSequence",
    "FormatError",
    "IdMismatchError",
    "IoError",
    "ManifestEntry",
    "ModelBundle",
    "RunConfig",
    "ScoreVector",
    "ScorerConfig",
    "ScorerModel",
    "Segmentation",
    "ShapeError",
    "SnippetBatch",
    "Summary",
    "SynthSpec",
    "TrainConfig",
    "binarize_percentile",
    "consolidate_targets",
    "crossval",
    "fuse_streams",
    "generate",
    "gram_matrix",
    "interval_scores",
    "knapsack_select",
    "load_model",
    "make_windows",
    "overlap_metrics",
    "read_annotations",
    "read_features",
    "read_manifest",
    "save_model",
    "score_video",
    "segment",
    "subsample",
    "summarize",
    "train_encdec",
    "train_scorer",
    "write_annotations",
    "write_features",
    "write_manifest",
]
