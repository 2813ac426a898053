"""Lecture key-frame segmentation: media-type classification, handwriting
extraction, topic clustering, and semantic index emission."""

from .classify import ClassifierConfig, classify_frame
from .cluster import ClusterRecord, ConsistencyError, assemble_index, cluster_frames
from .config import ConfigError, PipelineConfig, load_config
from .costmodel import DEFAULT_PARAMS as DEFAULT_COST_PARAMS
from .costmodel import CostModelParams, fit_quadratic, predicted_cost
from .emit import InvalidIndexError, emit_index, load_index
from .features import FeatureVector, compute_features
from .filters import FilterConfig, derive_content, extract_background, laplacian_edges
from .matcher import MatchConfig, MatchResult, match_frames, select_windows
from .model import KeyFrame, MediaType, PipelineStats, Topic, TopicIndex, validate_index
from .pipeline import run_pipeline

__version__ = "1.0.0"

__all__ = [
    "ClassifierConfig",
    "ClusterRecord",
    "ConfigError",
    "ConsistencyError",
    "CostModelParams",
    "DEFAULT_COST_PARAMS",
    "FeatureVector",
    "FilterConfig",
    "InvalidIndexError",
    "KeyFrame",
    "MatchConfig",
    "MatchResult",
    "MediaType",
    "PipelineConfig",
    "PipelineStats",
    "Topic",
    "TopicIndex",
    "assemble_index",
    "classify_frame",
    "cluster_frames",
    "compute_features",
    "derive_content",
    "emit_index",
    "extract_background",
    "fit_quadratic",
    "laplacian_edges",
    "load_config",
    "load_index",
    "match_frames",
    "predicted_cost",
    "run_pipeline",
    "select_windows",
    "validate_index",
    "__version__",
]
