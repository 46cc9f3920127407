"""Local exceptionality mining for sliced multi-channel time series.

The package turns raw recordings (movement traces, speech audio) into a
mining table: recordings are cut into slices, each slice is described by
distributional features of its channels, and a rolling dynamic-complexity
score of a designated channel supplies the target.  Subgroup search then
surfaces feature patterns whose slices precede unusually high (or low)
target values.
"""

from .discretize import BinScheme, NominalTable, apply_bins, discretize_matrix, fit_bins
from .dyncomp import (
    DynamicComplexitySeries,
    DynCompConfig,
    TargetVector,
    apply_lag,
    distribution,
    dynamic_complexity_series,
    fluctuation,
    points_of_return,
    slice_targets,
)
from .errors import ConfigError, CorpusFormatError, StageError
from .features import (
    CATALOG,
    FeatureId,
    FeatureMatrix,
    aggregate_across_channels,
    extract_feature_matrix,
)
from .ingest import Channel, RecordingGroup, Slice, load_recordings, resample_energy, slice_recording
from .mining import (
    Pattern,
    QualitySpec,
    SearchConfig,
    Selector,
    SubgroupResult,
    coverage,
    discover,
    optimistic_estimate,
    quality,
)
from .pipeline import PipelineConfig, RunResult, export_run, load_config, run_pipeline

__version__ = "0.1.0"

__all__ = [
    "BinScheme",
    "NominalTable",
    "apply_bins",
    "discretize_matrix",
    "fit_bins",
    "DynamicComplexitySeries",
    "DynCompConfig",
    "TargetVector",
    "apply_lag",
    "distribution",
    "dynamic_complexity_series",
    "fluctuation",
    "points_of_return",
    "slice_targets",
    "ConfigError",
    "CorpusFormatError",
    "StageError",
    "CATALOG",
    "FeatureId",
    "FeatureMatrix",
    "aggregate_across_channels",
    "extract_feature_matrix",
    "Channel",
    "RecordingGroup",
    "Slice",
    "load_recordings",
    "resample_energy",
    "slice_recording",
    "Pattern",
    "QualitySpec",
    "SearchConfig",
    "Selector",
    "SubgroupResult",
    "coverage",
    "discover",
    "optimistic_estimate",
    "quality",
    "PipelineConfig",
    "RunResult",
    "export_run",
    "load_config",
    "run_pipeline",
    "__version__",
]
