"""Wind-turbine generator heating fault detection from 10-minute SCADA telemetry.

Thin python surface over the C++ core: synthetic data generation, filter
scores (Fisher, Relief, mutual information, point-biserial correlation),
evaluation metrics, and the full construct/rank/select/train/evaluate
pipeline plus the heuristic-baseline comparison harness.
"""

try:
    from ._windfault import (  # installed wheel layout
        ArgumentError,
        ConfigError,
        DataError,
        ParseError,
        correlation_scores,
        fisher_scores,
        generate,
        heuristic_feature_ids,
        metrics,
        mutual_information_scores,
        original_channel_ids,
        relief_scores,
        run_comparison,
        run_pipeline,
    )
except ImportError:  # in-tree layout: extension on sys.path next to the build
    from _windfault import (
        ArgumentError,
        ConfigError,
        DataError,
        ParseError,
        correlation_scores,
        fisher_scores,
        generate,
        heuristic_feature_ids,
        metrics,
        mutual_information_scores,
        original_channel_ids,
        relief_scores,
        run_comparison,
        run_pipeline,
    )

__all__ = [
    "ArgumentError",
    "ConfigError",
    "DataError",
    "ParseError",
    "correlation_scores",
    "fisher_scores",
    "generate",
    "heuristic_feature_ids",
    "metrics",
    "mutual_information_scores",
    "original_channel_ids",
    "relief_scores",
    "run_comparison",
    "run_pipeline",
]
