"""Layered ego-network analysis over interaction event logs.

The heavy lifting lives in the compiled extension: exact 1-D k-means by
dynamic programming, elbow/silhouette cluster-count selection, population
layer statistics, and synthetic generators with planted ground truth.
"""

from egolayers._core import (
    Clustering,
    ConfigError,
    DataError,
    EgoAnalysis,
    LayerSpec,
    __version__,
    analyze_weights,
    author_three_layer,
    author_two_layer,
    classify_review,
    elbow_optimal_k,
    generate_ego,
    kmeans_1d,
    kmeans_1d_lloyd,
    reviewer_three_layer,
    reviewer_two_layer,
    run_analyze,
    run_crosstab,
    run_ingest,
    run_synth,
    silhouette,
    wcss_curve,
)

__all__ = [
    "Clustering",
    "ConfigError",
    "DataError",
    "EgoAnalysis",
    "LayerSpec",
    "__version__",
    "analyze_weights",
    "author_three_layer",
    "author_two_layer",
    "classify_review",
    "elbow_optimal_k",
    "generate_ego",
    "kmeans_1d",
    "kmeans_1d_lloyd",
    "reviewer_three_layer",
    "reviewer_two_layer",
    "run_analyze",
    "run_crosstab",
    "run_ingest",
    "run_synth",
    "silhouette",
    "wcss_curve",
]
