from ._spclust import (
    Dataset,
    FitResult,
    ModelConfig,
    SpclustError,
    build_distance_matrix,
    fit,
    fit_baseline,
    great_circle_distance,
    load_csv,
    rand_index,
    simulate,
    standardize,
)

__all__ = [
    "Dataset",
    "FitResult",
    "ModelConfig",
    "SpclustError",
    "build_distance_matrix",
    "fit",
    "fit_baseline",
    "great_circle_distance",
    "load_csv",
    "rand_index",
    "simulate",
    "standardize",
]
