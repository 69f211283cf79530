"""Recombinator k-means: batched restarts seeded from pools of previous runs."""

from ._rkm import (
    Dataset,
    assign,
    basic_kmeanspp,
    bootstrap_repeated,
    compute_weights,
    default_s,
    greedy_kmeanspp,
    load_dataset,
    loss,
    recombinator_kmeans,
    repeated_kmeans,
    reservoir_kmeanspp,
    run_lloyd,
    scale_to_unit_square,
    simple_kmeans,
    squared_distance,
)

__all__ = [
    "Dataset",
    "assign",
    "basic_kmeanspp",
    "bootstrap_repeated",
    "compute_weights",
    "default_s",
    "greedy_kmeanspp",
    "load_dataset",
    "loss",
    "recombinator_kmeans",
    "repeated_kmeans",
    "reservoir_kmeanspp",
    "run_lloyd",
    "scale_to_unit_square",
    "simple_kmeans",
    "squared_distance",
]
