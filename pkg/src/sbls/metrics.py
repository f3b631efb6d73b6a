"""Evaluation quantities: RMSE, sparsity ratio, active nodes, result rows."""

from __future__ import annotations

from dataclasses import dataclass, fields

import numpy as np

from .errors import ShapeError
from .linalg import as_matrix

RESULTS_CSV_HEADER = (
    "benchmark,method,noise_level,seed,rmse_test,rmse_train,"
    "total_nodes,active_nodes,sparsity_pct,train_time_ms,iterations"
)


def rmse(y, y_hat) -> float:
    """Root mean square error between two equally long vectors."""
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    y_hat = np.asarray(y_hat, dtype=np.float64).reshape(-1)
    if y.shape != y_hat.shape:
        raise ShapeError(f"length mismatch: {y.shape[0]} vs {y_hat.shape[0]}")
    if y.size == 0:
        raise ShapeError("rmse needs at least one sample")
    return float(np.sqrt(np.mean((y - y_hat) ** 2)))


def sparsity_ratio(W) -> float:
    """Percentage of exactly-zero entries in ``W``.

    Zero detection is exact; the sparse trainer writes literal zeros, so no
    epsilon is applied here.
    """
    W = as_matrix(W, "W")
    return float((1.0 - np.count_nonzero(W) / W.size) * 100.0)


def active_nodes(W) -> int:
    """Number of rows of ``W`` with at least one nonzero entry."""
    W = as_matrix(W, "W")
    return int(np.count_nonzero(np.any(W != 0.0, axis=1)))


@dataclass(frozen=True)
class ExperimentRecord:
    """One result row of an experiment grid cell."""

    benchmark: str
    method: str
    noise_level: float
    seed: int
    rmse_test: float
    rmse_train: float
    total_nodes: int
    active_nodes: int
    sparsity_pct: float
    train_time_ms: float
    iterations: int

    def __post_init__(self):
        if self.rmse_test < 0 or self.rmse_train < 0:
            raise ValueError("rmse must be non-negative")
        if not 0 <= self.active_nodes <= self.total_nodes:
            raise ValueError(
                f"active_nodes {self.active_nodes} outside [0, {self.total_nodes}]"
            )
        expected = (1.0 - self.active_nodes / self.total_nodes) * 100.0
        if abs(self.sparsity_pct - expected) > 1e-9:
            raise ValueError(
                f"sparsity_pct {self.sparsity_pct} inconsistent with "
                f"{self.active_nodes}/{self.total_nodes} active nodes"
            )

    def to_csv_row(self) -> str:
        parts = []
        for f in fields(self):
            value = getattr(self, f.name)
            parts.append(f"{value:.17g}" if isinstance(value, float) else str(value))
        return ",".join(parts)
