"""Sparse output-weight training by sequential thresholded least squares.

An initial dense ridge solution is alternately hard-thresholded and refit by
least squares on the surviving columns, for a fixed number of rounds. The
module also carries an exhaustive best-subset oracle (toy sizes only) and an
iterative soft-thresholding (ISTA) lasso baseline used for runtime
comparisons.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, EmptyActiveSetError, NumericalError, ShapeError
from .linalg import as_matrix, solve_least_squares, solve_ridge

BEST_SUBSET_MAX_COLUMNS = 12

ActiveSets = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class StlsConfig:
    """Thresholding policy for sparse training.

    Exactly one of ``threshold`` (a fixed truncation magnitude) or
    ``sparsity_target`` (fraction of entries to prune, resolved against the
    initial dense solution) must be set. ``max_iterations`` rounds always
    execute, regardless of early stabilization.
    """

    threshold: float | None = None
    sparsity_target: float | None = None
    max_iterations: int = 10
    strict_rank: bool = False

    def __post_init__(self):
        if (self.threshold is None) == (self.sparsity_target is None):
            raise DomainError(
                "exactly one of threshold / sparsity_target must be set"
            )
        if self.threshold is not None and not self.threshold > 0:
            raise DomainError(f"threshold must be > 0, got {self.threshold}")
        if self.sparsity_target is not None and not 0 < self.sparsity_target < 1:
            raise DomainError(
                f"sparsity_target must lie in (0, 1), got {self.sparsity_target}"
            )
        if self.max_iterations < 1:
            raise DomainError(
                f"max_iterations must be >= 1, got {self.max_iterations}"
            )


@dataclass(frozen=True)
class SparseWeights:
    """Result of sparse training.

    ``active_sets[d]`` lists the surviving row indices of output ``d``;
    ``trace[t, d]`` is the active count after the thresholding step of round
    ``t``. ``threshold_used`` is the realized truncation magnitude.
    """

    W: np.ndarray
    active_sets: ActiveSets
    trace: np.ndarray
    threshold_used: float

    @property
    def iterations(self) -> int:
        return self.trace.shape[0]


def hard_threshold(W, threshold: float) -> tuple[np.ndarray, ActiveSets]:
    """Zero out all entries with magnitude below ``threshold``.

    Returns the truncated matrix and, per column, the surviving row indices.
    """
    if not threshold > 0:
        raise DomainError(f"threshold must be > 0, got {threshold}")
    W = as_matrix(W, "W")
    keep = np.abs(W) >= threshold
    out = np.where(keep, W, 0.0)
    active = tuple(tuple(np.flatnonzero(out[:, d]).tolist()) for d in range(W.shape[1]))
    return out, active


def select_threshold(W0, config: StlsConfig) -> float:
    """Realize the truncation magnitude for a weight matrix ``W0``.

    Fixed mode returns the configured value verbatim. Target mode returns the
    midpoint between the ceil(rho * L * C)-th and the next order statistic of
    the pooled magnitudes, so thresholding prunes about a ``rho`` fraction.
    Already-zero entries count toward the pruned fraction; if the quantile
    lands inside them, the threshold degrades to half the smallest nonzero
    magnitude, which prunes nothing further.
    """
    if config.threshold is not None:
        return float(config.threshold)

    W0 = as_matrix(W0, "W0")
    pooled = np.sort(np.abs(W0).ravel())
    if pooled[-1] == 0.0:
        raise DomainError("W0 is all zero; cannot derive a threshold from it")
    rank = math.ceil(config.sparsity_target * pooled.size)
    # Keep at least one survivor even for targets close to 1.
    rank = min(rank, pooled.size - 1)
    threshold = 0.5 * (pooled[rank - 1] + pooled[rank])
    if threshold == 0.0:
        threshold = 0.5 * pooled[pooled > 0.0][0]
    return float(threshold)


def project_active_set(A, Y, active_sets: Sequence[Sequence[int]], *, strict: bool = False) -> np.ndarray:
    """Least-squares refit restricted to the active columns, per output.

    Rows outside an output's active set are exactly zero in the result.
    """
    A = as_matrix(A, "A")
    Y = as_matrix(Y, "Y")
    if A.shape[0] != Y.shape[0]:
        raise ShapeError(
            f"row counts differ: A has {A.shape[0]} rows, Y has {Y.shape[0]}"
        )
    if len(active_sets) != Y.shape[1]:
        raise ShapeError(
            f"got {len(active_sets)} active sets for {Y.shape[1]} outputs"
        )
    W = np.zeros((A.shape[1], Y.shape[1]))
    for d, support in enumerate(active_sets):
        idx = np.asarray(support, dtype=np.intp)
        if idx.size == 0:
            raise EmptyActiveSetError(d)
        sub = solve_least_squares(A[:, idx], Y[:, d : d + 1], strict=strict)
        W[idx, d] = sub[:, 0]
    return W


def train_sbls(
    A,
    Y,
    config: StlsConfig,
    ridge_lambda: float = 0.0,
    on_iteration: Callable[[int, np.ndarray, ActiveSets], None] | None = None,
) -> SparseWeights:
    """Sparse training loop: dense ridge init, then threshold/refit rounds.

    The dense initialization uses ``ridge_lambda`` (0 gives the plain
    least-squares pseudoinverse solution on full-rank systems). A fixed
    threshold is applied unchanged in every round; a sparsity target is
    re-resolved each round against the current weights, where the
    already-pruned zeros keep the realized threshold just below the smallest
    surviving magnitude, so the support settles at the target fraction
    instead of eroding further. Exactly ``config.max_iterations`` rounds run;
    a refit is skipped only when the support did not change, in which case
    the previous solution is already the least-squares optimum on that
    support and is reused unchanged.

    ``on_iteration(t, W, active_sets)`` is invoked after each round's refit,
    mainly for instrumentation in tests and diagnostics.
    """
    A = as_matrix(A, "A")
    Y = as_matrix(Y, "Y")
    if A.shape[0] < 2:
        raise ShapeError(f"need at least 2 samples, got {A.shape[0]}")

    W = solve_ridge(A, Y, ridge_lambda, strict=config.strict_rank)
    threshold = select_threshold(W, config)

    trace = np.zeros((config.max_iterations, Y.shape[1]), dtype=np.intp)
    previous: ActiveSets | None = None
    active: ActiveSets = ()
    realized = threshold
    for t in range(config.max_iterations):
        if t > 0 and config.sparsity_target is not None:
            threshold = select_threshold(W, config)
        W, active = hard_threshold(W, threshold)
        trace[t] = [len(s) for s in active]
        if active != previous:
            W = project_active_set(A, Y, active, strict=config.strict_rank)
            previous = active
        if on_iteration is not None:
            on_iteration(t, W, active)
    return SparseWeights(W=W, active_sets=active, trace=trace, threshold_used=realized)


def best_subset_oracle(A, Y, max_support: int) -> tuple[tuple[int, ...], np.ndarray, float]:
    """Exhaustive minimizer of the residual over all supports up to ``max_support``.

    Intended as ground truth at toy sizes; guarded to at most
    ``BEST_SUBSET_MAX_COLUMNS`` columns. Ties resolve to the first support in
    (size, lexicographic) order. The inner fits deliberately use numpy's
    lstsq rather than the production solver.
    """
    A = as_matrix(A, "A")
    Y = as_matrix(Y, "Y")
    if Y.shape[1] != 1:
        raise ShapeError(f"oracle handles a single output, got {Y.shape[1]}")
    if A.shape[0] != Y.shape[0]:
        raise ShapeError(
            f"row counts differ: A has {A.shape[0]} rows, Y has {Y.shape[0]}"
        )
    L = A.shape[1]
    if L > BEST_SUBSET_MAX_COLUMNS:
        raise DomainError(
            f"exhaustive search guarded to {BEST_SUBSET_MAX_COLUMNS} columns, got {L}"
        )
    if not 1 <= max_support <= L:
        raise DomainError(f"max_support must be in [1, {L}], got {max_support}")

    best_support: tuple[int, ...] = ()
    best_w = np.zeros((L, 1))
    best_sse = float(np.sum(Y**2))
    for size in range(1, max_support + 1):
        for support in combinations(range(L), size):
            idx = np.asarray(support, dtype=np.intp)
            w, *_ = np.linalg.lstsq(A[:, idx], Y, rcond=None)
            sse = float(np.sum((Y - A[:, idx] @ w) ** 2))
            if sse < best_sse:
                best_sse = sse
                best_support = support
                best_w = np.zeros((L, 1))
                best_w[idx] = w
    return best_support, best_w, best_sse


def train_lasso_ista(A, Y, alpha: float, iterations: int) -> tuple[np.ndarray, int]:
    """ISTA for ``0.5 ||Y - AW||_F^2 + alpha ||W||_1``.

    The step size is the inverse of a power-iteration bound on the largest
    eigenvalue of ``A^T A``. Stops at ``iterations`` or when the largest
    weight change drops below 1e-6, whichever comes first; returns the final
    weights and the number of iterations executed.
    """
    if alpha < 0:
        raise DomainError(f"alpha must be >= 0, got {alpha}")
    if iterations < 1:
        raise DomainError(f"iterations must be >= 1, got {iterations}")
    A = as_matrix(A, "A")
    Y = as_matrix(Y, "Y")
    if A.shape[0] != Y.shape[0]:
        raise ShapeError(
            f"row counts differ: A has {A.shape[0]} rows, Y has {Y.shape[0]}"
        )

    G = A.T @ A
    # Deterministic power iteration; the small ramp avoids a start vector
    # orthogonal to the dominant eigenvector.
    v = 1.0 + 1e-3 * np.arange(A.shape[1])
    v /= np.linalg.norm(v)
    for _ in range(50):
        v = G @ v
        norm = np.linalg.norm(v)
        if norm == 0.0:
            break
        v /= norm
    sigma = float(v @ (G @ v)) * 1.01
    if sigma <= 0.0:
        raise NumericalError("power iteration found a non-positive spectral bound")
    step = 1.0 / sigma

    W = np.zeros((A.shape[1], Y.shape[1]))
    AtY = A.T @ Y
    executed = 0
    for executed in range(1, iterations + 1):
        grad = G @ W - AtY
        W_next = W - step * grad
        W_next = np.sign(W_next) * np.maximum(np.abs(W_next) - step * alpha, 0.0)
        if not np.isfinite(W_next).all():
            raise NumericalError(f"non-finite weights at ISTA iteration {executed}")
        delta = float(np.max(np.abs(W_next - W)))
        W = W_next
        if delta < 1e-6:
            break
    return W, executed
