"""Dense least-squares and ridge solvers used by every training routine.

Both solvers avoid explicit matrix inversion: least squares goes through a
column-pivoted QR factorization, ridge through a Cholesky factorization of
the (positive definite) regularized normal equations.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .errors import DomainError, ShapeError, SingularMatrixError

# Relative pivot tolerance used for rank detection and the diagonal jitter
# applied when a rank-deficient solve runs in non-strict mode.
DEFAULT_PIVOT_RTOL = 1e-12


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Validate and return ``a`` as a finite 2-D float64 array."""
    out = np.asarray(a, dtype=np.float64)
    if out.ndim != 2:
        raise ShapeError(f"{name} must be 2-D, got shape {out.shape}")
    if out.size == 0:
        raise ShapeError(f"{name} must be nonempty, got shape {out.shape}")
    if not np.isfinite(out).all():
        raise DomainError(f"{name} contains non-finite entries")
    return out


def _check_rows_match(A: np.ndarray, B: np.ndarray) -> None:
    if A.shape[0] != B.shape[0]:
        raise ShapeError(
            f"row counts differ: A has {A.shape[0]} rows, B has {B.shape[0]}"
        )


def _jittered_normal_solve(A, B, rtol: float) -> np.ndarray:
    """Ridge-style fallback for rank-deficient systems.

    A relative diagonal jitter keeps the Cholesky factorization well posed
    and approximates the minimum-norm least-squares solution.
    """
    G = A.T @ A
    eps = rtol * max(1.0, float(G.diagonal().max()))
    c, low = scipy.linalg.cho_factor(G + eps * np.eye(G.shape[0]))
    return scipy.linalg.cho_solve((c, low), A.T @ B)


def solve_least_squares(
    A,
    B,
    *,
    strict: bool = False,
    pivot_rtol: float = DEFAULT_PIVOT_RTOL,
) -> np.ndarray:
    """Solve ``min_W ||B - A W||_F`` for a dense N x P matrix A.

    Rank deficiency raises :class:`SingularMatrixError` when ``strict`` is
    true; otherwise the solve falls back to a jittered minimum-norm solution.
    """
    A = as_matrix(A, "A")
    B = as_matrix(B, "B")
    _check_rows_match(A, B)
    n, p = A.shape
    if n < p:
        # Underdetermined systems are rank deficient by construction.
        if strict:
            raise SingularMatrixError(
                f"A has rank at most {n} but {p} columns (underdetermined)"
            )
        return _jittered_normal_solve(A, B, pivot_rtol)

    Q, R, perm = scipy.linalg.qr(A, mode="economic", pivoting=True)
    diag = np.abs(np.diag(R))
    # Pivoted QR sorts |R_ii| in non-increasing order, so the first diagonal
    # entry is the reference scale.
    rank = int(np.count_nonzero(diag > pivot_rtol * diag[0])) if diag[0] > 0 else 0
    if rank < p:
        if strict:
            raise SingularMatrixError(f"A is rank deficient: rank {rank} < {p} columns")
        return _jittered_normal_solve(A, B, pivot_rtol)

    Z = scipy.linalg.solve_triangular(R, Q.T @ B, lower=False)
    W = np.empty_like(Z)
    W[perm] = Z
    return np.ascontiguousarray(W)


def solve_ridge(
    A,
    B,
    lambda_ridge: float,
    *,
    strict: bool = False,
    pivot_rtol: float = DEFAULT_PIVOT_RTOL,
) -> np.ndarray:
    """Solve the ridge problem ``(A^T A + lambda I) W = A^T B``.

    ``lambda_ridge = 0`` delegates to :func:`solve_least_squares`.
    """
    if lambda_ridge < 0:
        raise DomainError(f"lambda_ridge must be >= 0, got {lambda_ridge}")
    if lambda_ridge == 0:
        return solve_least_squares(A, B, strict=strict, pivot_rtol=pivot_rtol)

    A = as_matrix(A, "A")
    B = as_matrix(B, "B")
    _check_rows_match(A, B)
    G = A.T @ A + lambda_ridge * np.eye(A.shape[1])
    try:
        c, low = scipy.linalg.cho_factor(G)
    except scipy.linalg.LinAlgError as exc:  # pragma: no cover - needs overflow
        raise SingularMatrixError(f"regularized normal matrix not SPD: {exc}") from exc
    return np.ascontiguousarray(scipy.linalg.cho_solve((c, low), A.T @ B))
