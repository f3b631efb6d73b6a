"""Random-feature broad network: feature nodes, enhancement nodes, ridge training.

The network draws all projection weights once (uniform on [-1, 1]) and never
retrains them; only the output weights are fitted. Inputs are standardized
with statistics frozen from the training set so the tanh nodes operate away
from saturation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.special

from .errors import DomainError, ShapeError
from .linalg import as_matrix, solve_ridge

FEATURE_ACTIVATIONS = {
    "identity": lambda x: x,
    "tanh": np.tanh,
}

ENHANCEMENT_ACTIVATIONS = {
    "tanh": np.tanh,
    "sigmoid": scipy.special.expit,
}


@dataclass(frozen=True)
class BlsHyperparams:
    """Node counts, activations and ridge strength of a broad network.

    ``n`` feature groups of ``k`` nodes each feed ``m`` enhancement groups of
    ``q`` nodes; the regressor has ``n*k + m*q`` columns plus an optional
    all-ones bias column.
    """

    n: int = 10
    k: int = 20
    m: int = 1
    q: int = 200
    ridge_lambda: float = 0.01
    feature_activation: str = "tanh"
    enhancement_activation: str = "tanh"
    include_bias: bool = True
    seed: int = 0

    def __post_init__(self):
        for name in ("n", "k", "m", "q"):
            value = getattr(self, name)
            if not isinstance(value, (int, np.integer)) or value < 1:
                raise DomainError(f"{name} must be a positive integer, got {value!r}")
        if self.ridge_lambda < 0:
            raise DomainError(f"ridge_lambda must be >= 0, got {self.ridge_lambda}")
        if self.feature_activation not in FEATURE_ACTIVATIONS:
            raise DomainError(
                f"feature_activation must be one of {sorted(FEATURE_ACTIVATIONS)}, "
                f"got {self.feature_activation!r}"
            )
        if self.enhancement_activation not in ENHANCEMENT_ACTIVATIONS:
            raise DomainError(
                f"enhancement_activation must be one of "
                f"{sorted(ENHANCEMENT_ACTIVATIONS)}, got {self.enhancement_activation!r}"
            )
        if self.seed < 0:
            raise DomainError(f"seed must be non-negative, got {self.seed}")

    @property
    def feature_count(self) -> int:
        return self.n * self.k

    @property
    def enhancement_count(self) -> int:
        return self.m * self.q

    @property
    def total_nodes(self) -> int:
        return self.feature_count + self.enhancement_count + int(self.include_bias)


@dataclass(frozen=True)
class BlsNetwork:
    """Frozen random projections plus the input normalization statistics."""

    feature_weights: tuple[np.ndarray, ...]
    feature_biases: tuple[np.ndarray, ...]
    enhancement_weights: tuple[np.ndarray, ...]
    enhancement_biases: tuple[np.ndarray, ...]
    input_mean: np.ndarray
    input_scale: np.ndarray
    hyper: BlsHyperparams
    diagnostics: tuple[str, ...] = field(default=())

    @property
    def input_dim(self) -> int:
        return self.input_mean.shape[0]


def init_network(hyper: BlsHyperparams, input_dim: int, X_train) -> BlsNetwork:
    """Draw the random network for ``input_dim`` inputs, seeded by ``hyper.seed``.

    Normalization statistics come from the columns of ``X_train``; a
    zero-variance column gets its scale clamped to 1 and a diagnostic note.
    """
    if input_dim < 1:
        raise DomainError(f"input_dim must be >= 1, got {input_dim}")
    X_train = as_matrix(X_train, "X_train")
    if X_train.shape[1] != input_dim:
        raise ShapeError(
            f"X_train has {X_train.shape[1]} columns, expected input_dim={input_dim}"
        )

    rng = np.random.default_rng(hyper.seed)
    fw = tuple(rng.uniform(-1.0, 1.0, size=(input_dim, hyper.k)) for _ in range(hyper.n))
    fb = tuple(rng.uniform(-1.0, 1.0, size=hyper.k) for _ in range(hyper.n))
    ew = tuple(
        rng.uniform(-1.0, 1.0, size=(hyper.feature_count, hyper.q))
        for _ in range(hyper.m)
    )
    eb = tuple(rng.uniform(-1.0, 1.0, size=hyper.q) for _ in range(hyper.m))

    mean = X_train.mean(axis=0)
    scale = X_train.std(axis=0)
    diagnostics = []
    flat = np.flatnonzero(scale == 0.0)
    if flat.size:
        scale = scale.copy()
        scale[flat] = 1.0
        for j in flat:
            diagnostics.append(f"input column {j} has zero variance; scale clamped to 1")

    return BlsNetwork(
        feature_weights=fw,
        feature_biases=fb,
        enhancement_weights=ew,
        enhancement_biases=eb,
        input_mean=mean,
        input_scale=scale,
        hyper=hyper,
        diagnostics=tuple(diagnostics),
    )


def map_features(net: BlsNetwork, X) -> np.ndarray:
    """Feature nodes: activation of the standardized input under each random map."""
    X = as_matrix(X, "X")
    if X.shape[1] != net.input_dim:
        raise ShapeError(
            f"X has {X.shape[1]} columns, network expects {net.input_dim}"
        )
    phi = FEATURE_ACTIVATIONS[net.hyper.feature_activation]
    Xs = (X - net.input_mean) / net.input_scale
    blocks = [
        phi(Xs @ W + b) for W, b in zip(net.feature_weights, net.feature_biases)
    ]
    return np.hstack(blocks)


def enhance(net: BlsNetwork, Z) -> np.ndarray:
    """Enhancement nodes: second random projection applied to all feature nodes."""
    Z = as_matrix(Z, "Z")
    if Z.shape[1] != net.hyper.feature_count:
        raise ShapeError(
            f"Z has {Z.shape[1]} columns, expected {net.hyper.feature_count}"
        )
    xi = ENHANCEMENT_ACTIVATIONS[net.hyper.enhancement_activation]
    blocks = [
        xi(Z @ W + b) for W, b in zip(net.enhancement_weights, net.enhancement_biases)
    ]
    return np.hstack(blocks)


def assemble_system_matrix(Z, H, include_bias: bool) -> np.ndarray:
    """Concatenate [features | enhancements | ones] into the regressor matrix."""
    Z = as_matrix(Z, "Z")
    H = as_matrix(H, "H")
    if Z.shape[0] != H.shape[0]:
        raise ShapeError(
            f"row counts differ: Z has {Z.shape[0]} rows, H has {H.shape[0]}"
        )
    parts = [Z, H]
    if include_bias:
        parts.append(np.ones((Z.shape[0], 1)))
    return np.hstack(parts)


def system_matrix(net: BlsNetwork, X) -> np.ndarray:
    """Full regressor matrix for ``X``: mapped features, enhancements, bias."""
    Z = map_features(net, X)
    H = enhance(net, Z)
    return assemble_system_matrix(Z, H, net.hyper.include_bias)


def train_standard_bls(A, Y, lambda_ridge: float) -> np.ndarray:
    """Dense ridge solution for the output weights (the standard baseline)."""
    return solve_ridge(A, Y, lambda_ridge)


def predict(net: BlsNetwork, W, X) -> np.ndarray:
    """Network output for ``X`` under output weights ``W``."""
    W = as_matrix(W, "W")
    A = system_matrix(net, X)
    if W.shape[0] != A.shape[1]:
        raise ShapeError(
            f"W has {W.shape[0]} rows, system matrix has {A.shape[1]} columns"
        )
    return A @ W
