"""Deterministic benchmark generators for noisy system identification.

Two plants are provided: a second-order rational difference system driven by
a bounded input, and a continuous stirred tank reactor (two states:
concentration and temperature, driven by coolant temperature). Both produce
lagged-regressor datasets whose training targets can be corrupted with
uniform noise and optional outliers; test targets are always noise free.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.optimize

from ._backend import cstr_rk4, nonlinear_trajectory
from .errors import CsvFormatError, DomainError, InstabilityError, ShapeError
from .linalg import as_matrix

NOISE_KINDS = ("none", "uniform", "uniform_outliers")

# Physical envelope enforced by the reactor integrator.
CSTR_TEMP_MIN = 200.0
CSTR_TEMP_MAX = 600.0
CSTR_CA_MAX_FACTOR = 1.5

# Reactor excitation: coolant base level, random step amplitude and hold
# length for training, and the fixed multi-step profile used for testing.
CSTR_TC_BASE = 300.0
CSTR_TC_STEP = 15.0
CSTR_TC_HOLD = 10
CSTR_TEST_PROFILE = (0.0, 10.0, -10.0, 15.0, -8.0, 5.0, -12.0, 8.0)
CSTR_TEST_HOLD = 25

NONLINEAR_DIVERGENCE_LIMIT = 1e6


@dataclass(frozen=True)
class NoiseSpec:
    """Training-target corruption: uniform noise plus optional outliers.

    ``uniform`` adds i.i.d. Uniform[-gamma, gamma] to every entry;
    ``uniform_outliers`` additionally shifts a random
    floor(outlier_fraction * N) subset of rows by +/- outlier_magnitude
    standard deviations of the clean targets.
    """

    kind: str = "none"
    gamma: float = 0.0
    outlier_fraction: float = 0.05
    outlier_magnitude: float = 5.0
    seed: int = 0

    def __post_init__(self):
        if self.kind not in NOISE_KINDS:
            raise DomainError(f"kind must be one of {NOISE_KINDS}, got {self.kind!r}")
        if self.gamma < 0:
            raise DomainError(f"gamma must be >= 0, got {self.gamma}")
        if not 0 <= self.outlier_fraction < 1:
            raise DomainError(
                f"outlier_fraction must lie in [0, 1), got {self.outlier_fraction}"
            )
        if self.outlier_magnitude <= 0:
            raise DomainError(
                f"outlier_magnitude must be > 0, got {self.outlier_magnitude}"
            )
        if self.seed < 0:
            raise DomainError(f"seed must be non-negative, got {self.seed}")


@dataclass(frozen=True)
class CstrParams:
    """Reactor constants (flow, kinetics, heat balance) and sample interval.

    Defaults are the standard benchmark set: 100 L/min feed into 100 L,
    Arrhenius kinetics k0 exp(-E_over_R / T), feed at 1 mol/L and 350 K,
    reaction heat gain 209.2 K L/mol and coolant coupling 2.092 1/min,
    sampled every 0.1 min.
    """

    q: float = 100.0
    V: float = 100.0
    k0: float = 7.2e10
    E_over_R: float = 8750.0
    CAf: float = 1.0
    Tf: float = 350.0
    neg_dH_over_rhoCp: float = 209.2
    UA_over_VrhoCp: float = 2.092
    dt: float = 0.1

    def __post_init__(self):
        for name in (
            "q",
            "V",
            "k0",
            "E_over_R",
            "CAf",
            "Tf",
            "neg_dH_over_rhoCp",
            "UA_over_VrhoCp",
            "dt",
        ):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be > 0, got {getattr(self, name)}")


@dataclass(frozen=True)
class TimeSeriesDataset:
    """Lagged-regressor train/test split with noise provenance.

    Only training targets carry noise; ``outlier_rows`` lists the training
    rows that received an outlier shift.
    """

    X_train: np.ndarray
    Y_train: np.ndarray
    X_test: np.ndarray
    Y_test: np.ndarray
    regressor_names: tuple[str, ...]
    noise_applied: NoiseSpec
    outlier_rows: tuple[int, ...] = ()

    def __post_init__(self):
        for X, Y, tag in (
            (self.X_train, self.Y_train, "train"),
            (self.X_test, self.Y_test, "test"),
        ):
            if X.shape[0] != Y.shape[0]:
                raise ShapeError(
                    f"{tag} split: X has {X.shape[0]} rows, Y has {Y.shape[0]}"
                )
        if self.X_train.shape[1] != len(self.regressor_names):
            raise ShapeError(
                f"{self.X_train.shape[1]} regressors but "
                f"{len(self.regressor_names)} names"
            )


def apply_noise(Y, spec: NoiseSpec) -> tuple[np.ndarray, tuple[int, ...]]:
    """Corrupt ``Y`` per ``spec``; also return the affected outlier rows."""
    Y = as_matrix(Y, "Y")
    if spec.kind == "none":
        return Y.copy(), ()
    rng = np.random.default_rng(spec.seed)
    out = Y + rng.uniform(-spec.gamma, spec.gamma, size=Y.shape)
    if spec.kind == "uniform":
        return out, ()
    count = int(spec.outlier_fraction * Y.shape[0])
    rows = rng.choice(Y.shape[0], size=count, replace=False)
    signs = rng.integers(0, 2, size=(count, Y.shape[1])) * 2 - 1
    out[rows] += signs * spec.outlier_magnitude * Y.std(axis=0)
    return out, tuple(sorted(int(r) for r in rows))


def add_noise(Y, spec: NoiseSpec) -> np.ndarray:
    """Corrupt ``Y`` per ``spec`` (:func:`apply_noise` without the row list)."""
    return apply_noise(Y, spec)[0]


def nonlinear_step(y_prev: float, y_prev2: float, u_prev: float) -> float:
    """One step of the rational difference system."""
    num = y_prev * y_prev2 * (y_prev + 2.5)
    den = 1.0 + y_prev * y_prev + y_prev2 * y_prev2
    return num / den + u_prev


def simulate_nonlinear(u) -> np.ndarray:
    """Trajectory of the rational difference system from zero history."""
    u = np.ascontiguousarray(u, dtype=np.float64)
    if u.ndim != 1:
        raise ShapeError(f"u must be 1-D, got shape {u.shape}")
    y, bad = nonlinear_trajectory(u, NONLINEAR_DIVERGENCE_LIMIT)
    if bad >= 0:
        raise InstabilityError(
            f"trajectory diverged at step {bad}: |y| > {NONLINEAR_DIVERGENCE_LIMIT:g}",
            step=int(bad),
        )
    return y


def _lagged_regressors(
    y: np.ndarray, u: np.ndarray, ny: int, nu: int, count: int
) -> tuple[np.ndarray, np.ndarray]:
    start = max(ny, nu, 2)
    rows = np.arange(start, start + count)
    cols = [y[rows - lag] for lag in range(1, ny + 1)]
    cols += [u[rows - lag] for lag in range(1, nu + 1)]
    return np.column_stack(cols), y[rows].reshape(-1, 1)


def gen_nonlinear_system(
    n_train: int,
    n_test: int,
    noise: NoiseSpec,
    seed: int,
    ny: int = 2,
    nu: int = 1,
    noise_in_regressors: bool = False,
) -> TimeSeriesDataset:
    """Dataset for the rational difference system.

    Training uses i.i.d. Uniform[-2, 2] input, testing a sine of period 25;
    both trajectories start from zero history. Regressors are the lagged
    outputs and inputs (``ny``/``nu`` lags, defaults matching the plant
    order), the target is the next output.

    By default only the training targets are corrupted. With
    ``noise_in_regressors`` the noise is applied to the whole measured output
    sequence instead, so it also propagates into the lagged output
    regressors, as with a noisy sensor.
    """
    if n_train < 10 or n_test < 10:
        raise DomainError(
            f"need n_train, n_test >= 10, got {n_train}, {n_test}"
        )
    if ny < 1 or nu < 1:
        raise DomainError(f"need ny, nu >= 1, got {ny}, {nu}")
    start = max(ny, nu, 2)
    rng = np.random.default_rng(seed)

    u_train = rng.uniform(-2.0, 2.0, size=start + n_train)
    y_train = simulate_nonlinear(u_train)
    if noise_in_regressors:
        measured, seq_outliers = apply_noise(y_train.reshape(-1, 1), noise)
        X_train, Y_train = _lagged_regressors(measured[:, 0], u_train, ny, nu, n_train)
        outliers = tuple(s - start for s in seq_outliers if s >= start)
    else:
        X_train, Y_clean = _lagged_regressors(y_train, u_train, ny, nu, n_train)
        Y_train, outliers = apply_noise(Y_clean, noise)

    steps = np.arange(start + n_test, dtype=np.float64)
    u_test = np.sin(2.0 * np.pi * steps / 25.0)
    y_test = simulate_nonlinear(u_test)
    X_test, Y_test = _lagged_regressors(y_test, u_test, ny, nu, n_test)

    names = tuple(f"y_lag{i}" for i in range(1, ny + 1)) + tuple(
        f"u_lag{i}" for i in range(1, nu + 1)
    )
    return TimeSeriesDataset(
        X_train=X_train,
        Y_train=Y_train,
        X_test=X_test,
        Y_test=Y_test,
        regressor_names=names,
        noise_applied=noise,
        outlier_rows=outliers,
    )


def cstr_rhs(params: CstrParams, ca: float, temp: float, tc: float) -> tuple[float, float]:
    """Time derivatives (dCa/dt, dT/dt) of the reactor at one state."""
    q_over_v = params.q / params.V
    rate = params.k0 * math.exp(-params.E_over_R / temp) * ca
    dca = q_over_v * (params.CAf - ca) - rate
    dtemp = (
        q_over_v * (params.Tf - temp)
        + params.neg_dH_over_rhoCp * rate
        + params.UA_over_VrhoCp * (tc - temp)
    )
    return dca, dtemp


def cstr_steady_state(params: CstrParams, tc: float) -> tuple[float, float]:
    """Lowest-temperature steady state for a constant coolant temperature.

    Reduces the fixed-point conditions to a scalar equation in temperature
    (concentration follows from the mass balance) and brackets roots on a
    temperature grid; the reactor is ignition-capable, so several branches
    can coexist and the coolest (stable) one is returned.
    """
    q_over_v = params.q / params.V

    def ca_of(temp: float) -> float:
        return params.CAf / (1.0 + params.k0 * math.exp(-params.E_over_R / temp) / q_over_v)

    def energy_residual(temp: float) -> float:
        return cstr_rhs(params, ca_of(temp), temp, tc)[1]

    grid = np.linspace(CSTR_TEMP_MIN + 1.0, CSTR_TEMP_MAX - 1.0, 800)
    values = np.array([energy_residual(t) for t in grid])
    roots = []
    for i in np.flatnonzero(np.sign(values[:-1]) * np.sign(values[1:]) <= 0):
        roots.append(scipy.optimize.brentq(energy_residual, grid[i], grid[i + 1]))
    if not roots:
        raise DomainError(
            f"no steady state inside [{CSTR_TEMP_MIN}, {CSTR_TEMP_MAX}] K for Tc={tc}"
        )
    temp = min(roots)
    return ca_of(temp), temp


def simulate_cstr(
    params: CstrParams,
    tc_sequence,
    x0: tuple[float, float],
    substeps: int = 10,
) -> np.ndarray:
    """Sampled reactor trajectory under a piecewise-constant coolant sequence.

    Integrates with classical RK4 at step ``dt / substeps`` and returns the
    states at the sampling instants, including the initial state (one row per
    sample plus one, columns concentration and temperature).
    """
    if substeps < 1:
        raise DomainError(f"substeps must be >= 1, got {substeps}")
    tc_sequence = np.ascontiguousarray(tc_sequence, dtype=np.float64)
    if tc_sequence.ndim != 1 or tc_sequence.size == 0:
        raise ShapeError("tc_sequence must be a nonempty 1-D array")
    ca0, temp0 = float(x0[0]), float(x0[1])
    ca_max = CSTR_CA_MAX_FACTOR * params.CAf
    if not (0.0 <= ca0 <= ca_max and CSTR_TEMP_MIN <= temp0 <= CSTR_TEMP_MAX):
        raise InstabilityError(
            f"initial state ({ca0}, {temp0}) outside physical bounds", step=0
        )
    states, bad = cstr_rk4(
        ca0,
        temp0,
        tc_sequence,
        substeps,
        params.dt,
        params.q / params.V,
        params.CAf,
        params.Tf,
        params.k0,
        params.E_over_R,
        params.neg_dH_over_rhoCp,
        params.UA_over_VrhoCp,
        ca_max,
        CSTR_TEMP_MIN,
        CSTR_TEMP_MAX,
    )
    if bad >= 0:
        raise InstabilityError(
            f"reactor state left physical bounds during sampling interval {bad}",
            step=int(bad),
        )
    return states


def _cstr_test_coolant(n_test: int) -> np.ndarray:
    block = np.repeat(np.asarray(CSTR_TEST_PROFILE), CSTR_TEST_HOLD)
    reps = int(np.ceil(n_test / block.size))
    return CSTR_TC_BASE + np.tile(block, reps)[:n_test]


def gen_cstr_dataset(
    params: CstrParams,
    n_train: int,
    n_test: int,
    noise: NoiseSpec,
    seed: int,
    warmup: int = 50,
    noise_in_regressors: bool = False,
) -> TimeSeriesDataset:
    """Reactor identification dataset: predict concentration one step ahead.

    Training excitation is a random coolant staircase (steps uniform within
    +/- 15 K of the 300 K base, held 10 samples); the first ``warmup``
    samples are discarded. Testing uses a fixed multi-step coolant profile.
    Regressors [Ca(n-1), T(n-1), Tc(n-1)] are standardized with training
    statistics; the target Ca(n) stays in physical units.

    ``noise_in_regressors`` corrupts the measured concentration sequence
    (hence also the lagged concentration regressor) instead of the targets
    alone; temperature and coolant readings stay clean either way.
    """
    if n_train < 10 or n_test < 10:
        raise DomainError(
            f"need n_train, n_test >= 10, got {n_train}, {n_test}"
        )
    rng = np.random.default_rng(seed)
    x0 = cstr_steady_state(params, CSTR_TC_BASE)

    total = warmup + n_train
    n_blocks = int(np.ceil(total / CSTR_TC_HOLD))
    offsets = rng.uniform(-CSTR_TC_STEP, CSTR_TC_STEP, size=n_blocks)
    tc_train = CSTR_TC_BASE + np.repeat(offsets, CSTR_TC_HOLD)[:total]
    states = simulate_cstr(params, tc_train, x0)

    rows = np.arange(warmup + 1, total + 1)
    ca_train = states[:, 0]
    if noise_in_regressors:
        measured, seq_outliers = apply_noise(ca_train.reshape(-1, 1), noise)
        ca_train = measured[:, 0]
        outliers = tuple(
            s - (warmup + 1) for s in seq_outliers if s >= warmup + 1
        )
    X_train = np.column_stack(
        [ca_train[rows - 1], states[rows - 1, 1], tc_train[rows - 1]]
    )
    Y_train = ca_train[rows].reshape(-1, 1)

    tc_test = _cstr_test_coolant(n_test)
    states_test = simulate_cstr(params, tc_test, x0)
    rows_test = np.arange(1, n_test + 1)
    X_test = np.column_stack(
        [
            states_test[rows_test - 1, 0],
            states_test[rows_test - 1, 1],
            tc_test[rows_test - 1],
        ]
    )
    Y_test = states_test[rows_test, 0].reshape(-1, 1)

    mean = X_train.mean(axis=0)
    scale = X_train.std(axis=0)
    scale[scale == 0.0] = 1.0
    X_train = (X_train - mean) / scale
    X_test = (X_test - mean) / scale

    if not noise_in_regressors:
        Y_train, outliers = apply_noise(Y_train, noise)
    return TimeSeriesDataset(
        X_train=X_train,
        Y_train=Y_train,
        X_test=X_test,
        Y_test=Y_test,
        regressor_names=("ca_lag1", "temp_lag1", "coolant_lag1"),
        noise_applied=noise,
        outlier_rows=outliers,
    )


# ---------------------------------------------------------------------------
# CSV round trip
# ---------------------------------------------------------------------------

_TARGET_PREFIX = "target_"


def _format_row(values) -> str:
    return ",".join(f"{v:.17g}" for v in values)


def _write_split(path: Path, names, X: np.ndarray, Y: np.ndarray) -> None:
    header = ",".join(list(names) + [f"target_{c + 1}" for c in range(Y.shape[1])])
    lines = [header]
    for i in range(X.shape[0]):
        lines.append(_format_row(np.concatenate([X[i], Y[i]])))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def export_csv(dataset: TimeSeriesDataset, path) -> None:
    """Write ``train.csv``, ``test.csv`` and ``meta.json`` under ``path``.

    Values are serialized with 17 significant digits, so a subsequent
    :func:`import_csv` reproduces every matrix exactly.
    """
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    _write_split(path / "train.csv", dataset.regressor_names, dataset.X_train, dataset.Y_train)
    _write_split(path / "test.csv", dataset.regressor_names, dataset.X_test, dataset.Y_test)
    spec = dataset.noise_applied
    meta = {
        "noise": {
            "kind": spec.kind,
            "gamma": spec.gamma,
            "outlier_fraction": spec.outlier_fraction,
            "outlier_magnitude": spec.outlier_magnitude,
            "seed": spec.seed,
        },
        "outlier_rows": list(dataset.outlier_rows),
    }
    (path / "meta.json").write_text(json.dumps(meta, indent=2) + "\n", encoding="utf-8")


def _parse_split(path: Path) -> tuple[tuple[str, ...], np.ndarray, np.ndarray]:
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError as exc:
        raise CsvFormatError(f"missing file {path}") from exc
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise CsvFormatError("empty file", line=1)
    header = [h.strip() for h in lines[0].split(",")]
    n_targets = 0
    while n_targets < len(header) and header[-1 - n_targets].startswith(_TARGET_PREFIX):
        n_targets += 1
    if n_targets == 0 or n_targets == len(header):
        raise CsvFormatError(
            f"header must end with {_TARGET_PREFIX}* columns after at least "
            f"one regressor, got {lines[0]!r}",
            line=1,
        )
    names = tuple(header[: len(header) - n_targets])
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        fields = line.split(",")
        if len(fields) != len(header):
            raise CsvFormatError(
                f"expected {len(header)} fields, got {len(fields)}", line=lineno
            )
        try:
            rows.append([float(f) for f in fields])
        except ValueError as exc:
            raise CsvFormatError(str(exc), line=lineno) from exc
    if not rows:
        raise CsvFormatError("no data rows", line=1)
    data = np.asarray(rows)
    return names, data[:, : len(names)], data[:, len(names) :]


def import_csv(path) -> TimeSeriesDataset:
    """Read a dataset previously written by :func:`export_csv`."""
    path = Path(path)
    names_train, X_train, Y_train = _parse_split(path / "train.csv")
    names_test, X_test, Y_test = _parse_split(path / "test.csv")
    if names_train != names_test:
        raise CsvFormatError(
            f"train/test headers disagree: {names_train} vs {names_test}", line=1
        )
    noise = NoiseSpec()
    outlier_rows: tuple[int, ...] = ()
    meta_path = path / "meta.json"
    if meta_path.exists():
        meta = json.loads(meta_path.read_text(encoding="utf-8"))
        noise = NoiseSpec(**meta["noise"])
        outlier_rows = tuple(meta["outlier_rows"])
    return TimeSeriesDataset(
        X_train=X_train,
        Y_train=Y_train,
        X_test=X_test,
        Y_test=Y_test,
        regressor_names=names_train,
        noise_applied=noise,
        outlier_rows=outlier_rows,
    )
