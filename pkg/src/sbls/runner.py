"""Experiment grid execution, tracking traces, and the timing comparison.

Every (noise level, seed, method) cell generates its dataset, trains, and is
scored on the noise-free test split. Cell outputs are derived purely from
the config, so reruns reproduce ``results.csv`` byte for byte as long as
wall-clock capture stays disabled (``record_timing = false``, the default).
"""

from __future__ import annotations

import logging
import os
import time
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .config import ExperimentConfig
from .datasets import (
    CstrParams,
    NoiseSpec,
    TimeSeriesDataset,
    gen_cstr_dataset,
    gen_nonlinear_system,
)
from .errors import DomainError, SblsError
from .metrics import RESULTS_CSV_HEADER, ExperimentRecord, active_nodes, rmse
from .network import BlsNetwork, init_network, system_matrix, train_standard_bls
from .sparse import SparseWeights, train_lasso_ista, train_sbls

log = logging.getLogger(__name__)

# Tags for deriving independent RNG streams from one cell seed.
_SEED_DATA = 0
_SEED_NOISE = 1
_SEED_NETWORK = 2


def derive_seed(base: int, tag: int) -> int:
    """Independent child seed for one purpose (data, noise, network)."""
    return int(np.random.SeedSequence([base, tag]).generate_state(1)[0])


def make_dataset(config: ExperimentConfig, gamma: float, seed: int) -> TimeSeriesDataset:
    """Benchmark dataset for one grid cell.

    The nonlinear benchmark uses plain uniform noise; the reactor benchmark
    additionally injects outliers, matching its harsher measurement model.
    """
    data_seed = derive_seed(seed, _SEED_DATA)
    noise_seed = derive_seed(seed, _SEED_NOISE)
    if config.benchmark == "nonlinear":
        kind = "uniform" if gamma > 0 else "none"
        spec = NoiseSpec(kind=kind, gamma=gamma, seed=noise_seed)
        return gen_nonlinear_system(
            config.n_train,
            config.n_test,
            spec,
            data_seed,
            noise_in_regressors=config.noise_in_regressors,
        )
    kind = "uniform_outliers" if gamma > 0 else "none"
    spec = NoiseSpec(kind=kind, gamma=gamma, seed=noise_seed)
    return gen_cstr_dataset(
        CstrParams(),
        config.n_train,
        config.n_test,
        spec,
        data_seed,
        noise_in_regressors=config.noise_in_regressors,
    )


@dataclass(frozen=True)
class CellModels:
    """Shared per-cell state: the network and its train/test regressors."""

    net: BlsNetwork
    A_train: np.ndarray
    A_test: np.ndarray
    dataset: TimeSeriesDataset


def build_cell(config: ExperimentConfig, gamma: float, seed: int) -> CellModels:
    """Generate the cell dataset and the (seed-derived) random network."""
    dataset = make_dataset(config, gamma, seed)
    hyper = replace(config.bls, seed=derive_seed(seed, _SEED_NETWORK))
    net = init_network(hyper, dataset.X_train.shape[1], dataset.X_train)
    return CellModels(
        net=net,
        A_train=system_matrix(net, dataset.X_train),
        A_test=system_matrix(net, dataset.X_test),
        dataset=dataset,
    )


def _train_method(
    config: ExperimentConfig, cell: CellModels, method: str
) -> tuple[np.ndarray, int, float, SparseWeights | None]:
    """Train one method on a prepared cell.

    Returns (weights, iterations, elapsed_ms, sparse_result_or_None).
    """
    A, Y = cell.A_train, cell.dataset.Y_train
    start = time.perf_counter()
    if method == "bls":
        W, iterations, sparse = train_standard_bls(A, Y, config.bls.ridge_lambda), 1, None
    elif method == "sbls":
        sparse = train_sbls(A, Y, config.stls, ridge_lambda=config.bls.ridge_lambda)
        W, iterations = sparse.W, sparse.iterations
    elif method == "lasso":
        W, iterations = train_lasso_ista(
            A, Y, config.lasso_alpha, config.lasso_max_iterations
        )
        sparse = None
    else:
        raise DomainError(f"unknown method {method!r}")
    elapsed_ms = (time.perf_counter() - start) * 1e3
    return W, iterations, elapsed_ms, sparse


def run_cell(
    config: ExperimentConfig, cell: CellModels, gamma: float, seed: int, method: str
) -> tuple[ExperimentRecord, SparseWeights | None]:
    """Train and score one grid cell; test RMSE is against noise-free targets."""
    W, iterations, elapsed_ms, sparse = _train_method(config, cell, method)
    total = cell.A_train.shape[1]
    active = active_nodes(W)
    record = ExperimentRecord(
        benchmark=config.benchmark,
        method=method,
        noise_level=gamma,
        seed=seed,
        rmse_test=rmse(cell.dataset.Y_test, cell.A_test @ W),
        rmse_train=rmse(cell.dataset.Y_train, cell.A_train @ W),
        total_nodes=total,
        active_nodes=active,
        sparsity_pct=(1.0 - active / total) * 100.0,
        train_time_ms=elapsed_ms if config.record_timing else 0.0,
        iterations=iterations,
    )
    return record, sparse


def _atomic_write(path: Path, text: str) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def _write_trace(path: Path, sparse: SparseWeights) -> None:
    n_outputs = sparse.trace.shape[1]
    header = "iteration," + ",".join(f"active_{d + 1}" for d in range(n_outputs))
    lines = [header]
    for t in range(sparse.trace.shape[0]):
        lines.append(str(t + 1) + "," + ",".join(str(c) for c in sparse.trace[t]))
    _atomic_write(path, "\n".join(lines) + "\n")


def run_grid(config: ExperimentConfig) -> list[ExperimentRecord]:
    """Run every (noise, seed, method) cell and write results under output_dir.

    A failing cell is logged and skipped; callers can detect failures by
    comparing ``len(records)`` against the full grid size. ``results.csv``
    is written once, after all cells finish.
    """
    out = Path(config.output_dir)
    traces = out / "traces"
    records: list[ExperimentRecord] = []
    for gamma in config.noise_levels:
        for seed in config.seeds:
            try:
                cell = build_cell(config, gamma, seed)
            except SblsError:
                log.exception(
                    "cell (gamma=%g, seed=%d) failed during setup", gamma, seed
                )
                continue
            for method in config.methods:
                try:
                    record, sparse = run_cell(config, cell, gamma, seed, method)
                except SblsError:
                    log.exception(
                        "cell (gamma=%g, seed=%d, method=%s) failed",
                        gamma,
                        seed,
                        method,
                    )
                    continue
                records.append(record)
                if sparse is not None:
                    traces.mkdir(parents=True, exist_ok=True)
                    _write_trace(
                        traces / f"trace_{config.benchmark}_g{gamma:g}_s{seed}.csv",
                        sparse,
                    )
    out.mkdir(parents=True, exist_ok=True)
    body = "\n".join([RESULTS_CSV_HEADER] + [r.to_csv_row() for r in records])
    _atomic_write(out / "results.csv", body + "\n")
    return records


def grid_size(config: ExperimentConfig) -> int:
    """Number of cells a full grid run should produce."""
    return len(config.noise_levels) * len(config.seeds) * len(config.methods)


def emit_tracking_trace(
    config: ExperimentConfig, gamma: float, seed: int, path
) -> Path:
    """Write the test-trajectory tracking file for one cell.

    Columns: step, ground truth, dense-baseline prediction, sparse
    prediction. The cell is retrained on demand (deterministically), so the
    file matches the corresponding grid records exactly.
    """
    cell = build_cell(config, gamma, seed)
    W_bls, *_ = _train_method(config, cell, "bls")
    W_sbls, *_ = _train_method(config, cell, "sbls")
    truth = cell.dataset.Y_test[:, 0]
    pred_bls = (cell.A_test @ W_bls)[:, 0]
    pred_sbls = (cell.A_test @ W_sbls)[:, 0]
    lines = ["step,ground_truth,bls_prediction,sbls_prediction"]
    for i in range(truth.shape[0]):
        lines.append(
            f"{i},{truth[i]:.17g},{pred_bls[i]:.17g},{pred_sbls[i]:.17g}"
        )
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    _atomic_write(path, "\n".join(lines) + "\n")
    return path


@dataclass(frozen=True)
class TimingRow:
    method: str
    median_ms: float
    iterations: int


@dataclass(frozen=True)
class TimingReport:
    rows: tuple[TimingRow, ...]
    active_trace: tuple[int, ...]
    n_samples: int
    total_nodes: int

    def format(self) -> str:
        lines = [
            f"solver timing at N={self.n_samples}, L={self.total_nodes} "
            "(median over repeated runs)",
            f"{'method':<8}{'median_ms':>12}{'iterations':>12}",
        ]
        for row in self.rows:
            lines.append(f"{row.method:<8}{row.median_ms:>12.2f}{row.iterations:>12}")
        shrink = " -> ".join(str(c) for c in self.active_trace)
        lines.append(f"sparse active-node trace: {self.total_nodes} -> {shrink}")
        return "\n".join(lines)


def timing_report(config: ExperimentConfig, repeats: int = 5) -> TimingReport:
    """Median wall-clock of each configured solver on one benchmark instance.

    All methods share the same network and regressor matrix, so the numbers
    compare output-weight training only.
    """
    if len(config.methods) < 2:
        raise DomainError("timing comparison needs at least two methods")
    if repeats < 1:
        raise DomainError(f"repeats must be >= 1, got {repeats}")
    cell = build_cell(config, config.noise_levels[0], config.seeds[0])
    rows = []
    active_trace: tuple[int, ...] = ()
    for method in config.methods:
        times = []
        iterations = 0
        for _ in range(repeats):
            _, iterations, elapsed_ms, sparse = _train_method(config, cell, method)
            times.append(elapsed_ms)
            if sparse is not None:
                active_trace = tuple(int(c) for c in sparse.trace[:, 0])
        rows.append(
            TimingRow(
                method=method,
                median_ms=float(np.median(times)),
                iterations=iterations,
            )
        )
    return TimingReport(
        rows=tuple(rows),
        active_trace=active_trace,
        n_samples=cell.A_train.shape[0],
        total_nodes=cell.A_train.shape[1],
    )
