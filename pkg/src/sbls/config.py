"""Experiment configuration: defaults for both benchmarks plus a file parser.

Config files are flat UTF-8 ``key = value`` text; ``#`` starts a comment.
List values are comma separated. Keys mirror the dataclass fields, with
network and sparse-training options namespaced as ``bls.*`` / ``stls.*``.
An empty file yields the default grid of the chosen benchmark (nonlinear
unless stated otherwise).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path

from .errors import ConfigError, DomainError
from .network import BlsHyperparams
from .sparse import StlsConfig

BENCHMARKS = ("nonlinear", "cstr")
METHODS = ("bls", "sbls", "lasso")


@dataclass(frozen=True)
class ExperimentConfig:
    """Full description of one experiment grid."""

    benchmark: str
    bls: BlsHyperparams
    stls: StlsConfig
    noise_levels: tuple[float, ...]
    methods: tuple[str, ...] = ("bls", "sbls")
    seeds: tuple[int, ...] = tuple(range(10))
    output_dir: Path = Path("results")
    n_train: int = 2000
    n_test: int = 500
    noise_in_regressors: bool = False
    record_timing: bool = False
    lasso_alpha: float = 0.01
    lasso_max_iterations: int = 2000

    def __post_init__(self):
        if self.benchmark not in BENCHMARKS:
            raise DomainError(
                f"benchmark must be one of {BENCHMARKS}, got {self.benchmark!r}"
            )
        if not self.noise_levels:
            raise DomainError("noise_levels must be nonempty")
        if any(g < 0 for g in self.noise_levels):
            raise DomainError(f"noise levels must be >= 0, got {self.noise_levels}")
        if not self.methods:
            raise DomainError("methods must be nonempty")
        for m in self.methods:
            if m not in METHODS:
                raise DomainError(f"unknown method {m!r}, expected subset of {METHODS}")
        if not self.seeds:
            raise DomainError("seeds must be nonempty")
        if self.n_train < 10 or self.n_test < 10:
            raise DomainError("n_train and n_test must be >= 10")
        if self.lasso_alpha < 0:
            raise DomainError(f"lasso_alpha must be >= 0, got {self.lasso_alpha}")
        if self.lasso_max_iterations < 1:
            raise DomainError("lasso_max_iterations must be >= 1")


def default_config(benchmark: str = "nonlinear") -> ExperimentConfig:
    """Default grid for a benchmark (node counts, ridge, pruning target, noise).

    The nonlinear benchmark keeps its 300 feature nodes and trims the
    enhancement group to reach 401 total nodes; its noise enters the measured
    output sequence (so the lagged regressors see it too). The reactor uses
    201 total nodes and target-only noise with outliers.
    """
    if benchmark == "nonlinear":
        return ExperimentConfig(
            benchmark="nonlinear",
            bls=BlsHyperparams(n=10, k=30, m=1, q=100, ridge_lambda=0.01),
            stls=StlsConfig(sparsity_target=0.5, max_iterations=10),
            noise_levels=(0.1, 0.2, 0.3, 0.4),
            noise_in_regressors=True,
        )
    if benchmark == "cstr":
        return ExperimentConfig(
            benchmark="cstr",
            bls=BlsHyperparams(n=10, k=10, m=1, q=100, ridge_lambda=1e-8),
            stls=StlsConfig(sparsity_target=0.7, max_iterations=10),
            noise_levels=(0.2, 0.3, 0.4),
            noise_in_regressors=False,
        )
    raise ConfigError(f"benchmark: unknown value {benchmark!r}")


def _parse_bool(key: str, raw: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in ("true", "yes", "1"):
        return True
    if lowered in ("false", "no", "0"):
        return False
    raise ConfigError(f"{key}: expected a boolean, got {raw!r}")


def _parse_int(key: str, raw: str) -> int:
    try:
        return int(raw.strip())
    except ValueError as exc:
        raise ConfigError(f"{key}: expected an integer, got {raw!r}") from exc


def _parse_float(key: str, raw: str) -> float:
    try:
        return float(raw.strip())
    except ValueError as exc:
        raise ConfigError(f"{key}: expected a number, got {raw!r}") from exc


def _parse_list(key: str, raw: str, convert) -> tuple:
    items = [item.strip() for item in raw.split(",") if item.strip()]
    if not items:
        raise ConfigError(f"{key}: expected a nonempty comma-separated list")
    return tuple(convert(key, item) for item in items)


def _read_pairs(text: str) -> dict[str, str]:
    pairs: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, value = stripped.split("=", 1)
        key = key.strip()
        if key in pairs:
            raise ConfigError(f"{key}: duplicate key (line {lineno})")
        pairs[key] = value.strip()
    return pairs


def config_from_pairs(pairs: dict[str, str]) -> ExperimentConfig:
    """Build a config from raw key/value strings, validating every entry."""
    pairs = dict(pairs)
    benchmark = pairs.pop("benchmark", "nonlinear")
    if benchmark not in BENCHMARKS:
        raise ConfigError(f"benchmark: must be one of {BENCHMARKS}, got {benchmark!r}")
    config = default_config(benchmark)
    bls = config.bls
    stls_threshold = config.stls.threshold
    stls_target = config.stls.sparsity_target
    stls_iters = config.stls.max_iterations
    stls_strict = config.stls.strict_rank
    updates: dict = {}

    for key, raw in pairs.items():
        try:
            if key == "noise_levels":
                updates["noise_levels"] = _parse_list(key, raw, _parse_float)
            elif key == "methods":
                updates["methods"] = _parse_list(key, raw, lambda _, s: s)
            elif key == "seeds":
                updates["seeds"] = _parse_list(key, raw, _parse_int)
            elif key == "output_dir":
                updates["output_dir"] = Path(raw)
            elif key == "n_train":
                updates["n_train"] = _parse_int(key, raw)
            elif key == "n_test":
                updates["n_test"] = _parse_int(key, raw)
            elif key == "noise_in_regressors":
                updates["noise_in_regressors"] = _parse_bool(key, raw)
            elif key == "record_timing":
                updates["record_timing"] = _parse_bool(key, raw)
            elif key == "lasso.alpha":
                updates["lasso_alpha"] = _parse_float(key, raw)
            elif key == "lasso.max_iterations":
                updates["lasso_max_iterations"] = _parse_int(key, raw)
            elif key in ("bls.n", "bls.k", "bls.m", "bls.q"):
                bls = replace(bls, **{key.split(".", 1)[1]: _parse_int(key, raw)})
            elif key == "bls.ridge_lambda":
                bls = replace(bls, ridge_lambda=_parse_float(key, raw))
            elif key == "bls.feature_activation":
                bls = replace(bls, feature_activation=raw)
            elif key == "bls.enhancement_activation":
                bls = replace(bls, enhancement_activation=raw)
            elif key == "bls.include_bias":
                bls = replace(bls, include_bias=_parse_bool(key, raw))
            elif key == "stls.threshold":
                stls_threshold = _parse_float(key, raw)
                stls_target = None
            elif key == "stls.sparsity_target":
                stls_target = _parse_float(key, raw)
            elif key == "stls.max_iterations":
                stls_iters = _parse_int(key, raw)
            elif key == "stls.strict_rank":
                stls_strict = _parse_bool(key, raw)
            else:
                raise ConfigError(f"{key}: unknown config key")
        except DomainError as exc:
            raise ConfigError(f"{key}: {exc}") from exc

    if "stls.threshold" in pairs and "stls.sparsity_target" in pairs:
        raise ConfigError(
            "stls.threshold: cannot be combined with stls.sparsity_target"
        )
    try:
        stls = StlsConfig(
            threshold=stls_threshold,
            sparsity_target=stls_target,
            max_iterations=stls_iters,
            strict_rank=stls_strict,
        )
        return replace(config, bls=bls, stls=stls, **updates)
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc


def parse_config(path) -> ExperimentConfig:
    """Parse a config file; an empty file yields the nonlinear defaults."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    return config_from_pairs(_read_pairs(text))
