"""Configuration classes for evofss searches and experiment campaigns."""

import importlib.util
import json
from dataclasses import dataclass, field, fields, replace
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from .errors import ConfigError


class Algorithm(str, Enum):
    """The three search drivers."""

    PBDE = "pbde"
    PBDETA = "pbdeta"
    PBTADE = "pbtade"

    @classmethod
    def parse(cls, value: Union[str, "Algorithm"]) -> "Algorithm":
        if isinstance(value, Algorithm):
            return value
        try:
            return cls(str(value).strip().lower().replace("-", ""))
        except ValueError:
            choices = ", ".join(a.value for a in cls)
            raise ConfigError(f"Unknown algorithm '{value}' (expected one of: {choices})")

    @property
    def label(self) -> str:
        return {"pbde": "P-BDE", "pbdeta": "PB-DETA", "pbtade": "PB-TADE"}[self.value]


@dataclass(frozen=True)
class DEParams:
    """Binary differential evolution parameters."""
    mf: float = 0.8
    cr: float = 0.9


@dataclass(frozen=True)
class TAParams:
    """Threshold accepting parameters."""
    tmf: int = 1
    t0: float = 0.05
    cool: float = 0.95
    neighbors_per_iter: int = 1


@dataclass(frozen=True)
class EngineConfig:
    """Configuration of a single search run."""

    algorithm: Algorithm = Algorithm.PBDE
    de: DEParams = field(default_factory=DEParams)
    ta: TAParams = field(default_factory=TAParams)

    # Population
    n: int = 10
    bias: float = 0.99

    # Iteration budget
    max_iter1: int = 10
    max_iter2: int = 10
    patience: Optional[int] = None

    # Parallelism
    islands: int = 1
    parallelism: int = 1
    lane_backend: str = "thread"  # thread | process

    # Seeding
    master_seed: int = 0
    run_index: int = 0

    def __post_init__(self):
        object.__setattr__(self, "algorithm", Algorithm.parse(self.algorithm))

    def evaluation_budget(self) -> int:
        """Fitness evaluations a full run performs (no early stop)."""
        if self.algorithm is Algorithm.PBDE:
            return self.n * (1 + self.max_iter1)
        per_outer = 1 + self.max_iter2 * self.ta.neighbors_per_iter
        return self.n * (1 + self.max_iter1 * per_outer)

    def with_algorithm(self, algorithm: Union[str, Algorithm]) -> "EngineConfig":
        return replace(self, algorithm=Algorithm.parse(algorithm))


@dataclass
class ClusterConfig:
    """Where campaign runs execute: inline, local subprocesses, or SLURM."""

    backend: str = "inline"  # inline | local | slurm
    job_name: str = "evofss"

    # SLURM configuration
    partition: str = "cpu"
    account: Optional[str] = None
    qos: Optional[str] = None
    walltime: str = "01:00:00"  # HH:MM:SS
    cpus_per_task: int = 4

    log_dir: Path = field(default_factory=lambda: Path("logs/evofss"))
    setup_commands: List[str] = field(default_factory=list)
    env_vars: Dict[str, str] = field(default_factory=dict)

    # SSH configuration (for remote submission)
    login_node: Optional[str] = None

    def __post_init__(self):
        self.log_dir = Path(self.log_dir)
        if self.account is None:
            self.account = self.partition
        if self.qos is None:
            self.qos = self.partition

    def get_walltime_minutes(self) -> int:
        """Convert walltime string to minutes."""
        h, m, s = map(int, self.walltime.split(":"))
        return h * 60 + m + s // 60

    def get_export_string(self) -> str:
        """Get environment variables as SLURM export string."""
        exports = ["ALL"]
        for key, value in self.env_vars.items():
            exports.append(f"{key}={value}")
        return ",".join(exports)


@dataclass
class ExperimentConfig:
    """A multi-run campaign comparing one or more algorithms on one dataset."""

    data_path: Path = field(default_factory=lambda: Path("data.csv"))
    data_format: str = "csv"  # csv | libsvm
    label_column: str = "label"
    header: bool = True
    nfeat_hint: Optional[int] = None

    split_ratio: float = 0.8
    split_seed: int = 0

    runs: int = 20
    algorithms: List[Algorithm] = field(
        default_factory=lambda: [Algorithm.PBDE, Algorithm.PBDETA, Algorithm.PBTADE]
    )
    ttest: bool = True
    output_dir: Path = field(default_factory=lambda: Path("results"))
    tracker: str = "none"  # local | none

    engine: EngineConfig = field(default_factory=EngineConfig)
    cluster: ClusterConfig = field(default_factory=ClusterConfig)

    def __post_init__(self):
        self.data_path = Path(self.data_path)
        self.output_dir = Path(self.output_dir)
        self.algorithms = [Algorithm.parse(a) for a in self.algorithms]


def validate_engine_config(cfg: EngineConfig) -> List[str]:
    """
    Validate an EngineConfig.

    Returns:
        List of validation error messages (empty when valid)
    """
    errors = []

    if cfg.n < 4:
        errors.append("n must be >= 4 (DE needs three distinct partners per target)")
    if not 0.0 <= cfg.bias < 1.0:
        errors.append("bias must be in [0, 1)")
    if cfg.max_iter1 < 0:
        errors.append("max_iter1 must be >= 0")
    if cfg.max_iter2 < 0:
        errors.append("max_iter2 must be >= 0")
    if cfg.patience is not None and cfg.patience < 1:
        errors.append("patience must be >= 1 when set")
    if cfg.islands < 1:
        errors.append("islands must be >= 1")
    elif cfg.islands > cfg.n:
        errors.append("islands must be <= n")
    if cfg.parallelism < 1:
        errors.append("parallelism must be >= 1")
    if cfg.lane_backend not in ("thread", "process"):
        errors.append("lane_backend must be 'thread' or 'process'")
    if cfg.run_index < 0 or cfg.master_seed < 0:
        errors.append("master_seed and run_index must be >= 0")

    if cfg.de.mf <= 0:
        errors.append("mf must be > 0")
    if not 0.0 <= cfg.de.cr <= 1.0:
        errors.append("cr must be in [0, 1]")

    if cfg.ta.tmf < 1:
        errors.append("tmf must be >= 1")
    if cfg.ta.t0 <= 0:
        errors.append("t0 must be > 0")
    if not 0.0 < cfg.ta.cool < 1.0:
        errors.append("cool must be in (0, 1)")
    if cfg.ta.neighbors_per_iter < 1:
        errors.append("neighbors_per_iter must be >= 1")

    return errors


def validate_cluster_config(cfg: ClusterConfig) -> List[str]:
    errors = []
    if cfg.backend not in ("inline", "local", "slurm"):
        errors.append("cluster backend must be one of: inline, local, slurm")
    if cfg.cpus_per_task < 1:
        errors.append("cpus_per_task must be >= 1")
    try:
        parts = cfg.walltime.split(":")
        if len(parts) != 3:
            raise ValueError("Invalid format")
        hours, minutes, seconds = map(int, parts)
        if not (0 <= hours <= 999 and 0 <= minutes <= 59 and 0 <= seconds <= 59):
            raise ValueError("Invalid time values")
    except ValueError:
        errors.append("walltime must be in format HH:MM:SS (e.g., '02:30:00')")
    return errors


def validate_experiment_config(cfg: ExperimentConfig) -> List[str]:
    """Validate an ExperimentConfig, including its engine and cluster sections."""
    errors = validate_engine_config(cfg.engine) + validate_cluster_config(cfg.cluster)

    if cfg.data_format not in ("csv", "libsvm"):
        errors.append("data_format must be 'csv' or 'libsvm'")
    if not 0.0 < cfg.split_ratio < 1.0:
        errors.append("split_ratio must be in (0, 1)")
    if cfg.runs < 1:
        errors.append("runs must be >= 1")
    elif cfg.ttest and cfg.runs < 2:
        errors.append("runs < 2: paired t-tests need at least two runs")
    if not cfg.algorithms:
        errors.append("at least one algorithm is required")
    if len(set(cfg.algorithms)) != len(cfg.algorithms):
        errors.append("algorithms must not repeat")
    if cfg.tracker not in ("local", "none"):
        errors.append("tracker must be 'local' or 'none'")

    return errors


# Published per-dataset hyperparameters: (MF, CR) for P-BDE, (MF, CR, TMF) for the hybrids.
BENCHMARK_PRESETS: Dict[str, Dict[Algorithm, Tuple[float, float, int]]] = {
    "epsilon": {
        Algorithm.PBDE: (0.8, 0.9, 1),
        Algorithm.PBDETA: (0.8, 0.8, 1),
        Algorithm.PBTADE: (0.8, 0.8, 1),
    },
    "microsoft_malware": {
        Algorithm.PBDE: (0.8, 0.9, 1),
        Algorithm.PBDETA: (0.8, 0.9, 1),
        Algorithm.PBTADE: (0.8, 0.9, 1),
    },
    "ieee_malware": {
        Algorithm.PBDE: (0.8, 0.9, 1),
        Algorithm.PBDETA: (0.8, 0.9, 1),
        Algorithm.PBTADE: (0.8, 0.9, 1),
    },
    "ovm_omentum": {
        Algorithm.PBDE: (0.75, 0.9, 1),
        Algorithm.PBDETA: (0.75, 0.9, 1),
        Algorithm.PBTADE: (0.8, 0.9, 1),
    },
    "ovm_uterus": {
        Algorithm.PBDE: (0.85, 0.9, 1),
        Algorithm.PBDETA: (0.85, 0.9, 1),
        Algorithm.PBTADE: (0.75, 0.9, 1),
    },
}


def benchmark_preset(dataset: str, algorithm: Union[str, Algorithm]) -> Tuple[DEParams, TAParams]:
    """Return the published DE/TA parameters for a benchmark dataset."""
    key = dataset.strip().lower().replace(" ", "_").replace("-", "_")
    if key not in BENCHMARK_PRESETS:
        raise ConfigError(f"No preset for dataset '{dataset}' (known: {', '.join(BENCHMARK_PRESETS)})")
    mf, cr, tmf = BENCHMARK_PRESETS[key][Algorithm.parse(algorithm)]
    return DEParams(mf=mf, cr=cr), TAParams(tmf=tmf)


_DE_KEYS = {f.name for f in fields(DEParams)}
_TA_KEYS = {f.name for f in fields(TAParams)}
_ENGINE_KEYS = {f.name for f in fields(EngineConfig)} - {"de", "ta", "algorithm", "run_index"}
_CLUSTER_KEYS = {f"cluster_{f.name}" for f in fields(ClusterConfig)}
_EXPERIMENT_KEYS = {f.name for f in fields(ExperimentConfig)} - {"engine", "cluster"}


def experiment_config_from_dict(data: Dict[str, Any]) -> ExperimentConfig:
    """
    Build an ExperimentConfig from a flat mapping.

    Engine and DE/TA parameters use their own names (``n``, ``mf``, ``t0``, ...);
    cluster settings are prefixed with ``cluster_``.

    Raises:
        ConfigError: On unknown keys or values of the wrong shape
    """
    known = _DE_KEYS | _TA_KEYS | _ENGINE_KEYS | _CLUSTER_KEYS | _EXPERIMENT_KEYS
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"Unknown config keys: {', '.join(unknown)}")

    try:
        de = DEParams(**{k: data[k] for k in _DE_KEYS if k in data})
        ta = TAParams(**{k: data[k] for k in _TA_KEYS if k in data})
        engine = EngineConfig(de=de, ta=ta, **{k: data[k] for k in _ENGINE_KEYS if k in data})
        cluster = ClusterConfig(
            **{k[len("cluster_"):]: data[k] for k in _CLUSTER_KEYS if k in data}
        )
        experiment_kwargs = {k: data[k] for k in _EXPERIMENT_KEYS if k in data}
        return ExperimentConfig(engine=engine, cluster=cluster, **experiment_kwargs)
    except TypeError as e:
        raise ConfigError(f"Malformed config: {e}")


def load_experiment_config(config_path: Union[str, Path]) -> ExperimentConfig:
    """
    Load an ExperimentConfig from a Python or flat JSON file.

    Python files must define a module-level ``config`` variable holding an
    ExperimentConfig.

    Raises:
        FileNotFoundError: If the config file doesn't exist
        ConfigError: If the file cannot be interpreted as an ExperimentConfig
    """
    config_file = Path(config_path)

    if not config_file.exists():
        raise FileNotFoundError(f"Config file not found: {config_path}")

    if config_file.suffix == ".json":
        try:
            data = json.loads(config_file.read_text(encoding="utf-8"))
        except json.JSONDecodeError as e:
            raise ConfigError(f"Config file is not valid JSON: {e}")
        if not isinstance(data, dict):
            raise ConfigError("JSON config must be a single flat object")
        nested = [k for k, v in data.items() if isinstance(v, dict)]
        if nested:
            raise ConfigError(f"JSON config must be flat; nested keys: {', '.join(sorted(nested))}")
        return experiment_config_from_dict(data)

    spec = importlib.util.spec_from_file_location("evofss_config_module", config_file)
    if spec is None or spec.loader is None:
        raise ConfigError(f"Could not load config file: {config_path}")

    config_module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(config_module)

    if not hasattr(config_module, "config"):
        raise ConfigError(
            "Config file must contain a 'config' variable with an ExperimentConfig object. "
            "Example:\n\nfrom evofss import ExperimentConfig\nconfig = ExperimentConfig(...)\n"
        )

    config = config_module.config
    if not isinstance(config, ExperimentConfig):
        raise ConfigError(
            f"'config' variable must be an ExperimentConfig object, got {type(config)}"
        )
    return config
