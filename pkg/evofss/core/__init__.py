"""Core evofss functionality: configuration, errors and executors."""

from .config import (
    Algorithm,
    ClusterConfig,
    DEParams,
    EngineConfig,
    ExperimentConfig,
    TAParams,
    benchmark_preset,
    load_experiment_config,
    validate_engine_config,
    validate_experiment_config,
)
from .errors import ConfigError, DataError, EvofssError, FitnessError, ScheduleError
from .executor import CampaignExecutor, EvaluationLanes, SSHSlurmExecutor

__all__ = [
    "Algorithm",
    "ClusterConfig",
    "DEParams",
    "EngineConfig",
    "ExperimentConfig",
    "TAParams",
    "benchmark_preset",
    "load_experiment_config",
    "validate_engine_config",
    "validate_experiment_config",
    "ConfigError",
    "DataError",
    "EvofssError",
    "FitnessError",
    "ScheduleError",
    "CampaignExecutor",
    "EvaluationLanes",
    "SSHSlurmExecutor",
]
