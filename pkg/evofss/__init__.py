"""
evofss - Parallel evolutionary wrapper feature subset selection

Binary differential evolution and threshold accepting hybrids that search for
small feature subsets maximizing a logistic-regression AUC, with seeded
concurrent fitness evaluation and campaign reporting.
"""

from .core import (
    Algorithm,
    ClusterConfig,
    ConfigError,
    DataError,
    DEParams,
    EngineConfig,
    EvofssError,
    ExperimentConfig,
    FitnessError,
    ScheduleError,
    TAParams,
    benchmark_preset,
    load_experiment_config,
)
from .data import load_dataset, make_planted_dataset, stratified_split
from .harness import emit_reports, paired_t_test, run_experiment, speedup
from .search import RunResult, run_pbde, run_pbdeta, run_pbtade, run_search

__version__ = "0.1.0"
__all__ = [
    "Algorithm",
    "ClusterConfig",
    "ConfigError",
    "DataError",
    "DEParams",
    "EngineConfig",
    "EvofssError",
    "ExperimentConfig",
    "FitnessError",
    "ScheduleError",
    "TAParams",
    "benchmark_preset",
    "load_experiment_config",
    "load_dataset",
    "make_planted_dataset",
    "stratified_split",
    "emit_reports",
    "paired_t_test",
    "run_experiment",
    "speedup",
    "RunResult",
    "run_pbde",
    "run_pbdeta",
    "run_pbtade",
    "run_search",
]
