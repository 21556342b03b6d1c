"""Campaign orchestration, statistics and report files."""

from .analysis import (
    AlgorithmSummary,
    RepeatabilityReport,
    SpeedupReport,
    SubsetGroup,
    TTestResult,
    compute_speedup,
    feature_repeatability,
    least_cardinal_best,
    paired_t_test,
    regularized_incomplete_beta,
    repeatability_report,
    subset_repeatability,
    summarize,
)
from .experiment import derive_run_seed, plan_runs, prepare_split, run_experiment, run_single, speedup
from .reports import emit_reports, load_results, write_report_tables, write_speedup_reports

__all__ = [
    "AlgorithmSummary",
    "RepeatabilityReport",
    "SpeedupReport",
    "SubsetGroup",
    "TTestResult",
    "compute_speedup",
    "feature_repeatability",
    "least_cardinal_best",
    "paired_t_test",
    "regularized_incomplete_beta",
    "repeatability_report",
    "subset_repeatability",
    "summarize",
    "derive_run_seed",
    "plan_runs",
    "prepare_split",
    "run_experiment",
    "run_single",
    "speedup",
    "emit_reports",
    "load_results",
    "write_report_tables",
    "write_speedup_reports",
]
