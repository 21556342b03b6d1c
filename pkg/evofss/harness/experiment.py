"""Multi-run campaigns over one shared stratified split, and speedup measurement."""

import hashlib
import logging
import time
from dataclasses import replace
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

from ..core.config import (
    Algorithm,
    EngineConfig,
    ExperimentConfig,
    validate_experiment_config,
)
from ..core.errors import ConfigError, ScheduleError
from ..core.executor import CampaignExecutor
from ..data.ingest import SplitPair, load_dataset, stratified_split
from ..search.engine import RunResult, run_search
from ..tracking.tracking import create_tracker
from .analysis import SpeedupReport, compute_speedup
from .reports import emit_reports

logger = logging.getLogger(__name__)

# Derived seeds stay below 2**63 so they fit every integer seed API.
_SEED_MASK = (1 << 63) - 1


def derive_run_seed(master_seed: int, run_index: int) -> int:
    """``master_seed`` XOR a stable 64-bit hash of the run index."""
    digest = hashlib.blake2b(f"run:{run_index}".encode(), digest_size=8).digest()
    return (master_seed ^ int.from_bytes(digest, "big")) & _SEED_MASK


def prepare_split(cfg: ExperimentConfig) -> SplitPair:
    """Load the campaign dataset and split it once for every run and algorithm."""
    dataset = load_dataset(
        cfg.data_path,
        data_format=cfg.data_format,
        label_column=cfg.label_column,
        header=cfg.header,
        nfeat_hint=cfg.nfeat_hint,
    )
    logger.info(
        "Loaded %s: %d rows, %d encoded features, classes %s",
        cfg.data_path, dataset.nrows, dataset.nfeat, dataset.class_counts(),
    )
    return stratified_split(dataset, cfg.split_ratio, cfg.split_seed)


def plan_runs(cfg: ExperimentConfig) -> List[EngineConfig]:
    """One EngineConfig per (algorithm, run index); run ``r`` shares its seed across algorithms."""
    plans = []
    for algorithm in cfg.algorithms:
        for run_index in range(cfg.runs):
            plans.append(
                replace(
                    cfg.engine,
                    algorithm=algorithm,
                    master_seed=derive_run_seed(cfg.engine.master_seed, run_index),
                    run_index=run_index,
                )
            )
    return plans


def run_single(
    engine_cfg: EngineConfig,
    split: SplitPair,
    tracker_kind: str = "none",
    tracker_dir: Optional[Path] = None,
) -> RunResult:
    """Execute one planned run; top-level so submitit can pickle it."""
    kwargs = {"log_dir": tracker_dir} if tracker_kind == "local" and tracker_dir else {}
    tracker = create_tracker(tracker_kind, **kwargs)
    tracker.init_run(
        f"{engine_cfg.algorithm.value}_run{engine_cfg.run_index}",
        {"algorithm": engine_cfg.algorithm.value, "master_seed": engine_cfg.master_seed},
    )
    try:
        result = run_search(engine_cfg, split, tracker=tracker)
    except Exception:
        tracker.finish_run(status="failed")
        raise
    tracker.finish_run()
    return result


def run_experiment(
    cfg: ExperimentConfig,
    split: Optional[SplitPair] = None,
    executor: Optional[CampaignExecutor] = None,
    persist: bool = True,
) -> Dict[Algorithm, List[RunResult]]:
    """
    Run ``cfg.runs`` seeded runs of every configured algorithm.

    All runs share one stratified split so per-run results pair up across
    algorithms. Reports are written to ``cfg.output_dir`` when ``persist``.

    Raises:
        ConfigError: If the configuration is invalid
        DataError: If the dataset cannot be loaded or split
        FitnessError: If a run fails during fitness evaluation
    """
    errors = validate_experiment_config(cfg)
    if errors:
        raise ConfigError("; ".join(errors))

    split = split if split is not None else prepare_split(cfg)
    executor = executor if executor is not None else CampaignExecutor(cfg.cluster)
    tracker_dir = cfg.output_dir / "tracking" if cfg.tracker == "local" else None

    plans = plan_runs(cfg)
    logger.info(
        "Campaign: %d algorithm(s) x %d runs on the %s backend",
        len(cfg.algorithms), cfg.runs, cfg.cluster.backend,
    )
    outputs = executor.map_runs(run_single, [(p, split, cfg.tracker, tracker_dir) for p in plans])

    results: Dict[Algorithm, List[RunResult]] = {alg: [] for alg in cfg.algorithms}
    for plan, result in zip(plans, outputs):
        results[plan.algorithm].append(result)

    if persist:
        emit_reports(results, split.train.feature_names, cfg.output_dir, ttest=cfg.ttest)
    return results


def speedup(
    cfg: ExperimentConfig,
    split: Optional[SplitPair] = None,
    clock: Callable[[], float] = time.perf_counter,
) -> Dict[Algorithm, SpeedupReport]:
    """
    Time run 0 of each algorithm sequentially and with ``cfg.engine.parallelism`` lanes.

    Both timings use the same seed; the two results must agree.

    Raises:
        ConfigError: If the configuration is invalid
        ScheduleError: If the sequential and parallel runs disagree
    """
    errors = validate_experiment_config(replace(cfg, ttest=False))
    if errors:
        raise ConfigError("; ".join(errors))
    if cfg.engine.parallelism == 1:
        logger.warning("parallelism is 1; sequential and parallel timings measure the same thing")

    split = split if split is not None else prepare_split(cfg)
    reports: Dict[Algorithm, SpeedupReport] = {}
    for algorithm in cfg.algorithms:
        parallel_cfg = replace(
            cfg.engine,
            algorithm=algorithm,
            master_seed=derive_run_seed(cfg.engine.master_seed, 0),
            run_index=0,
        )
        sequential_cfg = replace(parallel_cfg, parallelism=1)

        started = clock()
        sequential = run_search(sequential_cfg, split)
        switched = clock()
        parallel = run_search(parallel_cfg, split)
        finished = clock()

        if _outcome(sequential) != _outcome(parallel):
            raise ScheduleError(
                f"{algorithm.label}: run 0 differs between 1 and {cfg.engine.parallelism} lanes"
            )
        reports[algorithm] = compute_speedup(switched - started, finished - switched)
        logger.info(
            "%s speedup %.2f (%.2fs sequential, %.2fs with %d lanes)",
            algorithm.label, reports[algorithm].speedup, switched - started,
            finished - switched, cfg.engine.parallelism,
        )
    return reports


def _outcome(result: RunResult) -> Tuple[bytes, Tuple[float, ...]]:
    return result.best.mask.key(), tuple(result.train_best_trace)
