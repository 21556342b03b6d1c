"""Wrapper search: classifier fitness, population, operators and drivers."""

from .classifier import (
    ConfusionMatrix,
    FitnessEvaluator,
    FitnessScore,
    LogisticModel,
    auc_score,
    evaluate_confusion,
    evaluate_fitness,
    predict_probability,
    train_logistic,
)
from .engine import (
    RunResult,
    SearchEngine,
    evaluate_population_concurrent,
    partition_islands,
    run_pbde,
    run_pbdeta,
    run_pbtade,
    run_search,
)
from .operators import (
    ThresholdState,
    de_crossover,
    de_mutate,
    elitist_replacement,
    ta_accept,
    ta_neighbor,
    threshold_update,
)
from .population import (
    FeatureMask,
    Individual,
    Population,
    RandomStream,
    best_of,
    init_population,
    sync_selected_ids,
)

__all__ = [
    "ConfusionMatrix",
    "FitnessEvaluator",
    "FitnessScore",
    "LogisticModel",
    "auc_score",
    "evaluate_confusion",
    "evaluate_fitness",
    "predict_probability",
    "train_logistic",
    "RunResult",
    "SearchEngine",
    "evaluate_population_concurrent",
    "partition_islands",
    "run_pbde",
    "run_pbdeta",
    "run_pbtade",
    "run_search",
    "ThresholdState",
    "de_crossover",
    "de_mutate",
    "elitist_replacement",
    "ta_accept",
    "ta_neighbor",
    "threshold_update",
    "FeatureMask",
    "Individual",
    "Population",
    "RandomStream",
    "best_of",
    "init_population",
    "sync_selected_ids",
]
