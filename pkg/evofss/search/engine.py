"""P-BDE, PB-DETA and PB-TADE search drivers with island partitioning."""

import logging
import time
from dataclasses import dataclass, replace
from typing import Callable, Dict, List, Optional, Sequence

from ..core.config import Algorithm, EngineConfig, validate_engine_config
from ..core.errors import ConfigError, FitnessError
from ..core.executor import EvaluationLanes
from ..data.ingest import Dataset, SplitPair
from ..tracking.tracking import ExperimentTracker
from .classifier import FitnessEvaluator, FitnessScore
from .operators import (
    ThresholdState,
    de_crossover,
    de_mutate,
    draw_partners,
    elitist_replacement,
    ta_accept,
    ta_neighbor,
    threshold_update,
)
from .population import (
    Individual,
    Population,
    RandomStream,
    StreamPurpose,
    best_of,
    init_population,
    ranking_key,
    sync_selected_ids,
)

logger = logging.getLogger(__name__)

MIN_DE_ISLAND = 4


@dataclass
class RunResult:
    """Outcome of one search run."""
    algorithm: Algorithm
    run_index: int
    final_population: Population
    best: Individual
    archive_best: Individual
    train_best_trace: List[float]
    evaluations: int
    wall_time: float
    iterations: int


def _score_members(
    members: Sequence[Individual], lanes: EvaluationLanes, field: str = "auc"
) -> List[Individual]:
    """Score every member whose ``field`` is unset; others pass through."""
    pending = [i for i, m in enumerate(members) if getattr(m, field) is None]
    futures = lanes.submit_all([members[i].mask.bits for i in pending])

    scored = list(members)
    for i, future in zip(pending, futures):
        member = members[i]
        try:
            score: FitnessScore = future.result()
        except FitnessError:
            raise
        except Exception as e:
            raise FitnessError(
                f"fitness evaluation failed for member {member.id}: {e}", member_id=member.id
            ) from e
        scored[i] = replace(member, **{field: score})
    return scored


def evaluate_population_concurrent(
    pop: Population,
    train: Dataset,
    cfg: EngineConfig,
    lanes: Optional[EvaluationLanes] = None,
) -> Population:
    """
    Score every unevaluated member on the training data.

    Up to ``cfg.parallelism`` evaluations run at once; results do not depend
    on the number of lanes. Exactly one fitness call is made per unevaluated
    member. The run-level evaluation counter lives on SearchEngine, which
    adds that number before each scoring pass.
    """
    if lanes is not None:
        return Population(_score_members(pop.members, lanes), dict(pop.island_of))
    with EvaluationLanes(FitnessEvaluator(train), cfg.parallelism, cfg.lane_backend) as own:
        return Population(_score_members(pop.members, own), dict(pop.island_of))


def partition_islands(pop: Population, k: int) -> Population:
    """
    Assign members to ``k`` islands round-robin by member id.

    Raises:
        ValueError: If k is outside [1, population size]
    """
    if not 1 <= k <= pop.size:
        raise ValueError(f"islands must be between 1 and {pop.size}, got {k}")
    ordered = sorted(m.id for m in pop.members)
    island_of = {member_id: position % k for position, member_id in enumerate(ordered)}
    return Population(list(pop.members), island_of)


class SearchEngine:
    """Runs one configured search over a train/test split."""

    def __init__(
        self,
        cfg: EngineConfig,
        split: SplitPair,
        evaluator: Optional[Callable[[object], FitnessScore]] = None,
        tracker: Optional[ExperimentTracker] = None,
    ):
        errors = validate_engine_config(cfg)
        if errors:
            raise ConfigError("; ".join(errors))
        self.cfg = cfg
        self.split = split
        self.names = split.train.feature_names
        self.stream = RandomStream(cfg.master_seed, cfg.run_index)
        self.evaluator = evaluator or FitnessEvaluator(split.train)
        self.tracker = tracker

        self.evaluations = 0
        self.archive: Optional[Individual] = None
        self._next_id = cfg.n
        self._cursors: Dict[int, int] = {}

    def _new_id(self) -> int:
        new_id = self._next_id
        self._next_id += 1
        return new_id

    def _score(self, members: Sequence[Individual], lanes: EvaluationLanes) -> List[Individual]:
        self.evaluations += sum(1 for m in members if m.auc is None)
        return _score_members(members, lanes)

    def _update_archive(self, members: Sequence[Individual]) -> None:
        candidate = best_of(members)
        if self.archive is None or ranking_key(candidate) < ranking_key(self.archive):
            self.archive = candidate

    def _de_generation(self, pop: Population, iteration: int, lanes: EvaluationLanes) -> Population:
        children: Dict[int, List[Individual]] = {}
        for island in pop.islands():
            members = pop.island_members(island)
            pool = members if len(members) >= MIN_DE_ISLAND else pop.members
            island_children = []
            for target in members:
                rng = self.stream.generator(StreamPurpose.DE, iteration, target.id)
                r1, r2, r3 = draw_partners(target, pool, rng)
                mutant = de_mutate(r1.mask, r2.mask, r3.mask, self.cfg.de.mf)
                trial = de_crossover(target.mask, mutant, self.cfg.de.cr, rng)
                island_children.append(
                    sync_selected_ids(Individual(self._new_id(), trial), self.names)
                )
            children[island] = island_children

        flat = [c for island in pop.islands() for c in children[island]]
        scored = iter(self._score(flat, lanes))

        survivors: List[Individual] = []
        island_of: Dict[int, int] = {}
        for island in pop.islands():
            parents = pop.island_members(island)
            island_children = [next(scored) for _ in children[island]]
            for member in elitist_replacement(parents, island_children):
                survivors.append(member)
                island_of[member.id] = island

        self._update_archive(survivors)
        return Population(survivors, island_of)

    def _ta_phase(self, pop: Population, iteration: int, lanes: EvaluationLanes) -> Population:
        ta = self.cfg.ta
        if self.cfg.max_iter2 == 0:
            return pop

        state = ThresholdState(t=ta.t0, cursors=dict(self._cursors))
        members = list(pop.members)
        for inner in range(1, self.cfg.max_iter2 + 1):
            owners: List[int] = []
            proposals: List[Individual] = []
            for idx, member in enumerate(members):
                for k in range(ta.neighbors_per_iter):
                    step = (inner - 1) * ta.neighbors_per_iter + k
                    rng = self.stream.generator(StreamPurpose.TA, iteration, member.id, step)
                    mask, state = ta_neighbor(member, state, ta.tmf, rng)
                    candidate = replace(member, mask=mask, auc=None, test_auc=None)
                    owners.append(idx)
                    proposals.append(sync_selected_ids(candidate, self.names))

            scored = self._score(proposals, lanes)
            best: Dict[int, Individual] = {}
            for idx, candidate in zip(owners, scored):
                if idx not in best or ranking_key(candidate) < ranking_key(best[idx]):
                    best[idx] = candidate

            accepted = 0
            for idx, candidate in best.items():
                if ta_accept(members[idx].auc.auc, candidate.auc.auc, state.t):
                    members[idx] = candidate
                    accepted += 1
            logger.debug(
                "iteration %d TA step %d: threshold %.5f, accepted %d/%d",
                iteration, inner, state.t, accepted, len(members),
            )
            state = threshold_update(state, ta.cool)
            self._update_archive(members)

        self._cursors = dict(state.cursors)
        return Population(members, dict(pop.island_of))

    def _score_test(self, members: Sequence[Individual], lanes: EvaluationLanes) -> List[Individual]:
        fresh = [replace(m, test_auc=None) for m in members]
        return _score_members(fresh, lanes, field="test_auc")

    def run(self) -> RunResult:
        cfg = self.cfg
        started = time.perf_counter()
        logger.info(
            "Starting %s run %d (n=%d, nfeat=%d, max_iter1=%d, max_iter2=%d, parallelism=%d)",
            cfg.algorithm.label, cfg.run_index, cfg.n, len(self.names),
            cfg.max_iter1, cfg.max_iter2, cfg.parallelism,
        )
        if self.tracker:
            self.tracker.log_params({"algorithm": cfg.algorithm.value, "run_index": cfg.run_index})

        with EvaluationLanes(self.evaluator, cfg.parallelism, cfg.lane_backend) as lanes:
            pop = init_population(cfg.n, len(self.names), cfg.bias, self.stream, self.names)
            pop = partition_islands(pop, cfg.islands)
            pop = Population(self._score(pop.members, lanes), pop.island_of)
            self._update_archive(pop.members)
            trace = [self.archive.auc.auc]

            completed = 0
            stale = 0
            for iteration in range(1, cfg.max_iter1 + 1):
                previous = self.archive
                if cfg.algorithm is Algorithm.PBTADE:
                    pop = self._ta_phase(pop, iteration, lanes)
                pop = self._de_generation(pop, iteration, lanes)
                if cfg.algorithm is Algorithm.PBDETA:
                    pop = self._ta_phase(pop, iteration, lanes)

                completed = iteration
                trace.append(self.archive.auc.auc)
                logger.debug(
                    "iteration %d: best train AUC %.4f with %d features, %d evaluations",
                    iteration, self.archive.auc.auc, self.archive.cardinality, self.evaluations,
                )
                if self.tracker:
                    self.tracker.log_metrics(
                        {
                            "best_train_auc": self.archive.auc.auc,
                            "best_cardinality": self.archive.cardinality,
                            "evaluations": self.evaluations,
                        },
                        step=iteration,
                    )

                stale = stale + 1 if self.archive is previous else 0
                if cfg.patience is not None and stale >= cfg.patience:
                    logger.info("Early stop after %d unchanged iterations", stale)
                    break

        test_evaluator = FitnessEvaluator(self.split.train, self.split.test)
        with EvaluationLanes(test_evaluator, cfg.parallelism, cfg.lane_backend) as test_lanes:
            final_members = self._score_test(list(pop.members) + [self.archive], test_lanes)
        archive_best = final_members.pop()
        final_population = Population(final_members, dict(pop.island_of))
        best = best_of(final_population, by="test")

        wall_time = time.perf_counter() - started
        logger.info(
            "Finished %s run %d: best test AUC %.4f (%d features), %d evaluations in %.2fs",
            cfg.algorithm.label, cfg.run_index, best.test_auc.auc, best.cardinality,
            self.evaluations, wall_time,
        )
        return RunResult(
            algorithm=cfg.algorithm,
            run_index=cfg.run_index,
            final_population=final_population,
            best=best,
            archive_best=archive_best,
            train_best_trace=trace,
            evaluations=self.evaluations,
            wall_time=wall_time,
            iterations=completed,
        )


def _run_checked(cfg: EngineConfig, split: SplitPair, expected: Algorithm, **kwargs) -> RunResult:
    if cfg.algorithm is not expected:
        raise ConfigError(f"{expected.label} driver called with algorithm {cfg.algorithm.label}")
    return SearchEngine(cfg, split, **kwargs).run()


def run_pbde(cfg: EngineConfig, split: SplitPair, **kwargs) -> RunResult:
    """Parallel binary differential evolution."""
    return _run_checked(cfg, split, Algorithm.PBDE, **kwargs)


def run_pbdeta(cfg: EngineConfig, split: SplitPair, **kwargs) -> RunResult:
    """One DE generation followed by ``max_iter2`` TA steps per outer iteration."""
    return _run_checked(cfg, split, Algorithm.PBDETA, **kwargs)


def run_pbtade(cfg: EngineConfig, split: SplitPair, **kwargs) -> RunResult:
    """``max_iter2`` TA steps followed by one DE generation per outer iteration."""
    return _run_checked(cfg, split, Algorithm.PBTADE, **kwargs)


def run_search(cfg: EngineConfig, split: SplitPair, **kwargs) -> RunResult:
    """Dispatch to the driver named by ``cfg.algorithm``."""
    return SearchEngine(cfg, split, **kwargs).run()


__all__ = [
    "RunResult",
    "SearchEngine",
    "evaluate_population_concurrent",
    "partition_islands",
    "run_pbde",
    "run_pbdeta",
    "run_pbtade",
    "run_search",
]
