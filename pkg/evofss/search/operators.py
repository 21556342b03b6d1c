"""Binary DE variation, elitist replacement and threshold accepting moves."""

from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .population import FeatureMask, Individual, ranking_key, repair_empty


@dataclass(frozen=True)
class ThresholdState:
    """Current TA threshold and each individual's next flip position."""
    t: float
    cursors: Dict[int, int] = field(default_factory=dict)

    def cursor(self, individual_id: int) -> int:
        return self.cursors.get(individual_id, 0)


def _check_lengths(*masks: FeatureMask) -> None:
    lengths = {len(m) for m in masks}
    if len(lengths) != 1:
        raise ValueError(f"mask lengths differ: {sorted(lengths)}")


def de_mutant_values(r1: FeatureMask, r2: FeatureMask, r3: FeatureMask, mf: float) -> np.ndarray:
    """The relaxed mutant ``r1 + mf * (r2 - r3)`` over 0/1 values."""
    _check_lengths(r1, r2, r3)
    a, b, c = (m.bits.astype(np.float64) for m in (r1, r2, r3))
    return a + mf * (b - c)


def de_mutate(r1: FeatureMask, r2: FeatureMask, r3: FeatureMask, mf: float) -> FeatureMask:
    """DE/rand/1 mutation binarized at 0.5."""
    return FeatureMask(de_mutant_values(r1, r2, r3, mf) >= 0.5)


def draw_partners(
    target: Individual, pool: Sequence[Individual], rng: np.random.Generator
) -> Tuple[Individual, Individual, Individual]:
    """Three distinct members of ``pool``, none of them the target."""
    candidates = [m for m in pool if m.id != target.id]
    if len(candidates) < 3:
        raise ValueError("DE mutation needs at least 4 population members")
    picks = rng.choice(len(candidates), size=3, replace=False)
    return tuple(candidates[int(i)] for i in picks)  # type: ignore[return-value]


def de_crossover(
    target: FeatureMask, mutant: FeatureMask, cr: float, rng: np.random.Generator
) -> FeatureMask:
    """
    Binomial crossover with a guaranteed mutant position.

    Draw order: ``jrand`` first, then one uniform per bit, then (only for an
    empty trial) the repair position.
    """
    _check_lengths(target, mutant)
    nfeat = len(target)
    jrand = int(rng.integers(nfeat))
    take = rng.random(nfeat) < cr
    take[jrand] = True
    trial = np.where(take, mutant.bits, target.bits)
    return FeatureMask(repair_empty(trial, rng))


def elitist_replacement(
    parents: Sequence[Individual], children: Sequence[Individual]
) -> List[Individual]:
    """
    Pool parents and children and keep the best ``len(parents)``.

    Ranking: AUC desc, cardinality asc, parents before children, id asc.

    Raises:
        ValueError: On unequal counts or an unevaluated member
    """
    if len(parents) != len(children):
        raise ValueError(f"{len(parents)} parents but {len(children)} children")

    def key(item: Tuple[int, Individual]):
        origin, ind = item
        neg_auc, cardinality, ind_id = ranking_key(ind)
        return (neg_auc, cardinality, origin, ind_id)

    pooled = [(0, p) for p in parents] + [(1, c) for c in children]
    pooled.sort(key=key)
    return [ind for _, ind in pooled[: len(parents)]]


def ta_neighbor(
    ind: Individual,
    state: ThresholdState,
    tmf: int,
    rng: Optional[np.random.Generator] = None,
) -> Tuple[FeatureMask, ThresholdState]:
    """
    Flip ``tmf`` consecutive bits starting at the individual's cursor (wrapping).

    The cursor advances by ``tmf`` modulo nfeat. An emptied mask is repaired
    from ``rng`` (or, without one, by restoring the first flipped bit).
    """
    if tmf < 1:
        raise ValueError("tmf must be >= 1")
    nfeat = len(ind.mask)
    start = state.cursor(ind.id) % nfeat
    positions = [(start + j) % nfeat for j in range(tmf)]
    bits = ind.mask.flipped(positions).bits.copy()
    if not bits.any():
        if rng is None:
            bits[positions[0]] = True
        else:
            bits = repair_empty(bits, rng)

    cursors = dict(state.cursors)
    cursors[ind.id] = (start + tmf) % nfeat
    return FeatureMask(bits), replace(state, cursors=cursors)


def ta_accept(old_auc: float, new_auc: float, t: float) -> bool:
    """Accept unless the AUC deterioration reaches the threshold."""
    if t <= 0:
        raise ValueError("threshold must be > 0")
    return (old_auc - new_auc) < t


def threshold_update(state: ThresholdState, cool: float) -> ThresholdState:
    """Geometric cooling ``t <- t * cool``."""
    if not 0.0 < cool < 1.0:
        raise ValueError("cool must be in (0, 1)")
    return replace(state, t=state.t * cool)
