"""Binary feature masks, individuals, populations and seeded streams."""

from dataclasses import dataclass, field, replace
from enum import IntEnum
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .classifier import FitnessScore


class StreamPurpose(IntEnum):
    INIT = 0
    DE = 1
    TA = 2


@dataclass(frozen=True)
class RandomStream:
    """
    Counter-based random streams.

    Every (purpose, iteration, step, individual id) coordinate maps to its own
    generator, so draws never depend on the order individuals are processed in.
    """
    master_seed: int
    run_index: int = 0

    def generator(
        self, purpose: StreamPurpose, iteration: int, individual_id: int, step: int = 0
    ) -> np.random.Generator:
        seq = np.random.SeedSequence(
            entropy=self.master_seed,
            spawn_key=(self.run_index, int(purpose), iteration, step, individual_id),
        )
        return np.random.default_rng(seq)


class FeatureMask:
    """Immutable binary selection vector; 1 marks a selected feature."""

    __slots__ = ("_bits",)

    def __init__(self, bits: Union[Sequence[int], np.ndarray]):
        arr = np.array(bits, dtype=bool).ravel()
        arr.setflags(write=False)
        self._bits = arr

    @classmethod
    def ones(cls, nfeat: int) -> "FeatureMask":
        return cls(np.ones(nfeat, dtype=bool))

    @classmethod
    def zeros(cls, nfeat: int) -> "FeatureMask":
        return cls(np.zeros(nfeat, dtype=bool))

    @property
    def bits(self) -> np.ndarray:
        return self._bits

    def __len__(self) -> int:
        return self._bits.size

    def cardinality(self) -> int:
        return int(np.count_nonzero(self._bits))

    def selected_indices(self) -> List[int]:
        return np.flatnonzero(self._bits).tolist()

    def key(self) -> bytes:
        return np.packbits(self._bits).tobytes() + self._bits.size.to_bytes(8, "little")

    def to_list(self) -> List[int]:
        return self._bits.astype(int).tolist()

    def flipped(self, positions: Iterable[int]) -> "FeatureMask":
        bits = self._bits.copy()
        for pos in positions:
            bits[pos] = not bits[pos]
        return FeatureMask(bits)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FeatureMask):
            return NotImplemented
        return np.array_equal(self._bits, other._bits)

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        text = "".join("1" if b else "0" for b in self._bits[:64])
        suffix = "..." if self._bits.size > 64 else ""
        return f"FeatureMask('{text}{suffix}', cardinality={self.cardinality()})"


def repair_empty(bits: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Set one uniformly chosen bit when no bit is set."""
    if not bits.any():
        bits = bits.copy()
        bits[int(rng.integers(bits.size))] = True
    return bits


@dataclass(frozen=True)
class Individual:
    """A population member: key, mask, selected feature ids and scores."""
    id: int
    mask: FeatureMask
    selected_ids: Tuple[str, ...] = ()
    auc: Optional[FitnessScore] = None
    test_auc: Optional[FitnessScore] = None

    @property
    def cardinality(self) -> int:
        return self.mask.cardinality()

    @property
    def evaluated(self) -> bool:
        return self.auc is not None


@dataclass
class Population:
    """Fixed-size ordered members with an island assignment per member id."""
    members: List[Individual]
    island_of: Dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        if not self.island_of:
            self.island_of = {m.id: 0 for m in self.members}

    @property
    def size(self) -> int:
        return len(self.members)

    def islands(self) -> List[int]:
        return sorted(set(self.island_of.values()))

    def island_members(self, island: int) -> List[Individual]:
        return [m for m in self.members if self.island_of[m.id] == island]


def default_feature_names(nfeat: int) -> Tuple[str, ...]:
    return tuple(f"f{i}" for i in range(nfeat))


def sync_selected_ids(ind: Individual, names: Sequence[str]) -> Individual:
    """Rebuild ``selected_ids`` from the current mask."""
    if len(names) != len(ind.mask):
        raise ValueError(f"{len(names)} feature names for a mask of length {len(ind.mask)}")
    return replace(ind, selected_ids=tuple(names[i] for i in ind.mask.selected_indices()))


def init_population(
    n: int,
    nfeat: int,
    bias: float,
    stream: RandomStream,
    names: Optional[Sequence[str]] = None,
) -> Population:
    """
    Biased-sampling initialization: each bit is 1 iff a uniform draw exceeds ``bias``.

    All-zero masks are repaired from the member's own stream. Member ids are 0..n-1.

    Raises:
        ValueError: If n < 2, nfeat < 1 or bias is outside [0, 1)
    """
    if n < 2:
        raise ValueError("population size must be >= 2")
    if nfeat < 1:
        raise ValueError("nfeat must be >= 1")
    if not 0.0 <= bias < 1.0:
        raise ValueError("bias must be in [0, 1); bias >= 1 can never select a feature")
    names = default_feature_names(nfeat) if names is None else names

    members = []
    for member_id in range(n):
        rng = stream.generator(StreamPurpose.INIT, 0, member_id)
        bits = repair_empty(rng.random(nfeat) > bias, rng)
        members.append(sync_selected_ids(Individual(member_id, FeatureMask(bits)), names))
    return Population(members)


def ranking_key(ind: Individual, by: str = "train") -> Tuple[float, int, int]:
    """Sort key: higher AUC first, then fewer features, then smaller id."""
    score = ind.auc if by == "train" else ind.test_auc
    if score is None:
        raise ValueError(f"member {ind.id} has no {by} AUC")
    return (-score.auc, ind.cardinality, ind.id)


def best_of(pop: Union[Population, Sequence[Individual]], by: str = "train") -> Individual:
    """
    The best member by AUC, then smaller cardinality, then smaller id.

    Raises:
        ValueError: If the population is empty or a member is unscored
    """
    members = pop.members if isinstance(pop, Population) else list(pop)
    if not members:
        raise ValueError("best_of needs at least one member")
    return min(members, key=lambda m: ranking_key(m, by))
