"""Campaign statistics: repeatability, summaries, speedup and paired t-tests."""

import math
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..search.population import Individual

SIGNIFICANCE_LEVEL = 0.05
TOP_FEATURES = 5


def _auc_of(ind: Individual) -> float:
    """Test AUC when present, training AUC otherwise."""
    score = ind.test_auc if ind.test_auc is not None else ind.auc
    if score is None:
        raise ValueError(f"member {ind.id} has no AUC")
    return score.auc


@dataclass(frozen=True)
class SubsetGroup:
    """Identical best masks across runs."""
    selected_ids: Tuple[str, ...]
    cardinality: int
    auc: float
    count: int


@dataclass
class RepeatabilityReport:
    """How often features and whole subsets recur among per-run bests."""
    runs: int
    feature_frequency: Dict[str, int] = field(default_factory=dict)
    frequent_features: List[Tuple[str, int]] = field(default_factory=list)
    subset_counts: List[SubsetGroup] = field(default_factory=list)
    top2_subsets: List[Optional[SubsetGroup]] = field(default_factory=list)
    least_cardinal_best: Optional[Tuple[int, float]] = None


def feature_repeatability(
    bests: Sequence[Individual], names: Sequence[str], runs: int
) -> Tuple[Dict[str, int], List[Tuple[str, int]]]:
    """
    Count each feature's appearances across best masks.

    Returns the full frequency table (feature order) and the top five features
    present in strictly more than half of the runs, by count desc then name.
    """
    if runs != len(bests):
        raise ValueError(f"runs={runs} but {len(bests)} best individuals given")
    counts = np.zeros(len(names), dtype=np.int64)
    for ind in bests:
        if len(ind.mask) != len(names):
            raise ValueError("best mask length does not match feature names")
        counts += ind.mask.bits
    frequency = {name: int(c) for name, c in zip(names, counts)}
    frequent = [(name, c) for name, c in frequency.items() if c > runs / 2]
    frequent.sort(key=lambda item: (-item[1], item[0]))
    return frequency, frequent[:TOP_FEATURES]


def _group_subsets(bests: Sequence[Individual]) -> List[SubsetGroup]:
    groups: "OrderedDict[bytes, List[Individual]]" = OrderedDict()
    for ind in bests:
        groups.setdefault(ind.mask.key(), []).append(ind)
    return [
        SubsetGroup(
            selected_ids=members[0].selected_ids,
            cardinality=members[0].cardinality,
            auc=max(_auc_of(m) for m in members),
            count=len(members),
        )
        for members in groups.values()
    ]


def subset_repeatability(
    bests: Sequence[Individual],
) -> Tuple[List[SubsetGroup], List[Optional[SubsetGroup]]]:
    """
    Group identical best masks.

    Returns every group ranked by (count desc, AUC desc, cardinality asc) and
    the top two, padded with None when only one group exists.
    """
    if not bests:
        raise ValueError("subset_repeatability needs at least one individual")
    groups = _group_subsets(bests)
    ranked = sorted(groups, key=lambda g: (-g.count, -g.auc, g.cardinality))
    top2: List[Optional[SubsetGroup]] = list(ranked[:2])
    while len(top2) < 2:
        top2.append(None)
    return ranked, top2


def least_cardinal_best(bests: Sequence[Individual]) -> Tuple[int, float]:
    """Least cardinal subset among the most repeated ones (ties: higher AUC)."""
    if not bests:
        raise ValueError("least_cardinal_best needs at least one individual")
    groups = _group_subsets(bests)
    top_count = max(g.count for g in groups)
    chosen = min(
        (g for g in groups if g.count == top_count), key=lambda g: (g.cardinality, -g.auc)
    )
    return chosen.cardinality, chosen.auc


def repeatability_report(bests: Sequence[Individual], names: Sequence[str]) -> RepeatabilityReport:
    frequency, frequent = feature_repeatability(bests, names, len(bests))
    ranked, top2 = subset_repeatability(bests)
    return RepeatabilityReport(
        runs=len(bests),
        feature_frequency=frequency,
        frequent_features=frequent,
        subset_counts=ranked,
        top2_subsets=top2,
        least_cardinal_best=least_cardinal_best(bests),
    )


@dataclass(frozen=True)
class AlgorithmSummary:
    """Average cardinality and mean best test AUC of one algorithm."""
    algorithm: str
    runs: int
    mean_cardinality: float
    std_cardinality: float
    mean_auc: float
    std_auc: float


def summarize(algorithm: str, bests: Sequence[Individual]) -> AlgorithmSummary:
    cards = np.array([b.cardinality for b in bests], dtype=np.float64)
    aucs = np.array([_auc_of(b) for b in bests], dtype=np.float64)
    ddof = 1 if len(bests) > 1 else 0
    return AlgorithmSummary(
        algorithm=algorithm,
        runs=len(bests),
        mean_cardinality=float(cards.mean()),
        std_cardinality=float(cards.std(ddof=ddof)),
        mean_auc=float(aucs.mean()),
        std_auc=float(aucs.std(ddof=ddof)),
    )


@dataclass(frozen=True)
class SpeedupReport:
    sequential_seconds: float
    parallel_seconds: float
    speedup: float


def compute_speedup(sequential_seconds: float, parallel_seconds: float) -> SpeedupReport:
    """Sequential wall time over parallel wall time, rounded to two decimals."""
    if parallel_seconds <= 0:
        raise ValueError("parallel time must be positive")
    return SpeedupReport(
        sequential_seconds=sequential_seconds,
        parallel_seconds=parallel_seconds,
        speedup=round(sequential_seconds / parallel_seconds, 2),
    )


@dataclass(frozen=True)
class TTestResult:
    t_statistic: float
    p_value: float
    df: int
    significant: bool


def _beta_continued_fraction(a: float, b: float, x: float, max_iter: int = 500) -> float:
    """Modified Lentz evaluation of the incomplete beta continued fraction."""
    tiny = 1e-300
    eps = 1e-15
    qab, qap, qam = a + b, a + 1.0, a - 1.0

    c = 1.0
    d = 1.0 - qab * x / qap
    d = 1.0 / (d if abs(d) > tiny else tiny)
    h = d
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        d = 1.0 / (d if abs(d) > tiny else tiny)
        c = 1.0 + aa / c
        c = c if abs(c) > tiny else tiny
        h *= d * c

        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        d = 1.0 / (d if abs(d) > tiny else tiny)
        c = 1.0 + aa / c
        c = c if abs(c) > tiny else tiny
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < eps:
            return h
    raise ArithmeticError(f"incomplete beta did not converge for a={a}, b={b}, x={x}")


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b) for a, b > 0 and 0 <= x <= 1."""
    if a <= 0 or b <= 0:
        raise ValueError("a and b must be positive")
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must be in [0, 1], got {x}")
    if x == 0.0 or x == 1.0:
        return x
    log_front = (
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
        + a * math.log(x) + b * math.log1p(-x)
    )
    if x < (a + 1.0) / (a + b + 2.0):
        return math.exp(log_front) * _beta_continued_fraction(a, b, x) / a
    return 1.0 - math.exp(log_front) * _beta_continued_fraction(b, a, 1.0 - x) / b


def student_t_two_tailed(t: float, df: int) -> float:
    """Two-tailed p-value of a Student-t statistic."""
    if df < 1:
        raise ValueError("df must be >= 1")
    p = regularized_incomplete_beta(df / 2.0, 0.5, df / (df + t * t))
    return min(max(p, 0.0), 1.0)


def paired_t_test(a: Sequence[float], b: Sequence[float]) -> TTestResult:
    """
    Two-tailed paired t-test on ``a - b``.

    Raises:
        ValueError: On unequal lengths, fewer than two pairs, or differences
            with zero variance
    """
    if len(a) != len(b):
        raise ValueError(f"paired samples differ in length ({len(a)} vs {len(b)})")
    runs = len(a)
    if runs < 2:
        raise ValueError("runs < 2: a paired t-test needs at least two pairs")
    diffs = [x - y for x, y in zip(a, b)]
    mean = sum(diffs) / runs
    variance = sum((d - mean) ** 2 for d in diffs) / (runs - 1)
    if variance == 0.0:
        raise ValueError("degenerate paired sample: differences have zero variance")
    t = mean / (math.sqrt(variance) / math.sqrt(runs))
    df = runs - 1
    p = student_t_two_tailed(t, df)
    return TTestResult(t_statistic=t, p_value=p, df=df, significant=p < SIGNIFICANCE_LEVEL)
