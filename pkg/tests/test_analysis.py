"""Tests for repeatability, summaries, speedup and paired t-tests."""

import math

import numpy as np
import pytest

special = pytest.importorskip("scipy.special")
stats = pytest.importorskip("scipy.stats")

from evofss.harness.analysis import (
    compute_speedup,
    feature_repeatability,
    least_cardinal_best,
    paired_t_test,
    regularized_incomplete_beta,
    repeatability_report,
    student_t_two_tailed,
    subset_repeatability,
    summarize,
)
from evofss.search.classifier import FitnessScore
from evofss.search.population import FeatureMask, Individual


NAMES = ("a", "b", "c", "d")


def _best(member_id, bits, test_auc):
    score = FitnessScore(test_auc, test_auc, test_auc)
    mask = FeatureMask(bits)
    return Individual(
        member_id,
        mask,
        selected_ids=tuple(NAMES[i] for i in mask.selected_indices()),
        auc=score,
        test_auc=score,
    )


class TestFeatureRepeatability:
    """Tests for per-feature counts across best subsets."""

    def test_strictly_more_than_half(self):
        # a in 3/4 runs, b in exactly 2/4, c in 4/4
        bests = [
            _best(0, [1, 1, 1, 0], 0.8),
            _best(1, [1, 1, 1, 0], 0.8),
            _best(2, [1, 0, 1, 0], 0.8),
            _best(3, [0, 0, 1, 1], 0.8),
        ]
        frequency, frequent = feature_repeatability(bests, NAMES, 4)

        assert frequency == {"a": 3, "b": 2, "c": 4, "d": 1}
        assert frequent == [("c", 4), ("a", 3)]

    def test_top_five_with_name_tiebreak(self):
        names = tuple("gfedcba")
        bests = [Individual(i, FeatureMask([1] * 7)) for i in range(3)]
        _, frequent = feature_repeatability(bests, names, 3)
        assert frequent == [(n, 3) for n in "abcde"]

    def test_identical_bests_have_count_r(self):
        bests = [_best(i, [0, 1, 1, 0], 0.7) for i in range(5)]
        frequency, _ = feature_repeatability(bests, NAMES, 5)
        assert frequency["b"] == frequency["c"] == 5
        assert all(v <= 5 for v in frequency.values())

    def test_run_count_must_match(self):
        with pytest.raises(ValueError):
            feature_repeatability([_best(0, [1, 0, 0, 0], 0.5)], NAMES, 2)


class TestSubsetRepeatability:
    """Tests for identical-subset grouping."""

    def test_most_repeated_first(self):
        bests = [
            _best(0, [1, 0, 0, 0], 0.7),
            _best(1, [0, 1, 0, 0], 0.9),
            _best(2, [1, 0, 0, 0], 0.7),
        ]
        ranked, top2 = subset_repeatability(bests)
        assert top2[0].selected_ids == ("a",)
        assert top2[0].count == 2
        assert top2[1].selected_ids == ("b",)
        assert len(ranked) == 2

    def test_all_distinct_ranked_by_auc(self):
        bests = [
            _best(0, [1, 0, 0, 0], 0.6),
            _best(1, [0, 1, 0, 0], 0.9),
            _best(2, [0, 0, 1, 0], 0.8),
        ]
        _, top2 = subset_repeatability(bests)
        assert [g.auc for g in top2] == [0.9, 0.8]
        assert all(g.count == 1 for g in top2)

    def test_single_group_leaves_second_slot_empty(self):
        bests = [_best(i, [1, 1, 0, 0], 0.75) for i in range(3)]
        _, top2 = subset_repeatability(bests)
        assert top2[0].count == 3
        assert top2[0].cardinality == 2
        assert top2[1] is None


class TestLeastCardinalBest:
    """Tests for the least cardinal among the most repeated subsets."""

    def _groups(self, rows):
        bests, next_id = [], 0
        for bits, auc, count in rows:
            for _ in range(count):
                bests.append(_best(next_id, bits, auc))
                next_id += 1
        return bests

    def test_fewer_features_wins_among_most_repeated(self):
        bests = self._groups([
            ([1, 1, 0, 0], 0.7061, 5),
            ([1, 1, 1, 0], 0.7047, 5),
            ([1, 0, 0, 0], 0.9, 1),
        ])
        assert least_cardinal_best(bests) == (2, 0.7061)

    def test_equal_cardinality_prefers_higher_auc(self):
        bests = self._groups([([1, 0, 0, 0], 0.6, 2), ([0, 1, 0, 0], 0.8, 2)])
        assert least_cardinal_best(bests) == (1, 0.8)

    def test_single_group(self):
        assert least_cardinal_best(self._groups([([0, 0, 1, 1], 0.5, 3)])) == (2, 0.5)

    def test_report_bundles_all_parts(self):
        bests = self._groups([([1, 1, 0, 0], 0.7, 3), ([0, 0, 1, 0], 0.6, 1)])
        report = repeatability_report(bests, NAMES)
        assert report.runs == 4
        assert report.frequent_features == [("a", 3), ("b", 3)]
        assert report.least_cardinal_best == (2, 0.7)


class TestSummary:
    """Tests for per-algorithm averages."""

    def test_mean_auc_is_arithmetic_mean(self):
        rng = np.random.default_rng(0)
        aucs = rng.uniform(0.5, 1.0, size=20)
        bests = [_best(i, [1, 0, 1, 0], float(a)) for i, a in enumerate(aucs)]
        summary = summarize("pbde", bests)

        assert summary.mean_auc == pytest.approx(sum(aucs) / 20, abs=1e-12)
        assert summary.mean_cardinality == 2.0
        assert summary.std_cardinality == 0.0
        assert summary.runs == 20


class TestSpeedup:
    """Tests for the sequential/parallel ratio."""

    def test_published_example(self):
        assert compute_speedup(3120, 1336).speedup == 2.33

    def test_identity(self):
        assert compute_speedup(12.5, 12.5).speedup == 1.0

    def test_exact_division_of_fake_timings(self):
        report = compute_speedup(9.0, 4.0)
        assert report.speedup == 2.25
        assert report.sequential_seconds == 9.0
        assert report.parallel_seconds == 4.0

    def test_parallel_time_must_be_positive(self):
        with pytest.raises(ValueError):
            compute_speedup(1.0, 0.0)


class TestIncompleteBeta:
    """The continued-fraction incomplete beta against scipy."""

    @pytest.mark.parametrize(
        "a,b,x",
        [(0.5, 0.5, 0.3), (2.0, 0.5, 0.1), (2.0, 0.5, 0.9), (9.5, 0.5, 0.42), (30.0, 0.5, 0.97)],
    )
    def test_matches_scipy(self, a, b, x):
        assert regularized_incomplete_beta(a, b, x) == pytest.approx(special.betainc(a, b, x), rel=1e-8)

    def test_endpoints(self):
        assert regularized_incomplete_beta(2.0, 3.0, 0.0) == 0.0
        assert regularized_incomplete_beta(2.0, 3.0, 1.0) == 1.0

    def test_domain(self):
        with pytest.raises(ValueError):
            regularized_incomplete_beta(2.0, 3.0, 1.5)
        with pytest.raises(ValueError):
            regularized_incomplete_beta(0.0, 3.0, 0.5)

    def test_t_distribution_tail(self):
        for df in (1, 4, 19):
            for t in (0.0, 0.7, 2.1, 5.0):
                expected = 2 * stats.t.sf(abs(t), df)
                assert student_t_two_tailed(t, df) == pytest.approx(expected, rel=1e-8, abs=1e-14)


class TestPairedTTest:
    """Tests for the two-tailed paired t-test."""

    def test_reference_values(self):
        result = paired_t_test([1.0, 2.0, 3.0, 4.0, 5.0], [0.0] * 5)
        assert result.t_statistic == pytest.approx(3 / (math.sqrt(2.5) / math.sqrt(5)))
        assert result.t_statistic == pytest.approx(4.2426, abs=1e-4)
        assert result.df == 4
        assert result.p_value == pytest.approx(0.0132, abs=1e-4)
        assert result.significant

    def test_swap_negates_t(self):
        a, b = [0.81, 0.79, 0.85, 0.80], [0.78, 0.80, 0.79, 0.77]
        forward, backward = paired_t_test(a, b), paired_t_test(b, a)
        assert backward.t_statistic == pytest.approx(-forward.t_statistic)
        assert backward.p_value == pytest.approx(forward.p_value)

    def test_identical_samples_are_degenerate(self):
        with pytest.raises(ValueError, match="degenerate paired sample"):
            paired_t_test([0.8, 0.7, 0.9], [0.8, 0.7, 0.9])

    def test_constant_difference_is_degenerate(self):
        with pytest.raises(ValueError, match="degenerate paired sample"):
            paired_t_test([1.0, 2.0, 3.0], [0.0, 1.0, 2.0])

    def test_length_and_size_checks(self):
        with pytest.raises(ValueError, match="differ in length"):
            paired_t_test([1.0, 2.0], [1.0])
        with pytest.raises(ValueError, match="runs < 2"):
            paired_t_test([1.0], [2.0])

    def test_matches_scipy_on_generated_cases(self):
        rng = np.random.default_rng(17)
        for _ in range(50):
            runs = int(rng.integers(2, 30))
            a = rng.uniform(0.6, 0.95, size=runs)
            b = a + rng.normal(0.01, 0.02, size=runs)
            ours = paired_t_test(a.tolist(), b.tolist())
            reference = stats.ttest_rel(a, b)
            assert ours.t_statistic == pytest.approx(reference.statistic, rel=1e-9)
            assert ours.p_value == pytest.approx(reference.pvalue, rel=1e-6, abs=1e-12)
            assert 0.0 <= ours.p_value <= 1.0

    def test_matches_brute_force_formula(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            d = rng.normal(0.0, 1.0, size=10)
            expected_t = d.mean() / (d.std(ddof=1) / math.sqrt(10))
            result = paired_t_test(d.tolist(), [0.0] * 10)
            assert result.t_statistic == pytest.approx(expected_t, rel=1e-9)
