"""Report files: per-run records, summary, repeatability, speedup and t-test tables."""

import itertools
import json
import logging
from dataclasses import asdict
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import pandas as pd

from ..core.config import Algorithm
from ..core.errors import EvofssError
from ..search.classifier import FitnessScore
from ..search.engine import RunResult
from ..search.population import FeatureMask, Individual
from .analysis import (
    AlgorithmSummary,
    RepeatabilityReport,
    SpeedupReport,
    SubsetGroup,
    TTestResult,
    paired_t_test,
    repeatability_report,
    summarize,
)

logger = logging.getLogger(__name__)

RUNS_FILE = "runs.json"
TIMINGS_FILE = "timings.json"
SPEEDUP_FILE = "speedup.json"

Bests = Dict[Algorithm, List[Individual]]


def _score_to_dict(score: Optional[FitnessScore]) -> Optional[Dict[str, float]]:
    if score is None:
        return None
    return {"auc": score.auc, "sensitivity": score.sensitivity, "specificity": score.specificity}


def _score_from_dict(data: Optional[Mapping[str, float]]) -> Optional[FitnessScore]:
    return None if data is None else FitnessScore(**data)


def individual_to_dict(ind: Individual) -> Dict[str, Any]:
    return {
        "id": ind.id,
        "mask": ind.mask.to_list(),
        "selected_ids": list(ind.selected_ids),
        "cardinality": ind.cardinality,
        "auc": _score_to_dict(ind.auc),
        "test_auc": _score_to_dict(ind.test_auc),
    }


def individual_from_dict(data: Mapping[str, Any]) -> Individual:
    return Individual(
        id=int(data["id"]),
        mask=FeatureMask(data["mask"]),
        selected_ids=tuple(data["selected_ids"]),
        auc=_score_from_dict(data.get("auc")),
        test_auc=_score_from_dict(data.get("test_auc")),
    )


def run_record(result: RunResult) -> Dict[str, Any]:
    """Deterministic part of a RunResult (wall time is kept elsewhere)."""
    return {
        "run_index": result.run_index,
        "iterations": result.iterations,
        "evaluations": result.evaluations,
        "train_best_trace": list(result.train_best_trace),
        "best": individual_to_dict(result.best),
        "archive_best": individual_to_dict(result.archive_best),
    }


def _write_json(path: Path, payload: Any) -> Path:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def _write_csv(path: Path, rows: Sequence[Mapping[str, Any]], columns: Sequence[str]) -> Path:
    pd.DataFrame(list(rows), columns=list(columns)).to_csv(path, index=False)
    return path


def _subset_dict(group: Optional[SubsetGroup]) -> Optional[Dict[str, Any]]:
    if group is None:
        return None
    return {
        "cardinality": group.cardinality,
        "auc": group.auc,
        "count": group.count,
        "features": list(group.selected_ids),
    }


def _pairwise_ttests(bests: Bests) -> List[Tuple[Algorithm, Algorithm, Optional[TTestResult], str]]:
    pairs = []
    for a, b in itertools.combinations(bests, 2):
        a_aucs = [ind.test_auc.auc for ind in bests[a]]
        b_aucs = [ind.test_auc.auc for ind in bests[b]]
        try:
            pairs.append((a, b, paired_t_test(a_aucs, b_aucs), ""))
        except ValueError as e:
            logger.warning("t-test %s vs %s skipped: %s", a.label, b.label, e)
            pairs.append((a, b, None, str(e)))
    return pairs


def write_speedup_reports(speedups: Mapping[Algorithm, SpeedupReport], output_dir: Path) -> List[Path]:
    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    rows = [
        {
            "algorithm": alg.value,
            "sequential_seconds": rep.sequential_seconds,
            "parallel_seconds": rep.parallel_seconds,
            "speedup": rep.speedup,
        }
        for alg, rep in speedups.items()
    ]
    return [
        _write_json(output_dir / SPEEDUP_FILE, {row["algorithm"]: row for row in rows}),
        _write_csv(output_dir / "speedup.csv", rows, ["algorithm", "sequential_seconds", "parallel_seconds", "speedup"]),
    ]


def _format_summary_text(
    summaries: Sequence[AlgorithmSummary],
    repeatability: Mapping[Algorithm, RepeatabilityReport],
    ttests: Sequence[Tuple[Algorithm, Algorithm, Optional[TTestResult], str]],
    speedups: Optional[Mapping[Algorithm, SpeedupReport]],
) -> str:
    lines = ["Average cardinality and mean best test AUC", ""]
    lines.append(f"{'Algorithm':<10} {'Runs':>5} {'Avg #s':>9} {'Mean AUC':>9} {'SD AUC':>8}")
    for s in summaries:
        label = Algorithm.parse(s.algorithm).label
        lines.append(
            f"{label:<10} {s.runs:>5} {s.mean_cardinality:>9.1f} {s.mean_auc:>9.4f} {s.std_auc:>8.4f}"
        )

    lines += ["", "Repeatability", ""]
    for alg, rep in repeatability.items():
        lines.append(f"{alg.label}:")
        frequent = ", ".join(f"{name} ({count})" for name, count in rep.frequent_features)
        lines.append(f"  features in more than half of the runs: {frequent or '-'}")
        for rank, group in enumerate(rep.top2_subsets, start=1):
            if group is None:
                lines.append(f"  top-{rank} subset: -")
            else:
                lines.append(
                    f"  top-{rank} subset: #s={group.cardinality} AUC={group.auc:.4f} x{group.count}"
                )
        card, auc = rep.least_cardinal_best
        lines.append(f"  least cardinal best: #s={card} AUC={auc:.4f}")

    if ttests:
        lines += ["", "Paired two-tailed t-tests (5% level)", ""]
        for a, b, result, note in ttests:
            if result is None:
                lines.append(f"{a.label} vs {b.label}: {note}")
            else:
                verdict = "significant" if result.significant else "not significant"
                lines.append(
                    f"{a.label} vs {b.label}: t={result.t_statistic:.4f} "
                    f"p={result.p_value:.4f} df={result.df} ({verdict})"
                )

    if speedups:
        lines += ["", "Speedup", ""]
        for alg, rep in speedups.items():
            lines.append(
                f"{alg.label}: {rep.sequential_seconds:.2f}s / {rep.parallel_seconds:.2f}s = {rep.speedup:.2f}"
            )
    return "\n".join(lines) + "\n"


def write_report_tables(
    feature_names: Sequence[str],
    bests: Bests,
    output_dir: Union[str, Path],
    speedups: Optional[Mapping[Algorithm, SpeedupReport]] = None,
    ttest: bool = True,
) -> List[Path]:
    """
    Write the summary, repeatability, t-test and best-subset tables.

    Every table is written as JSON (sorted keys, full float precision) and as
    CSV; ``summary.txt`` repeats them in a human-readable layout.
    """
    output_dir = Path(output_dir)
    written: List[Path] = []

    summaries = [summarize(alg.value, members) for alg, members in bests.items()]
    written.append(_write_json(output_dir / "summary.json", {s.algorithm: asdict(s) for s in summaries}))
    written.append(
        _write_csv(
            output_dir / "summary.csv",
            [asdict(s) for s in summaries],
            ["algorithm", "runs", "mean_cardinality", "std_cardinality", "mean_auc", "std_auc"],
        )
    )

    repeatability = {alg: repeatability_report(members, feature_names) for alg, members in bests.items()}
    rep_json = {}
    feature_rows, subset_rows = [], []
    for alg, rep in repeatability.items():
        card, auc = rep.least_cardinal_best
        rep_json[alg.value] = {
            "runs": rep.runs,
            "feature_frequency": {k: v for k, v in rep.feature_frequency.items() if v > 0},
            "frequent_features": [{"feature": n, "count": c} for n, c in rep.frequent_features],
            "distinct_subsets": len(rep.subset_counts),
            "top2_subsets": [_subset_dict(g) for g in rep.top2_subsets],
            "least_cardinal_best": {"cardinality": card, "auc": auc},
        }
        feature_rows += [
            {"algorithm": alg.value, "feature": n, "count": c} for n, c in rep.frequent_features
        ]
        for rank, group in enumerate(rep.top2_subsets, start=1):
            if group is not None:
                subset_rows.append(
                    {"algorithm": alg.value, "kind": f"top{rank}", "cardinality": group.cardinality,
                     "auc": group.auc, "count": group.count}
                )
        subset_rows.append(
            {"algorithm": alg.value, "kind": "least_cardinal", "cardinality": card, "auc": auc, "count": None}
        )
    written.append(_write_json(output_dir / "repeatability.json", rep_json))
    written.append(
        _write_csv(output_dir / "repeatability_features.csv", feature_rows, ["algorithm", "feature", "count"])
    )
    written.append(
        _write_csv(
            output_dir / "repeatability_subsets.csv",
            subset_rows,
            ["algorithm", "kind", "cardinality", "auc", "count"],
        )
    )

    ttests = _pairwise_ttests(bests) if ttest else []
    if ttest:
        ttest_rows = [
            {
                "algorithm_a": a.value,
                "algorithm_b": b.value,
                "t_statistic": None if r is None else r.t_statistic,
                "p_value": None if r is None else r.p_value,
                "df": len(bests[a]) - 1,
                "significant": None if r is None else r.significant,
                "note": note,
            }
            for a, b, r, note in ttests
        ]
        written.append(
            _write_json(output_dir / "ttest.json", {f"{r['algorithm_a']}:{r['algorithm_b']}": r for r in ttest_rows})
        )
        written.append(
            _write_csv(
                output_dir / "ttest.csv",
                ttest_rows,
                ["algorithm_a", "algorithm_b", "t_statistic", "p_value", "df", "significant", "note"],
            )
        )

    best_rows = [
        {
            "algorithm": alg.value,
            "run_index": position,
            "cardinality": ind.cardinality,
            "train_auc": ind.auc.auc if ind.auc else None,
            "test_auc": ind.test_auc.auc if ind.test_auc else None,
            "features": ";".join(ind.selected_ids),
        }
        for alg, members in bests.items()
        for position, ind in enumerate(members)
    ]
    written.append(
        _write_csv(
            output_dir / "best_subsets.csv",
            best_rows,
            ["algorithm", "run_index", "cardinality", "train_auc", "test_auc", "features"],
        )
    )

    summary_txt = output_dir / "summary.txt"
    summary_txt.write_text(
        _format_summary_text(summaries, repeatability, ttests, speedups), encoding="utf-8"
    )
    written.append(summary_txt)
    return written


def emit_reports(
    results: Mapping[Algorithm, Sequence[RunResult]],
    feature_names: Sequence[str],
    output_dir: Union[str, Path],
    speedups: Optional[Mapping[Algorithm, SpeedupReport]] = None,
    ttest: bool = True,
) -> List[Path]:
    """
    Persist run records and write every report table.

    Wall times go to ``timings.json`` only, so all other files are identical
    across reruns of the same configuration.

    Raises:
        EvofssError: If the output directory cannot be written
    """
    output_dir = Path(output_dir)
    try:
        output_dir.mkdir(parents=True, exist_ok=True)
        runs_payload = {
            "algorithms": [alg.value for alg in results],
            "feature_names": list(feature_names),
            "runs": {alg.value: [run_record(r) for r in runs] for alg, runs in results.items()},
        }
        written = [_write_json(output_dir / RUNS_FILE, runs_payload)]
        written.append(
            _write_json(
                output_dir / TIMINGS_FILE,
                {alg.value: [r.wall_time for r in runs] for alg, runs in results.items()},
            )
        )
        bests = {alg: [r.best for r in runs] for alg, runs in results.items()}
        written += write_report_tables(feature_names, bests, output_dir, speedups, ttest)
        if speedups:
            written += write_speedup_reports(speedups, output_dir)
    except OSError as e:
        raise EvofssError(f"cannot write reports to {output_dir}: {e}") from e

    logger.info("Wrote %d report files to %s", len(written), output_dir)
    return written


def load_results(
    input_dir: Union[str, Path],
) -> Tuple[Tuple[str, ...], Bests, Optional[Dict[Algorithm, SpeedupReport]]]:
    """
    Read the run records (and speedup table, if any) written by ``emit_reports``.

    Raises:
        FileNotFoundError: If ``runs.json`` is missing
        EvofssError: If the records are malformed
    """
    input_dir = Path(input_dir)
    runs_file = input_dir / RUNS_FILE
    if not runs_file.exists():
        raise FileNotFoundError(f"No {RUNS_FILE} in {input_dir}")

    try:
        payload = json.loads(runs_file.read_text(encoding="utf-8"))
        names = tuple(payload["feature_names"])
        order = payload.get("algorithms", sorted(payload["runs"]))
        bests: Bests = {
            Algorithm.parse(alg): [individual_from_dict(rec["best"]) for rec in payload["runs"][alg]]
            for alg in order
        }
    except (KeyError, TypeError, ValueError) as e:
        raise EvofssError(f"malformed {runs_file}: {e}") from e

    speedups = None
    speedup_file = input_dir / SPEEDUP_FILE
    if speedup_file.exists():
        data = json.loads(speedup_file.read_text(encoding="utf-8"))
        speedups = {
            Algorithm.parse(alg): SpeedupReport(
                sequential_seconds=row["sequential_seconds"],
                parallel_seconds=row["parallel_seconds"],
                speedup=row["speedup"],
            )
            for alg, row in data.items()
        }
    return names, bests, speedups
