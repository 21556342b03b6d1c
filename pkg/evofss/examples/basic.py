"""Example usage of evofss."""

import argparse
from pathlib import Path

import pandas as pd

from evofss import (
    EngineConfig,
    ExperimentConfig,
    make_planted_dataset,
    run_experiment,
    run_search,
    stratified_split,
)


def write_planted_csv(path: Path, nrows: int = 600, nfeat: int = 40, informative: int = 5) -> Path:
    """Write a planted dataset as CSV with a ``label`` column."""
    ds = make_planted_dataset(nrows, nfeat, informative, seed=11)
    frame = pd.DataFrame(ds.matrix, columns=list(ds.feature_names))
    frame["label"] = ds.labels
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False)
    return path


def example_single_search():
    """Example: one PB-TADE search with four concurrent evaluations."""
    ds = make_planted_dataset(nrows=600, nfeat=40, informative=5, seed=11)
    split = stratified_split(ds, ratio=0.8, seed=0)
    cfg = EngineConfig(algorithm="pbtade", parallelism=4, master_seed=3)

    result = run_search(cfg, split)
    print(f"best test AUC {result.best.test_auc.auc:.4f} using {list(result.best.selected_ids)}")
    return result


def example_campaign(data_path: Path):
    """Example: a three-algorithm campaign with reports under results/example."""
    cfg = ExperimentConfig(
        data_path=data_path,
        runs=5,
        output_dir=Path("results/example"),
        engine=EngineConfig(max_iter1=5, max_iter2=5, parallelism=2),
    )
    results = run_experiment(cfg)
    for algorithm, runs in results.items():
        aucs = [r.best.test_auc.auc for r in runs]
        print(f"{algorithm.label}: mean best test AUC {sum(aucs) / len(aucs):.4f}")
    return results


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description="evofss examples")
    parser.add_argument("--write-data", type=Path, help="Only write the planted CSV to this path")
    args = parser.parse_args()

    if args.write_data:
        write_planted_csv(args.write_data)
    else:
        example_single_search()
        example_campaign(write_planted_csv(Path("data/planted.csv")))
