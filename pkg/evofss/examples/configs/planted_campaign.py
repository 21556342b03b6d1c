"""Small campaign on a planted dataset, run inline on this machine."""

from pathlib import Path

from evofss import EngineConfig, ExperimentConfig

# Write the dataset first with: python -m evofss.examples.basic --write-data data/planted.csv
config = ExperimentConfig(
    data_path=Path("data/planted.csv"),
    data_format="csv",
    label_column="label",
    runs=10,
    output_dir=Path("results/planted"),
    engine=EngineConfig(
        n=10,
        max_iter1=10,
        max_iter2=10,
        parallelism=4,
        master_seed=7,
    ),
)
