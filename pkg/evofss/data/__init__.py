"""Dataset ingestion and synthetic data."""

from .ingest import (
    Dataset,
    RawColumn,
    SplitPair,
    load_csv,
    load_dataset,
    load_libsvm,
    one_hot_encode,
    project_columns,
    stratified_split,
)
from .synthetic import make_planted_dataset

__all__ = [
    "Dataset",
    "RawColumn",
    "SplitPair",
    "load_csv",
    "load_dataset",
    "load_libsvm",
    "one_hot_encode",
    "project_columns",
    "stratified_split",
    "make_planted_dataset",
]
