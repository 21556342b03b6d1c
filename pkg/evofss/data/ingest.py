"""Dataset loading, encoding, stratified splitting and column projection."""

import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from ..core.errors import DataError

logger = logging.getLogger(__name__)

NUMERIC = "numeric"
CATEGORICAL = "categorical"


@dataclass(frozen=True)
class RawColumn:
    """One input column before encoding."""
    name: str
    kind: str  # numeric | categorical
    values: Tuple[Any, ...]

    @property
    def levels(self) -> List[str]:
        """Categorical levels in first-appearance order."""
        return list(pd.unique(pd.Series(self.values, dtype=object)))


@dataclass(frozen=True, eq=False)
class Dataset:
    """Dense numeric feature matrix with binary labels."""
    feature_names: Tuple[str, ...]
    matrix: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        matrix = np.array(self.matrix, dtype=np.float64)
        labels = np.array(self.labels, dtype=np.int64)
        if matrix.ndim != 2:
            raise DataError(f"Feature matrix must be 2-D, got shape {matrix.shape}")
        if matrix.shape[1] != len(self.feature_names):
            raise DataError(
                f"Matrix width {matrix.shape[1]} does not match "
                f"{len(self.feature_names)} feature names"
            )
        if labels.shape != (matrix.shape[0],):
            raise DataError(f"Expected {matrix.shape[0]} labels, got {labels.shape[0]}")
        if labels.size and not np.isin(labels, (0, 1)).all():
            raise DataError("Labels must be 0/1")
        if np.isnan(matrix).any():
            raise DataError("Feature matrix contains missing values")
        matrix.setflags(write=False)
        labels.setflags(write=False)
        object.__setattr__(self, "feature_names", tuple(self.feature_names))
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "labels", labels)

    @property
    def nfeat(self) -> int:
        return self.matrix.shape[1]

    @property
    def nrows(self) -> int:
        return self.matrix.shape[0]

    def class_counts(self) -> Tuple[int, int]:
        """(negatives, positives)."""
        positives = int(self.labels.sum())
        return self.nrows - positives, positives

    def take(self, rows: np.ndarray) -> "Dataset":
        return Dataset(self.feature_names, self.matrix[rows], self.labels[rows])

    def equals(self, other: "Dataset") -> bool:
        return (
            self.feature_names == other.feature_names
            and np.array_equal(self.matrix, other.matrix)
            and np.array_equal(self.labels, other.labels)
        )


@dataclass(frozen=True)
class SplitPair:
    """Stratified train/test partitions of one source dataset."""
    train: Dataset
    test: Dataset
    ratio: float


def map_binary_labels(raw_labels: Sequence[str]) -> np.ndarray:
    """
    Map two distinct raw labels onto {0, 1}.

    The lexicographically larger raw label becomes 1, so ``"pos"`` beats
    ``"neg"`` and ``"9"`` beats ``"10"``.

    Raises:
        DataError: If the labels do not take exactly two distinct values
    """
    distinct = sorted(set(raw_labels))
    if len(distinct) != 2:
        raise DataError(f"non-binary labels: found {len(distinct)} distinct values {distinct[:5]}")
    positive = distinct[1]
    return np.array([1 if v == positive else 0 for v in raw_labels], dtype=np.int64)


def load_csv(
    path: Union[str, Path], label_column: str, header: bool = True
) -> Tuple[List[RawColumn], np.ndarray]:
    """
    Load a CSV file into typed raw columns plus 0/1 labels.

    Columns whose cells all parse as decimal numbers are numeric; all others
    are categorical. Without a header, columns are named ``c0``, ``c1``, ...
    and ``label_column`` may be given as a name or a zero-based index.

    Raises:
        FileNotFoundError: If the file doesn't exist
        DataError: On a missing label column, ragged rows, missing cells or
            labels that are not binary
    """
    csv_path = Path(path)
    if not csv_path.exists():
        raise FileNotFoundError(f"Dataset not found: {path}")

    try:
        frame = pd.read_csv(
            csv_path,
            header=0 if header else None,
            dtype=str,
            keep_default_na=False,
            encoding="utf-8",
        )
    except pd.errors.ParserError as e:
        raise DataError(f"ragged rows in {csv_path.name}: {e}")
    except pd.errors.EmptyDataError:
        raise DataError(f"{csv_path.name} contains no rows")

    if not header:
        frame.columns = [f"c{i}" for i in range(frame.shape[1])]
        if label_column.isdigit():
            label_column = f"c{label_column}"
    frame.columns = [str(c).strip() for c in frame.columns]

    if label_column not in frame.columns:
        raise DataError(f"Label column '{label_column}' not found in {csv_path.name}")
    if frame.isna().to_numpy().any():
        raise DataError(f"ragged rows in {csv_path.name}: some rows have too few fields")

    cells = frame.apply(lambda col: col.str.strip())
    empty = cells.eq("")
    if empty.to_numpy().any():
        row, col = np.argwhere(empty.to_numpy())[0]
        raise DataError(
            f"missing value in column '{cells.columns[col]}' at data row {row + 1}; "
            "missing values are not imputed"
        )

    labels = map_binary_labels(cells[label_column].tolist())

    columns = []
    for name in cells.columns:
        if name == label_column:
            continue
        numeric = pd.to_numeric(cells[name], errors="coerce")
        if numeric.notna().all():
            columns.append(RawColumn(name, NUMERIC, tuple(numeric.astype(float).tolist())))
        else:
            columns.append(RawColumn(name, CATEGORICAL, tuple(cells[name].tolist())))

    logger.info(
        "Loaded %s: %d rows, %d columns (%d categorical)",
        csv_path.name,
        len(labels),
        len(columns),
        sum(c.kind == CATEGORICAL for c in columns),
    )
    return columns, labels


def _parse_libsvm_label(token: str, lineno: int) -> int:
    try:
        value = float(token.replace("−", "-"))
    except ValueError:
        raise DataError(f"line {lineno}: label '{token}' is not a number")
    if value == 1.0:
        return 1
    if value in (0.0, -1.0):
        return 0
    raise DataError(f"line {lineno}: label '{token}' is not in {{-1,+1}} or {{0,1}}")


def load_libsvm(path: Union[str, Path], nfeat_hint: Optional[int] = None) -> Dataset:
    """
    Load a LIBSVM-format file (``label idx:val ...``, 1-based indices) densely.

    Absent indices are filled with 0. Labels -1/+1 and 0/1 both map to 0/1.

    Raises:
        FileNotFoundError: If the file doesn't exist
        DataError: On malformed tokens, non-increasing indices or an index
            beyond ``nfeat_hint``
    """
    svm_path = Path(path)
    if not svm_path.exists():
        raise FileNotFoundError(f"Dataset not found: {path}")

    labels: List[int] = []
    rows: List[Tuple[List[int], List[float]]] = []
    max_index = 0

    with open(svm_path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            tokens = line.split()
            labels.append(_parse_libsvm_label(tokens[0], lineno))

            indices: List[int] = []
            values: List[float] = []
            for token in tokens[1:]:
                idx_text, sep, val_text = token.partition(":")
                if not sep:
                    raise DataError(f"line {lineno}: malformed pair '{token}'")
                try:
                    idx = int(idx_text)
                    val = float(val_text)
                except ValueError:
                    raise DataError(f"line {lineno}: malformed pair '{token}'")
                if idx < 1:
                    raise DataError(f"line {lineno}: indices are 1-based, got {idx}")
                if indices and idx <= indices[-1]:
                    raise DataError(f"line {lineno}: indices not increasing ({indices[-1]} then {idx})")
                if nfeat_hint is not None and idx > nfeat_hint:
                    raise DataError(f"line {lineno}: index {idx} exceeds nfeat_hint={nfeat_hint}")
                indices.append(idx)
                values.append(val)
            if indices:
                max_index = max(max_index, indices[-1])
            rows.append((indices, values))

    if not rows:
        raise DataError(f"{svm_path.name} contains no rows")

    nfeat = nfeat_hint if nfeat_hint is not None else max_index
    matrix = np.zeros((len(rows), nfeat), dtype=np.float64)
    for r, (indices, values) in enumerate(rows):
        if indices:
            matrix[r, np.asarray(indices) - 1] = values

    logger.info("Loaded %s: %d rows, %d features", svm_path.name, len(rows), nfeat)
    return Dataset(tuple(f"x{i}" for i in range(1, nfeat + 1)), matrix, np.asarray(labels))


def one_hot_encode(columns: Sequence[RawColumn], labels: Sequence[int]) -> Dataset:
    """
    Expand categorical columns into ``col=level`` indicator features.

    Numeric columns pass through unchanged; feature order follows the input
    column order, with each categorical block in first-appearance level order.

    Raises:
        DataError: If no columns are given or row counts differ
    """
    if not columns:
        raise DataError("one_hot_encode needs at least one column")
    nrows = len(labels)
    if any(len(col.values) != nrows for col in columns):
        raise DataError("all columns must have the same row count as the labels")

    names: List[str] = []
    blocks: List[np.ndarray] = []
    for col in columns:
        if col.kind == NUMERIC:
            names.append(col.name)
            blocks.append(np.asarray(col.values, dtype=np.float64).reshape(-1, 1))
            continue

        levels = col.levels
        if len(levels) == 1:
            logger.warning("Column '%s' has a single level '%s'", col.name, levels[0])
        categorical = pd.Categorical(list(col.values), categories=levels)
        indicators = pd.get_dummies(categorical, dtype=np.float64)
        names.extend(f"{col.name}={level}" for level in levels)
        blocks.append(indicators.to_numpy())

    matrix = np.hstack(blocks) if blocks else np.empty((nrows, 0))
    return Dataset(tuple(names), matrix, np.asarray(labels))


def load_dataset(
    path: Union[str, Path],
    data_format: str = "csv",
    label_column: str = "label",
    header: bool = True,
    nfeat_hint: Optional[int] = None,
) -> Dataset:
    """Load and encode a dataset in either supported format."""
    if data_format == "libsvm":
        return load_libsvm(path, nfeat_hint=nfeat_hint)
    if data_format == "csv":
        columns, labels = load_csv(path, label_column, header=header)
        return one_hot_encode(columns, labels)
    raise DataError(f"Unknown data format '{data_format}' (expected csv or libsvm)")


def _train_quotas(class_counts: Sequence[int], ratio: float) -> List[int]:
    """Largest-remainder allocation of training rows per class."""
    total = int(math.floor(ratio * sum(class_counts) + 0.5))
    exact = [ratio * count for count in class_counts]
    quotas = [int(math.floor(q)) for q in exact]
    seats = total - sum(quotas)
    order = sorted(range(len(exact)), key=lambda c: (-(exact[c] - quotas[c]), c))
    for c in order[:max(seats, 0)]:
        quotas[c] += 1
    # Both partitions keep every class.
    return [min(max(q, 1), count - 1) for q, count in zip(quotas, class_counts)]


def stratified_split(ds: Dataset, ratio: float = 0.8, seed: int = 0) -> SplitPair:
    """
    Split a dataset into stratified train/test partitions.

    Raises:
        DataError: If the ratio is outside (0, 1) or a class has fewer than 2 rows
    """
    if not 0.0 < ratio < 1.0:
        raise DataError(f"split ratio must be in (0, 1), got {ratio}")
    counts = ds.class_counts()
    for label, count in enumerate(counts):
        if count < 2:
            raise DataError(f"class {label} has {count} rows; stratified split needs >= 2")

    rng = np.random.default_rng(seed)
    quotas = _train_quotas(counts, ratio)
    train_rows, test_rows = [], []
    for label, quota in enumerate(quotas):
        members = rng.permutation(np.flatnonzero(ds.labels == label))
        train_rows.append(members[:quota])
        test_rows.append(members[quota:])

    train_idx = rng.permutation(np.concatenate(train_rows))
    test_idx = rng.permutation(np.concatenate(test_rows))
    return SplitPair(train=ds.take(train_idx), test=ds.take(test_idx), ratio=ratio)


def project_columns(ds: Dataset, mask: Any) -> Dataset:
    """
    Keep exactly the columns whose mask bit is set, in original order.

    ``mask`` may be a FeatureMask or any 0/1 sequence.

    Raises:
        DataError: On a length mismatch or an all-zero mask
    """
    bits = np.asarray(getattr(mask, "bits", mask), dtype=bool)
    if bits.shape != (ds.nfeat,):
        raise DataError(f"mask length {bits.size} does not match nfeat={ds.nfeat}")
    if not bits.any():
        raise DataError("empty subset: the mask selects no features")
    names = tuple(name for name, keep in zip(ds.feature_names, bits) if keep)
    return Dataset(names, ds.matrix[:, bits], ds.labels)
