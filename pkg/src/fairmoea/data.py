"""Tabular dataset loading, encoding and reproducible splitting.

A dataset is a CSV file with a header row plus a JSON schema that assigns
each column a role (numeric-feature, categorical-feature, label or
sensitive) and names the positive label value and the privileged group
value. Encoding standardizes numeric features with train-split statistics
and one-hot encodes categoricals; splits are plain uniform-random 6:2:2
(train gets floor(0.6 N), validation floor(0.2 N), test the remainder).
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from .errors import MalformedCsv, SchemaMismatch

NUMERIC = "numeric-feature"
CATEGORICAL = "categorical-feature"
LABEL = "label"
SENSITIVE = "sensitive"

_ROLES = {NUMERIC, CATEGORICAL, LABEL, SENSITIVE}

UNPRIVILEGED = 0
PRIVILEGED = 1

MISSING_CATEGORY = "__missing__"


@dataclass(frozen=True)
class DatasetSchema:
    """Column roles plus the values that define the positive label and the
    privileged group."""

    column_roles: dict[str, str]
    positive_label_value: str
    privileged_value: str

    def __post_init__(self):
        unknown = {r for r in self.column_roles.values() if r not in _ROLES}
        if unknown:
            raise SchemaMismatch(f"unknown column roles: {sorted(unknown)}")
        if len(self.columns_with_role(LABEL)) != 1:
            raise SchemaMismatch("schema must declare exactly one label column")
        if len(self.columns_with_role(SENSITIVE)) != 1:
            raise SchemaMismatch("schema must declare exactly one sensitive column")

    def columns_with_role(self, role: str) -> list[str]:
        return [c for c, r in self.column_roles.items() if r == role]

    @property
    def label_column(self) -> str:
        return self.columns_with_role(LABEL)[0]

    @property
    def sensitive_column(self) -> str:
        return self.columns_with_role(SENSITIVE)[0]

    @classmethod
    def from_json(cls, path) -> "DatasetSchema":
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
        try:
            return cls(
                column_roles=dict(raw["columns"]),
                positive_label_value=str(raw["positive_label_value"]),
                privileged_value=str(raw["privileged_value"]),
            )
        except KeyError as exc:
            raise SchemaMismatch(f"schema file missing key {exc}") from None

    def to_json(self, path) -> None:
        payload = {
            "columns": self.column_roles,
            "positive_label_value": self.positive_label_value,
            "privileged_value": self.privileged_value,
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")


@dataclass
class RawTable:
    """In-memory table after CSV load, before encoding."""

    frame: pd.DataFrame
    dropped_rows: int  # rows discarded for missing label/sensitive cells

    def __len__(self) -> int:
        return len(self.frame)


@dataclass
class EncodedDataset:
    """Numeric design matrix with binary labels and binary group tags.

    groups holds PRIVILEGED (1) / UNPRIVILEGED (0) per row.
    """

    features: np.ndarray
    labels: np.ndarray
    groups: np.ndarray
    feature_names: list[str]
    dropped_columns: list[str] = field(default_factory=list)

    def __len__(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    def subset(self, indices) -> "EncodedDataset":
        idx = np.asarray(indices, dtype=int)
        return EncodedDataset(
            features=self.features[idx],
            labels=self.labels[idx],
            groups=self.groups[idx],
            feature_names=self.feature_names,
            dropped_columns=self.dropped_columns,
        )


@dataclass
class SplitBundle:
    train: EncodedDataset
    validation: EncodedDataset
    test: EncodedDataset
    seed: int


def load_dataset(path, schema: DatasetSchema) -> RawTable:
    """Load a CSV, validate it against the schema, and drop rows whose label
    or sensitive cell is missing (the count is kept on the returned table)."""
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=True, skipinitialspace=True)
    except (pd.errors.ParserError, UnicodeDecodeError) as exc:
        raise MalformedCsv(f"{path}: {exc}") from exc
    if frame.columns.duplicated().any():
        raise MalformedCsv(f"{path}: duplicated header columns")
    missing = set(schema.column_roles) - set(frame.columns)
    if missing:
        raise SchemaMismatch(f"columns declared in schema but absent from CSV: {sorted(missing)}")

    keep = frame[schema.label_column].notna() & frame[schema.sensitive_column].notna()
    dropped = int((~keep).sum())
    frame = frame.loc[keep].reset_index(drop=True)
    return RawTable(frame=frame, dropped_rows=dropped)


def preprocess(raw: RawTable, schema: DatasetSchema, train_row_indices) -> EncodedDataset:
    """Encode the full table; all statistics come from train_row_indices only.

    Numeric features: missing values imputed with the train mean, then
    standardized by train mean/std. Zero-variance (on train rows) numeric
    columns are dropped with a warning. Categorical features: missing
    becomes its own category; one-hot columns cover every value observed
    anywhere in the table so the width is split-independent.
    """
    train_idx = np.asarray(sorted(train_row_indices), dtype=int)
    if train_idx.size == 0:
        raise ValueError("train_row_indices must be nonempty")
    frame = raw.frame

    sensitive = frame[schema.sensitive_column].astype(str)
    if schema.privileged_value not in set(sensitive):
        raise SchemaMismatch(
            f"privileged value {schema.privileged_value!r} never occurs in "
            f"column {schema.sensitive_column!r}"
        )
    groups = np.where(sensitive.to_numpy() == schema.privileged_value, PRIVILEGED, UNPRIVILEGED)
    labels = (frame[schema.label_column].astype(str).to_numpy() == schema.positive_label_value)

    blocks: list[np.ndarray] = []
    names: list[str] = []
    dropped_cols: list[str] = []
    for col in frame.columns:
        role = schema.column_roles.get(col)
        if role == NUMERIC:
            values = pd.to_numeric(frame[col], errors="coerce").to_numpy(dtype=float)
            train_vals = values[train_idx]
            mean = np.nanmean(train_vals)
            if np.isnan(mean):
                mean = 0.0
            values = np.where(np.isnan(values), mean, values)
            std = float(np.std(values[train_idx]))
            if std == 0.0:
                dropped_cols.append(col)
                warnings.warn(
                    f"numeric column {col!r} is constant on the train rows; dropped",
                    stacklevel=2,
                )
                continue
            blocks.append(((values - float(np.mean(values[train_idx]))) / std)[:, None])
            names.append(col)
        elif role == CATEGORICAL:
            values = frame[col].astype(object).where(frame[col].notna(), MISSING_CATEGORY)
            values = values.astype(str).to_numpy()
            categories = sorted(set(values))
            for cat in categories:
                blocks.append((values == cat).astype(float)[:, None])
                names.append(f"{col}={cat}")

    if blocks:
        features = np.hstack(blocks)
    else:
        features = np.zeros((len(frame), 0))
    return EncodedDataset(
        features=features,
        labels=labels.astype(np.int64),
        groups=groups.astype(np.int64),
        feature_names=names,
        dropped_columns=dropped_cols,
    )


def split(dataset_size: int, ratios=(0.6, 0.2, 0.2), seed: int = 0):
    """Uniform random 6:2:2 split. Train gets floor(r0*N), validation
    floor(r1*N), test the remainder. Deterministic for a fixed seed."""
    if dataset_size < 10:
        raise ValueError("need at least 10 rows to split 6:2:2")
    rng = np.random.default_rng(seed)
    order = rng.permutation(dataset_size)
    n_train = int(np.floor(ratios[0] * dataset_size))
    n_val = int(np.floor(ratios[1] * dataset_size))
    train = np.sort(order[:n_train])
    val = np.sort(order[n_train:n_train + n_val])
    test = np.sort(order[n_train + n_val:])
    return train, val, test


def kfold(dataset_size: int, k: int, seed: int = 0):
    """k disjoint holdout folds covering 0..N-1, sizes differing by <= 1.

    Returns a list of (train_indices, holdout_indices) pairs.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    if dataset_size < k:
        raise ValueError("need at least k rows")
    rng = np.random.default_rng(seed)
    order = rng.permutation(dataset_size)
    folds = []
    bounds = np.linspace(0, dataset_size, k + 1).astype(int)
    for i in range(k):
        holdout = np.sort(order[bounds[i]:bounds[i + 1]])
        train = np.sort(np.concatenate([order[:bounds[i]], order[bounds[i + 1]:]]))
        folds.append((train, holdout))
    return folds


def make_split_bundle(raw: RawTable, schema: DatasetSchema, train_idx, val_idx,
                      test_idx, seed: int) -> SplitBundle:
    """Encode with train statistics and slice into the three partitions."""
    encoded = preprocess(raw, schema, train_idx)
    return SplitBundle(
        train=encoded.subset(train_idx),
        validation=encoded.subset(val_idx),
        test=encoded.subset(test_idx),
        seed=seed,
    )
