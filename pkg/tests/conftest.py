import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from fairmoea.data import EncodedDataset, load_dataset, make_split_bundle, split
from fairmoea.datagen import credit_schema, make_credit_frame

settings.register_profile(
    "default", max_examples=50, suppress_health_check=[HealthCheck.too_slow],
    deadline=None,
)
settings.load_profile("default")


def make_dataset(features, labels, groups) -> EncodedDataset:
    features = np.asarray(features, dtype=float)
    return EncodedDataset(
        features=features,
        labels=np.asarray(labels, dtype=np.int64),
        groups=np.asarray(groups, dtype=np.int64),
        feature_names=[f"x{i}" for i in range(features.shape[1])],
    )


def random_dataset(rng, n=60, d=5) -> EncodedDataset:
    features = rng.normal(size=(n, d))
    labels = rng.integers(0, 2, n)
    groups = np.zeros(n, dtype=np.int64)
    groups[rng.choice(n, n // 2, replace=False)] = 1
    return make_dataset(features, labels, groups)


@pytest.fixture(scope="session")
def credit_files(tmp_path_factory):
    """A 1000-row synthetic credit CSV plus its schema file."""
    root = tmp_path_factory.mktemp("credit")
    csv_path = root / "credit.csv"
    schema_path = root / "credit.schema.json"
    make_credit_frame(1000, seed=20240).to_csv(csv_path, index=False)
    credit_schema().to_json(schema_path)
    return csv_path, schema_path


@pytest.fixture(scope="session")
def credit_bundle(credit_files):
    csv_path, _ = credit_files
    schema = credit_schema()
    raw = load_dataset(csv_path, schema)
    train, val, test = split(len(raw), seed=7)
    return make_split_bundle(raw, schema, train, val, test, 7)
