"""Synthetic credit-scoring style datasets for demos and tests.

Rows mix numeric and categorical features, a binary sensitive attribute
and a binary label whose odds depend on the features and, through a
controllable shift, on the group, so the fairness measures have signal.
"""

from __future__ import annotations

import numpy as np
import pandas as pd

from .data import CATEGORICAL, LABEL, NUMERIC, SENSITIVE, DatasetSchema

_HOUSING = ["own", "rent", "free"]
_PURPOSE = ["car", "appliances", "education", "business"]
_SAVINGS = ["low", "medium", "high"]


def credit_schema() -> DatasetSchema:
    return DatasetSchema(
        column_roles={
            "age": NUMERIC,
            "credit_amount": NUMERIC,
            "duration_months": NUMERIC,
            "employment_years": NUMERIC,
            "installment_rate": NUMERIC,
            "housing": CATEGORICAL,
            "purpose": CATEGORICAL,
            "savings": CATEGORICAL,
            "sex": SENSITIVE,
            "credit_risk": LABEL,
        },
        positive_label_value="good",
        privileged_value="male",
    )


def make_credit_frame(n: int = 1000, seed: int = 0, group_shift: float = 0.9,
                      missing_rate: float = 0.0) -> pd.DataFrame:
    """Generate n rows; group_shift tilts the label odds toward the
    privileged group, missing_rate blanks random feature cells."""
    rng = np.random.default_rng(seed)
    sex = rng.choice(["male", "female"], size=n, p=[0.55, 0.45])
    age = np.clip(rng.normal(36, 11, n), 18, 75).round(0)
    amount = np.exp(rng.normal(7.6, 0.8, n)).round(0)
    duration = rng.integers(6, 61, n)
    employment = np.clip(rng.normal(7, 5, n), 0, 40).round(1)
    installment = rng.integers(1, 5, n)
    housing = rng.choice(_HOUSING, size=n, p=[0.55, 0.35, 0.1])
    purpose = rng.choice(_PURPOSE, size=n)
    savings = rng.choice(_SAVINGS, size=n, p=[0.5, 0.3, 0.2])

    score = (
        0.035 * (age - 36)
        - 0.45 * (np.log(amount) - 7.6)
        - 0.03 * (duration - 33)
        + 0.06 * (employment - 7)
        - 0.15 * (installment - 2.5)
        + 0.4 * (housing == "own")
        + 0.3 * (savings == "high")
        - 0.2 * (savings == "low")
        + group_shift * (sex == "male")
        + rng.normal(0, 1.0, n)
    )
    label = np.where(score > np.median(score) - 0.35, "good", "bad")

    frame = pd.DataFrame({
        "age": age,
        "credit_amount": amount,
        "duration_months": duration,
        "employment_years": employment,
        "installment_rate": installment,
        "housing": housing,
        "purpose": purpose,
        "savings": savings,
        "sex": sex,
        "credit_risk": label,
    })
    if missing_rate > 0:
        feature_cols = [c for c in frame.columns if c not in ("sex", "credit_risk")]
        for col in feature_cols:
            blank = rng.random(n) < missing_rate
            frame.loc[blank, col] = np.nan
    return frame


def write_credit_dataset(csv_path, schema_path, n: int = 1000, seed: int = 0,
                         group_shift: float = 0.9, missing_rate: float = 0.0) -> None:
    frame = make_credit_frame(n=n, seed=seed, group_shift=group_shift,
                              missing_rate=missing_rate)
    frame.to_csv(csv_path, index=False)
    credit_schema().to_json(schema_path)
