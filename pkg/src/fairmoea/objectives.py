"""Names and index layout of the 26 minimized objectives.

The objective vector is ordered [ce, f1, ..., f25]: index 0 is the
cross-entropy of the classifier, indices 1..25 are the transformed
fairness objectives (optimum 0 for all of them).
"""

N_OBJECTIVES = 26

OBJECTIVE_NAMES = ["ce"] + [f"f{k}" for k in range(1, 26)]

# Raw (untransformed) fairness measure names, in f1..f25 order.
MEASURE_NAMES = [
    "tpr_diff",
    "fpr_diff",
    "fnr_diff",
    "for_diff",
    "fdr_diff",
    "err_diff",
    "fpr_ratio",
    "fnr_ratio",
    "for_ratio",
    "fdr_ratio",
    "err_ratio",
    "avg_odds_diff",
    "avg_abs_odds_diff",
    "disparate_impact",
    "stat_parity_diff",
    "gen_entropy_index",
    "between_all_groups_gei",
    "between_group_gei",
    "theil_index",
    "coef_of_variation",
    "between_group_theil",
    "between_group_cov",
    "between_all_groups_theil",
    "between_all_groups_cov",
    "df_bias_amplification",
]

FULL_MASK = tuple(range(N_OBJECTIVES))


def parse_mask(text: str) -> tuple[int, ...]:
    """Parse a comma-separated objective list, accepting names or indices.

    ``"ce,f4,f7"`` and ``"0,4,7"`` both map to ``(0, 4, 7)``.
    """
    indices = set()
    for token in text.split(","):
        token = token.strip().lower()
        if not token:
            continue
        if token in OBJECTIVE_NAMES:
            indices.add(OBJECTIVE_NAMES.index(token))
        else:
            try:
                idx = int(token)
            except ValueError:
                raise ValueError(f"unknown objective {token!r}") from None
            if not 0 <= idx < N_OBJECTIVES:
                raise ValueError(f"objective index {idx} out of range 0..25")
            indices.add(idx)
    if not indices:
        raise ValueError("empty objective mask")
    return tuple(sorted(indices))


def mask_to_row(mask) -> list[int]:
    """Binary indicator row (length 26) for a mask, for mask.csv logging."""
    active = set(mask)
    return [1 if i in active else 0 for i in range(N_OBJECTIVES)]
