"""Data model and summary statistics for single-factor repeated-measures designs.

A design is an N x C matrix of responses: one row per subject, one column per
condition, no missing cells.  Everything the interval estimators consume is
derived here: condition/subject/grand means, the sum-of-squares decomposition

    SS_total = SS_conditions + SS_subjects + SS_interaction,

per-condition sample variances, the subject-effect estimates M_i. - M, and the
standardization transform Y'_ij = Y_ij - M_i. + M that removes subject main
effects while preserving condition means.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import InvalidTableError

__all__ = [
    "RepeatedMeasuresTable",
    "SummaryStats",
    "StandardizedTable",
    "summarize",
    "standardize",
    "random_effect_mles",
]


def _as_matrix(values: object) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 2:
        raise InvalidTableError(f"expected a 2-D response matrix, got shape {arr.shape}")
    return arr


@dataclass(frozen=True)
class RepeatedMeasuresTable:
    """Complete N x C response matrix with subject and condition labels.

    Parameters
    ----------
    values : array-like, shape (N, C)
        Responses; rows are subjects, columns are conditions.
    subject_ids : sequence of str, length N
        Distinct subject labels.
    condition_labels : sequence of str, length C
        Distinct condition labels.
    """

    values: np.ndarray
    subject_ids: tuple[str, ...]
    condition_labels: tuple[str, ...]

    def __init__(
        self,
        values: object,
        subject_ids: Sequence[str] | None = None,
        condition_labels: Sequence[str] | None = None,
    ):
        arr = _as_matrix(values)
        n, c = arr.shape
        if n < 2 or c < 2:
            raise InvalidTableError(
                f"need at least 2 subjects and 2 conditions, got {n} x {c}"
            )
        if not np.all(np.isfinite(arr)):
            raise InvalidTableError("response matrix contains NaN or infinite cells")
        subjects = tuple(str(s) for s in subject_ids) if subject_ids is not None else tuple(
            f"S{i + 1}" for i in range(n)
        )
        conditions = tuple(str(s) for s in condition_labels) if condition_labels is not None else tuple(
            f"C{j + 1}" for j in range(c)
        )
        if len(subjects) != n:
            raise InvalidTableError(f"{len(subjects)} subject ids for {n} rows")
        if len(conditions) != c:
            raise InvalidTableError(f"{len(conditions)} condition labels for {c} columns")
        if len(set(subjects)) != n:
            raise InvalidTableError("subject ids are not unique")
        if len(set(conditions)) != c:
            raise InvalidTableError("condition labels are not unique")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)
        object.__setattr__(self, "subject_ids", subjects)
        object.__setattr__(self, "condition_labels", conditions)

    @property
    def n_subjects(self) -> int:
        return self.values.shape[0]

    @property
    def n_conditions(self) -> int:
        return self.values.shape[1]

    def condition_index(self, label: str) -> int:
        """Map a condition label to its 0-based column index."""
        try:
            return self.condition_labels.index(label)
        except ValueError:
            raise InvalidTableError(
                f"unknown condition {label!r}; available: {', '.join(self.condition_labels)}"
            ) from None


@dataclass(frozen=True)
class SummaryStats:
    """Means and sum-of-squares decomposition of a repeated-measures table.

    ``ss_interaction`` is the subject-by-condition interaction sum of squares,
    the sole variance component behind the within-subject interval widths.
    ``condition_variances`` are sample variances with denominator N - 1.
    """

    condition_means: tuple[float, ...]
    subject_means: tuple[float, ...]
    grand_mean: float
    ss_total: float
    ss_conditions: float
    ss_subjects: float
    ss_interaction: float
    condition_variances: tuple[float, ...]

    @property
    def n_subjects(self) -> int:
        return len(self.subject_means)

    @property
    def n_conditions(self) -> int:
        return len(self.condition_means)


@dataclass(frozen=True)
class StandardizedTable:
    """Subject-centered responses Y'_ij = Y_ij - M_i. + M.

    Every row mean equals the source grand mean; every column mean equals the
    corresponding original condition mean.
    """

    values: np.ndarray = field(repr=False)
    source_stats: SummaryStats

    def __post_init__(self):
        arr = _as_matrix(self.values).copy()
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    @property
    def n_subjects(self) -> int:
        return self.values.shape[0]

    @property
    def n_conditions(self) -> int:
        return self.values.shape[1]


def summarize(table: RepeatedMeasuresTable) -> SummaryStats:
    """Compute all means and the full sum-of-squares decomposition.

    Sums of squares use the numerically stable two-pass form (deviations from
    means).  The raw-moment identity

        SS_SxC = sum Y^2 - C sum M_i.^2 - N sum M_.j^2 + C N M^2

    cancels catastrophically for large offsets, so it serves only as an
    internal cross-check at a tolerance widened by a cancellation floor.
    """
    y = table.values
    n, c = y.shape
    grand = float(y.mean())
    cond_means = y.mean(axis=0)
    subj_means = y.mean(axis=1)

    ss_total = float(((y - grand) ** 2).sum())
    ss_conditions = float(n * ((cond_means - grand) ** 2).sum())
    ss_subjects = float(c * ((subj_means - grand) ** 2).sum())
    resid = y - subj_means[:, None] - cond_means[None, :] + grand
    ss_interaction = float((resid ** 2).sum())

    # Additivity of the two-pass pieces.
    scale = max(ss_total, 1.0)
    gap = abs(ss_total - ss_conditions - ss_subjects - ss_interaction)
    if gap > 1e-9 * scale:
        raise AssertionError(
            f"SS decomposition failed: |SS_T - SS_C - SS_S - SS_SxC| = {gap:.3e}"
        )

    # Raw-moment cross-check.  The floor covers unavoidable rounding when the
    # four terms are large and nearly cancel.
    terms = (
        float((y ** 2).sum()),
        float(c * (subj_means ** 2).sum()),
        float(n * (cond_means ** 2).sum()),
        float(c * n * grand ** 2),
    )
    raw = terms[0] - terms[1] - terms[2] + terms[3]
    floor = 16.0 * n * c * np.finfo(float).eps * sum(abs(t) for t in terms)
    if abs(raw - ss_interaction) > max(1e-6 * max(ss_interaction, 1e-300), floor):
        raise AssertionError(
            f"raw-moment SS_SxC cross-check failed: {raw!r} vs {ss_interaction!r}"
        )

    return SummaryStats(
        condition_means=tuple(float(m) for m in cond_means),
        subject_means=tuple(float(m) for m in subj_means),
        grand_mean=grand,
        ss_total=ss_total,
        ss_conditions=ss_conditions,
        ss_subjects=ss_subjects,
        ss_interaction=ss_interaction,
        condition_variances=tuple(float(v) for v in y.var(axis=0, ddof=1)),
    )


def standardize(table: RepeatedMeasuresTable) -> StandardizedTable:
    """Remove subject main effects: Y'_ij = Y_ij - M_i. + M."""
    stats = summarize(table)
    subj_means = np.asarray(stats.subject_means)
    values = table.values - subj_means[:, None] + stats.grand_mean
    return StandardizedTable(values=values, source_stats=stats)


def random_effect_mles(table: RepeatedMeasuresTable) -> np.ndarray:
    """Maximum likelihood estimates of the subject effects, b_i = M_i. - M.

    The entries sum to zero by construction.
    """
    subj_means = table.values.mean(axis=1)
    return subj_means - table.values.mean()
