"""Diagnostics for choosing between the homoscedastic and heteroscedastic methods.

Provides the repeated-measures ANOVA decomposition in tabular form and a
circularity advisory based on the spread of pairwise difference-score
variances and of per-condition variances.  The advisory is a heuristic with a
configurable ratio threshold; it always reports the raw numbers so the choice
stays with the analyst.  Formal sphericity tests are out of scope.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .summary import RepeatedMeasuresTable, SummaryStats, summarize

__all__ = [
    "AnovaSource",
    "AnovaRow",
    "AnovaTable",
    "anova_table",
    "anova_table_from_ss",
    "Advisory",
    "CircularityReport",
    "circularity_report",
]


class AnovaSource(enum.Enum):
    SUBJECTS = "Subjects"
    CONDITIONS = "Conditions"
    INTERACTION = "SxC"
    TOTAL = "Total"


@dataclass(frozen=True)
class AnovaRow:
    source: AnovaSource
    ss: float
    df: int
    ms: float | None
    f: float | None


@dataclass(frozen=True)
class AnovaTable:
    """Repeated-measures ANOVA rows: Subjects, Conditions, SxC, Total.

    Mean squares are reported for Conditions and SxC; F = MS_C / MS_SxC, or
    absent when the interaction mean square is zero.
    """

    rows: tuple[AnovaRow, ...]

    def row(self, source: AnovaSource) -> AnovaRow:
        for r in self.rows:
            if r.source is source:
                return r
        raise KeyError(source)

    @property
    def f_statistic(self) -> float | None:
        return self.row(AnovaSource.CONDITIONS).f


def _build_anova(
    ss_subjects: float,
    ss_conditions: float,
    ss_interaction: float,
    n_subjects: int,
    n_conditions: int,
) -> AnovaTable:
    n, c = n_subjects, n_conditions
    if n < 2 or c < 2:
        raise ValueError(f"need at least 2 subjects and 2 conditions, got {n}, {c}")
    for name, ss in (
        ("ss_subjects", ss_subjects),
        ("ss_conditions", ss_conditions),
        ("ss_interaction", ss_interaction),
    ):
        if ss < 0.0:
            raise ValueError(f"{name} must be nonnegative, got {ss}")
    df_subjects = n - 1
    df_conditions = c - 1
    df_interaction = (n - 1) * (c - 1)
    ms_conditions = ss_conditions / df_conditions
    ms_interaction = ss_interaction / df_interaction
    f = ms_conditions / ms_interaction if ms_interaction > 0.0 else None
    return AnovaTable(
        rows=(
            AnovaRow(AnovaSource.SUBJECTS, ss_subjects, df_subjects, None, None),
            AnovaRow(AnovaSource.CONDITIONS, ss_conditions, df_conditions, ms_conditions, f),
            AnovaRow(AnovaSource.INTERACTION, ss_interaction, df_interaction, ms_interaction, None),
            AnovaRow(
                AnovaSource.TOTAL,
                ss_subjects + ss_conditions + ss_interaction,
                n * c - 1,
                None,
                None,
            ),
        )
    )


def anova_table(stats: SummaryStats) -> AnovaTable:
    """ANOVA table from a summary decomposition."""
    return _build_anova(
        stats.ss_subjects,
        stats.ss_conditions,
        stats.ss_interaction,
        stats.n_subjects,
        stats.n_conditions,
    )


def anova_table_from_ss(
    ss_subjects: float,
    ss_conditions: float,
    ss_interaction: float,
    n_subjects: int,
    n_conditions: int,
) -> AnovaTable:
    """ANOVA table from already-known sums of squares.

    Useful for checking published tables when the raw data are unavailable.
    """
    return _build_anova(ss_subjects, ss_conditions, ss_interaction, n_subjects, n_conditions)


class Advisory(enum.Enum):
    HOMOSCEDASTIC_OK = "HomoscedasticOK"
    SUSPECT_HETEROSCEDASTICITY = "SuspectHeteroscedasticity"


@dataclass(frozen=True)
class CircularityReport:
    """Variance summaries driving the homoscedastic-versus-heteroscedastic call.

    ``pairwise_diff_variances`` maps condition-label pairs to the sample
    variance of the per-subject difference scores.  The advisory flags
    heteroscedasticity when either the pairwise ratio or the condition
    variance ratio exceeds the threshold.
    """

    condition_variances: tuple[float, ...]
    pairwise_diff_variances: dict[tuple[str, str], float]
    max_min_diff_variance_ratio: float
    max_min_condition_variance_ratio: float
    ratio_threshold: float
    advisory: Advisory


def _max_min_ratio(values: list[float]) -> float:
    hi, lo = max(values), min(values)
    if lo > 0.0:
        return hi / lo
    return 1.0 if hi == 0.0 else float("inf")


def circularity_report(
    table: RepeatedMeasuresTable, ratio_threshold: float = 3.0
) -> CircularityReport:
    """Summarize difference-score and condition variances and flag imbalance.

    The default threshold of 3.0 is a heuristic; the published motivating
    example has a pairwise ratio near 54, far above any sensible cutoff.
    """
    if not ratio_threshold > 0.0:
        raise ValueError(f"ratio_threshold must be positive, got {ratio_threshold}")
    y = table.values
    n, c = y.shape
    stats = summarize(table)

    pairwise: dict[tuple[str, str], float] = {}
    for j in range(c):
        for l in range(j + 1, c):
            d = y[:, j] - y[:, l]
            var_d = float(np.var(d, ddof=1))
            # Cross-check against s_j^2 + s_l^2 - 2 cov(j, l).
            cov = float(np.cov(y[:, j], y[:, l], ddof=1)[0, 1])
            identity = stats.condition_variances[j] + stats.condition_variances[l] - 2.0 * cov
            scale = max(
                stats.condition_variances[j] + stats.condition_variances[l] + 2.0 * abs(cov),
                1e-300,
            )
            if abs(var_d - identity) > 1e-9 * scale:
                raise AssertionError(
                    f"difference-variance identity failed for pair ({j}, {l}): "
                    f"{var_d!r} vs {identity!r}"
                )
            pairwise[(table.condition_labels[j], table.condition_labels[l])] = var_d

    diff_ratio = _max_min_ratio(list(pairwise.values()))
    cond_ratio = _max_min_ratio(list(stats.condition_variances))
    suspect = diff_ratio > ratio_threshold or cond_ratio > ratio_threshold
    return CircularityReport(
        condition_variances=stats.condition_variances,
        pairwise_diff_variances=pairwise,
        max_min_diff_variance_ratio=diff_ratio,
        max_min_condition_variance_ratio=cond_ratio,
        ratio_threshold=ratio_threshold,
        advisory=Advisory.SUSPECT_HETEROSCEDASTICITY if suspect else Advisory.HOMOSCEDASTIC_OK,
    )
