"""Interval estimators for condition means in repeated-measures designs.

All estimators return the same symmetric ``IntervalEstimate`` shape and are
pure functions of summary statistics (or the raw/standardized table).  The
family covers:

- the classical between-subject CI on pooled condition variances,
- the Loftus-Masson within-subject CI built on the interaction sum of squares,
- the within-subject Bayesian HDI (same center, strictly shorter),
- the per-condition heteroscedastic HDI from standardized scores, which
  coincides with the Cousineau (2005) / Morey (2008) style interval with
  N - 1 degrees of freedom and no correction factor,
- a large-sample (normal-quantile) HDI,
- pairwise difference CIs (pooled and per-pair), and
- the deterministic length ratio between the HDI and the Loftus-Masson CI.

Condition indices are 0-based throughout.
"""

from __future__ import annotations

import enum
import math

import numpy as np

from .estimate import IntervalEstimate, IntervalMethod
from .summary import RepeatedMeasuresTable, StandardizedTable, SummaryStats, summarize
from .tdist import normal_quantile, t_quantile

__all__ = [
    "DfChoice",
    "between_subject_ci",
    "loftus_masson_ci",
    "within_subject_hdi",
    "heteroscedastic_hdi",
    "nathoo_masson_hdi",
    "cousineau_morey_interval",
    "pairwise_difference_ci",
    "length_ratio",
]


class DfChoice(enum.Enum):
    """Degrees-of-freedom convention for standardized-score intervals."""

    N_MINUS_1 = "n-minus-1"
    C_TIMES_N_MINUS_1 = "c-times-n-minus-1"
    INTERACTION = "interaction"


def _criterion_t(df: int, level: float) -> float:
    if not 0.0 < level < 1.0:
        raise ValueError(f"level must be in (0, 1), got {level}")
    return t_quantile(df, 1.0 - (1.0 - level) / 2.0)


def _check_condition(j: int, n_conditions: int) -> int:
    if not 0 <= j < n_conditions:
        raise IndexError(f"condition index {j} out of range for {n_conditions} conditions")
    return j


def between_subject_ci(stats: SummaryStats, j: int, level: float = 0.95) -> IntervalEstimate:
    """Conventional CI treating conditions as independent groups.

    Pools the C within-condition sample variances (equal-variance assumption)
    and uses df = C(N - 1).  Included as the baseline the within-subject
    methods improve on.
    """
    _check_condition(j, stats.n_conditions)
    n, c = stats.n_subjects, stats.n_conditions
    pooled = sum(stats.condition_variances) / c
    df = c * (n - 1)
    half = math.sqrt(pooled / n) * _criterion_t(df, level)
    return IntervalEstimate(
        center=stats.condition_means[j],
        half_width=half,
        level=level,
        method=IntervalMethod.BETWEEN_SUBJECT_CI,
        df=df,
    )


def loftus_masson_ci(stats: SummaryStats, j: int, level: float = 0.95) -> IntervalEstimate:
    """Loftus-Masson within-subject CI.

    half_width = sqrt(SS_SxC / (N (N-1) (C-1))) * t_{(C-1)(N-1), 1-alpha/2}.
    """
    _check_condition(j, stats.n_conditions)
    n, c = stats.n_subjects, stats.n_conditions
    df = (c - 1) * (n - 1)
    half = math.sqrt(stats.ss_interaction / (n * (n - 1) * (c - 1))) * _criterion_t(df, level)
    return IntervalEstimate(
        center=stats.condition_means[j],
        half_width=half,
        level=level,
        method=IntervalMethod.LOFTUS_MASSON_CI,
        df=df,
    )


def within_subject_hdi(stats: SummaryStats, j: int, level: float = 0.95) -> IntervalEstimate:
    """Within-subject Bayesian HDI under the homoscedastic model.

    half_width = sqrt(SS_SxC / (N (N-1) C)) * t_{C(N-1), 1-alpha/2}; same
    center as the Loftus-Masson CI but strictly shorter (see length_ratio).
    """
    _check_condition(j, stats.n_conditions)
    n, c = stats.n_subjects, stats.n_conditions
    df = c * (n - 1)
    half = math.sqrt(stats.ss_interaction / (n * (n - 1) * c)) * _criterion_t(df, level)
    return IntervalEstimate(
        center=stats.condition_means[j],
        half_width=half,
        level=level,
        method=IntervalMethod.WITHIN_SUBJECT_HDI,
        df=df,
    )


def _standardized_sem_sq(std: StandardizedTable, j: int) -> float:
    """omega_j^2 = sum_i (Y'_ij - M_.j)^2 / (N (N-1)), the squared SEM of
    condition j computed from subject-centered scores."""
    n = std.n_subjects
    col = std.values[:, j]
    center = std.source_stats.condition_means[j]
    return float(((col - center) ** 2).sum()) / (n * (n - 1))


def heteroscedastic_hdi(std: StandardizedTable, j: int, level: float = 0.95) -> IntervalEstimate:
    """Per-condition HDI under the heteroscedastic model.

    half_width = omega_j * t_{N-1, 1-alpha/2} from standardized scores;
    widths may differ across conditions.
    """
    _check_condition(j, std.n_conditions)
    n = std.n_subjects
    half = math.sqrt(_standardized_sem_sq(std, j)) * _criterion_t(n - 1, level)
    return IntervalEstimate(
        center=std.source_stats.condition_means[j],
        half_width=half,
        level=level,
        method=IntervalMethod.HETEROSCEDASTIC_HDI,
        df=n - 1,
    )


def nathoo_masson_hdi(stats: SummaryStats, j: int, level: float = 0.95) -> IntervalEstimate:
    """Large-sample within-subject HDI using the normal quantile.

    half_width = Z_{1-alpha/2} * (1/N) * sqrt((SS_T - SS_C) / C); degrees of
    freedom are reported as asymptotic.
    """
    _check_condition(j, stats.n_conditions)
    if not 0.0 < level < 1.0:
        raise ValueError(f"level must be in (0, 1), got {level}")
    n, c = stats.n_subjects, stats.n_conditions
    # SS_T >= SS_C holds exactly in the decomposition; guard fp rounding.
    spread = max(stats.ss_total - stats.ss_conditions, 0.0)
    half = normal_quantile(1.0 - (1.0 - level) / 2.0) * math.sqrt(spread / c) / n
    return IntervalEstimate(
        center=stats.condition_means[j],
        half_width=half,
        level=level,
        method=IntervalMethod.NATHOO_MASSON_LARGE_SAMPLE,
        df=None,
    )


def cousineau_morey_interval(
    std: StandardizedTable,
    j: int,
    level: float = 0.95,
    df_choice: DfChoice = DfChoice.N_MINUS_1,
    morey_correction: bool = False,
) -> IntervalEstimate:
    """Normalization-based interval from standardized scores.

    Uses the unpooled per-condition SEM of the standardized scores with a
    selectable df convention.  With df_choice=N_MINUS_1 and no correction it
    is identical to heteroscedastic_hdi.  The Morey correction multiplies the
    half-width by sqrt(C / (C-1)); it defaults to off.
    """
    _check_condition(j, std.n_conditions)
    n, c = std.n_subjects, std.n_conditions
    if df_choice is DfChoice.N_MINUS_1:
        df = n - 1
    elif df_choice is DfChoice.C_TIMES_N_MINUS_1:
        df = c * (n - 1)
    else:
        df = (c - 1) * (n - 1)
    half = math.sqrt(_standardized_sem_sq(std, j)) * _criterion_t(df, level)
    if morey_correction:
        half *= math.sqrt(c / (c - 1))
    return IntervalEstimate(
        center=std.source_stats.condition_means[j],
        half_width=half,
        level=level,
        method=IntervalMethod.COUSINEAU_MOREY,
        df=df,
    )


def pairwise_difference_ci(
    table: RepeatedMeasuresTable,
    j: int,
    l: int,
    level: float = 0.95,
    pooled: bool = True,
) -> IntervalEstimate:
    """CI for the difference between two condition means, M_.j - M_.l.

    pooled=True uses the interaction mean square, giving a half-width exactly
    sqrt(2) times the Loftus-Masson half-width; pooled=False uses the sample
    variance of the per-subject difference scores with df = N - 1.
    """
    c = table.n_conditions
    _check_condition(j, c)
    _check_condition(l, c)
    if j == l:
        raise ValueError(f"pairwise difference needs two distinct conditions, got {j} twice")
    n = table.n_subjects
    y = table.values
    center = float(y[:, j].mean() - y[:, l].mean())
    if pooled:
        stats = summarize(table)
        df = (n - 1) * (c - 1)
        ms_interaction = stats.ss_interaction / df
        half = _criterion_t(df, level) * math.sqrt(2.0 * ms_interaction / n)
    else:
        df = n - 1
        diff_var = float(np.var(y[:, j] - y[:, l], ddof=1))
        half = _criterion_t(df, level) * math.sqrt(diff_var / n)
    return IntervalEstimate(
        center=center,
        half_width=half,
        level=level,
        method=IntervalMethod.PAIRWISE_DIFFERENCE_CI,
        df=df,
    )


def length_ratio(n_subjects: int, n_conditions: int, level: float = 0.95) -> float:
    """Width of the within-subject HDI divided by the Loftus-Masson CI width.

    R = sqrt((C-1)/C) * t_{C(N-1)} / t_{(C-1)(N-1)} at the matching quantile;
    data-independent and always in (0, 1).
    """
    if n_subjects < 2 or n_conditions < 2:
        raise ValueError(
            f"need at least 2 subjects and 2 conditions, got {n_subjects}, {n_conditions}"
        )
    n, c = n_subjects, n_conditions
    q_hdi = _criterion_t(c * (n - 1), level)
    q_lm = _criterion_t((c - 1) * (n - 1), level)
    return math.sqrt((c - 1) / c) * q_hdi / q_lm
