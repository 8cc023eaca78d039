"""Uniform result type for every interval estimator in the package."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass


class IntervalMethod(enum.Enum):
    """Which estimator produced an interval."""

    BETWEEN_SUBJECT_CI = "BetweenSubjectCI"
    LOFTUS_MASSON_CI = "LoftusMassonCI"
    WITHIN_SUBJECT_HDI = "WithinSubjectHDI"
    HETEROSCEDASTIC_HDI = "HeteroscedasticHDI"
    NATHOO_MASSON_LARGE_SAMPLE = "NathooMassonLargeSample"
    COUSINEAU_MOREY = "CousineauMorey"
    PAIRWISE_DIFFERENCE_CI = "PairwiseDifferenceCI"


@dataclass(frozen=True)
class IntervalEstimate:
    """A symmetric interval: center +/- half_width at a given level.

    ``df`` is the degrees of freedom of the criterion t quantile, or None for
    asymptotic (normal-quantile) intervals.
    """

    center: float
    half_width: float
    level: float
    method: IntervalMethod
    df: int | None

    def __post_init__(self):
        if not 0.0 < self.level < 1.0:
            raise ValueError(f"level must be in (0, 1), got {self.level}")
        if math.isnan(self.half_width) or self.half_width < 0.0:
            raise ValueError(f"half_width must be nonnegative, got {self.half_width}")
        if self.df is not None and self.df < 1:
            raise ValueError(f"df must be a positive integer, got {self.df}")

    @property
    def lower(self) -> float:
        return self.center - self.half_width

    @property
    def upper(self) -> float:
        return self.center + self.half_width

    @property
    def df_label(self) -> int | str:
        """Degrees of freedom, with None rendered as "asymptotic"."""
        return "asymptotic" if self.df is None else self.df
