"""Shared fixtures, random-table helpers, and the acceptance report hook."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from wsint import DatasetSpec, RepeatedMeasuresTable, bundled_path, load_dataset

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

# Deduplicated 10 x 3 dataset behind the canonical worked example, in the
# same order as the bundled CSV.
TABLE1_VALUES = [
    [10, 13, 13],
    [6, 8, 8],
    [11, 14, 14],
    [22, 23, 25],
    [16, 18, 20],
    [15, 17, 17],
    [1, 1, 4],
    [12, 15, 17],
    [9, 12, 12],
    [8, 9, 12],
]


@pytest.fixture(scope="session")
def table1() -> RepeatedMeasuresTable:
    return load_dataset(DatasetSpec(path=bundled_path("loftus_masson_1994.csv")))


def random_table(
    rng: np.random.Generator,
    n: int | None = None,
    c: int | None = None,
    low: float = -100.0,
    high: float = 100.0,
    offset: float = 0.0,
) -> RepeatedMeasuresTable:
    """A random complete design with uniform cell values."""
    if n is None:
        n = int(rng.integers(2, 51))
    if c is None:
        c = int(rng.integers(2, 11))
    values = rng.uniform(low, high, size=(n, c)) + offset
    return RepeatedMeasuresTable(values)


# ---------------------------------------------------------------------------
# Acceptance criteria report: one pass/fail line per criterion, printed in the
# terminal summary so it survives pytest's output capture.

_ACCEPTANCE: dict[int, tuple[str, bool, str]] = {}


def record_criterion(number: int, description: str, passed: bool, detail: str = "") -> None:
    _ACCEPTANCE[number] = (description, passed, detail)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        description, passed, detail = _ACCEPTANCE[number]
        tag = "PASS" if passed else "FAIL"
        suffix = f" ({detail})" if detail else ""
        terminalreporter.write_line(f"[{tag}] criterion {number:2d}: {description}{suffix}")
