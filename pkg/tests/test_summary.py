"""Data model and summary statistics.

Expected sums of squares are recomputed here with plain Python loops, an
independent route from the vectorized implementation.
"""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from wsint import (
    InvalidTableError,
    RepeatedMeasuresTable,
    random_effect_mles,
    standardize,
    summarize,
)

from conftest import TABLE1_VALUES, random_table


def loop_decomposition(values: list[list[float]]) -> dict[str, float]:
    """Reference sums of squares via explicit double loops."""
    n = len(values)
    c = len(values[0])
    grand = sum(sum(row) for row in values) / (n * c)
    row_means = [sum(row) / c for row in values]
    col_means = [sum(values[i][j] for i in range(n)) / n for j in range(c)]
    ss_t = sum((values[i][j] - grand) ** 2 for i in range(n) for j in range(c))
    ss_c = n * sum((m - grand) ** 2 for m in col_means)
    ss_s = c * sum((m - grand) ** 2 for m in row_means)
    ss_i = sum(
        (values[i][j] - row_means[i] - col_means[j] + grand) ** 2
        for i in range(n)
        for j in range(c)
    )
    return {
        "grand": grand,
        "col_means": col_means,
        "row_means": row_means,
        "ss_total": ss_t,
        "ss_conditions": ss_c,
        "ss_subjects": ss_s,
        "ss_interaction": ss_i,
    }


matrices = arrays(
    dtype=float,
    shape=st.tuples(st.integers(2, 30), st.integers(2, 30)),
    elements=st.floats(-100.0, 100.0, allow_nan=False, width=64),
)


class TestTableConstruction:
    def test_labels_default_and_shape(self):
        t = RepeatedMeasuresTable([[1.0, 2.0], [3.0, 4.0]])
        assert t.subject_ids == ("S1", "S2")
        assert t.condition_labels == ("C1", "C2")
        assert t.n_subjects == 2 and t.n_conditions == 2

    def test_rejects_single_subject(self):
        with pytest.raises(InvalidTableError):
            RepeatedMeasuresTable([[1.0, 2.0]])

    def test_rejects_single_condition(self):
        with pytest.raises(InvalidTableError):
            RepeatedMeasuresTable([[1.0], [2.0]])

    def test_rejects_nan_cells(self):
        with pytest.raises(InvalidTableError):
            RepeatedMeasuresTable([[1.0, float("nan")], [3.0, 4.0]])

    def test_rejects_duplicate_subjects(self):
        with pytest.raises(InvalidTableError):
            RepeatedMeasuresTable([[1.0, 2.0], [3.0, 4.0]], subject_ids=["a", "a"])

    def test_rejects_duplicate_conditions(self):
        with pytest.raises(InvalidTableError):
            RepeatedMeasuresTable([[1.0, 2.0], [3.0, 4.0]], condition_labels=["x", "x"])

    def test_rejects_label_length_mismatch(self):
        with pytest.raises(InvalidTableError):
            RepeatedMeasuresTable([[1.0, 2.0], [3.0, 4.0]], subject_ids=["a"])

    def test_values_are_immutable(self):
        t = RepeatedMeasuresTable([[1.0, 2.0], [3.0, 4.0]])
        with pytest.raises(ValueError):
            t.values[0, 0] = 9.0

    def test_condition_index(self, table1):
        assert table1.condition_index("2 sec") == 1
        with pytest.raises(InvalidTableError):
            table1.condition_index("10 sec")


class TestSummarize:
    def test_canonical_means(self, table1):
        stats = summarize(table1)
        assert stats.condition_means == (11.0, 13.0, 14.2)
        assert stats.grand_mean == pytest.approx(12.7333, abs=5e-5)

    def test_canonical_interaction_ss(self, table1):
        stats = summarize(table1)
        assert stats.ss_interaction == pytest.approx(11.07, abs=0.01)

    def test_matches_loop_reference(self, table1):
        ref = loop_decomposition(TABLE1_VALUES)
        stats = summarize(table1)
        assert stats.ss_total == pytest.approx(ref["ss_total"], rel=1e-12)
        assert stats.ss_conditions == pytest.approx(ref["ss_conditions"], rel=1e-12)
        assert stats.ss_subjects == pytest.approx(ref["ss_subjects"], rel=1e-12)
        assert stats.ss_interaction == pytest.approx(ref["ss_interaction"], rel=1e-12)
        assert stats.grand_mean == pytest.approx(ref["grand"], rel=1e-12)

    def test_constant_table(self):
        stats = summarize(RepeatedMeasuresTable(np.full((4, 3), 7.5)))
        assert stats.ss_total == 0.0
        assert stats.ss_conditions == 0.0
        assert stats.ss_subjects == 0.0
        assert stats.ss_interaction == 0.0
        assert stats.condition_means == (7.5, 7.5, 7.5)
        assert stats.grand_mean == 7.5

    def test_condition_variances_ddof1(self, table1):
        stats = summarize(table1)
        first = [row[0] for row in TABLE1_VALUES]
        mean = sum(first) / len(first)
        expected = sum((x - mean) ** 2 for x in first) / (len(first) - 1)
        assert stats.condition_variances[0] == pytest.approx(expected, rel=1e-12)

    @given(matrices)
    def test_decomposition_additive(self, values):
        stats = summarize(RepeatedMeasuresTable(values))
        total = stats.ss_conditions + stats.ss_subjects + stats.ss_interaction
        assert stats.ss_total == pytest.approx(total, rel=1e-9, abs=1e-9)

    @given(matrices)
    def test_mean_consistency(self, values):
        stats = summarize(RepeatedMeasuresTable(values))
        scale = max(1.0, abs(stats.grand_mean))
        assert abs(np.mean(stats.condition_means) - stats.grand_mean) <= 1e-12 * scale
        assert abs(np.mean(stats.subject_means) - stats.grand_mean) <= 1e-12 * scale

    @given(matrices, st.floats(-1e6, 1e6, allow_nan=False))
    @settings(max_examples=40)
    def test_shift_invariance(self, values, shift):
        base = summarize(RepeatedMeasuresTable(values))
        shifted = summarize(RepeatedMeasuresTable(values + shift))
        scale = max(base.ss_total, 1.0)
        assert abs(shifted.ss_total - base.ss_total) <= 1e-9 * scale
        assert abs(shifted.ss_conditions - base.ss_conditions) <= 1e-9 * scale
        assert abs(shifted.ss_subjects - base.ss_subjects) <= 1e-9 * scale
        assert abs(shifted.ss_interaction - base.ss_interaction) <= 1e-9 * scale

    def test_large_offset_stability(self):
        rng = np.random.default_rng(20)
        for _ in range(50):
            t = random_table(rng, offset=1e6)
            stats = summarize(t)
            total = stats.ss_conditions + stats.ss_subjects + stats.ss_interaction
            assert stats.ss_total == pytest.approx(total, rel=1e-9)


class TestStandardize:
    def test_subject4_row(self, table1):
        std = standardize(table1)
        assert std.values[3] == pytest.approx([11.40, 12.40, 14.40], abs=0.01)

    def test_column_means_preserved(self, table1):
        std = standardize(table1)
        assert std.values.mean(axis=0) == pytest.approx([11.0, 13.0, 14.2], rel=1e-12)

    @given(matrices)
    def test_row_means_equal_grand_mean(self, values):
        std = standardize(RepeatedMeasuresTable(values))
        grand = std.source_stats.grand_mean
        scale = max(1.0, abs(grand))
        assert np.all(np.abs(std.values.mean(axis=1) - grand) <= 1e-12 * scale)

    @given(matrices)
    def test_idempotent(self, values):
        once = standardize(RepeatedMeasuresTable(values))
        twice = standardize(RepeatedMeasuresTable(once.values))
        scale = np.maximum(np.abs(once.values), 1.0)
        assert np.all(np.abs(twice.values - once.values) <= 1e-12 * scale)

    @given(matrices)
    def test_interaction_ss_preserved(self, values):
        t = RepeatedMeasuresTable(values)
        original = summarize(t)
        after = summarize(RepeatedMeasuresTable(standardize(t).values))
        scale = max(original.ss_interaction, 1.0)
        assert abs(after.ss_interaction - original.ss_interaction) <= 1e-9 * scale

    def test_identity_without_subject_effects(self):
        # Every subject's row equals the condition-mean row.
        row = [3.0, 5.0, 9.0]
        t = RepeatedMeasuresTable([row, row, row])
        std = standardize(t)
        assert np.array_equal(std.values, t.values)


class TestRandomEffects:
    def test_subject7(self, table1):
        b = random_effect_mles(table1)
        assert b[6] == pytest.approx(-10.7333, abs=0.001)

    def test_constant_table(self):
        b = random_effect_mles(RepeatedMeasuresTable(np.full((5, 4), 2.0)))
        assert np.array_equal(b, np.zeros(5))

    @given(matrices)
    def test_sums_to_zero(self, values):
        t = RepeatedMeasuresTable(values)
        b = random_effect_mles(t)
        scale = max(1.0, float(np.abs(values).max()))
        assert abs(b.sum()) <= 1e-12 * scale * len(b)
