"""Dataset ingestion, serialization, simulation specs, and bundled data.

Two file layouts are accepted, both delimiter-separated with a mandatory
header row and the delimiter auto-detected among comma, tab, and semicolon:

- wide: one row per subject, ``subject,<cond1>,...,<condC>``
- long: one row per cell, ``subject,condition,value``

Simulation specs are TOML documents with the SimSpec fields; the bundled
``hetero_demo.toml`` generates a 48 x 3 heteroscedastic dataset with a large
subject variance component.
"""

from __future__ import annotations

import csv
import enum
import io as _io
import sys
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Sequence

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import (
    DataParseError,
    DuplicateCellError,
    LayoutError,
    MissingCellError,
    SimSpecError,
)
from .summary import RepeatedMeasuresTable

__all__ = [
    "Layout",
    "DatasetSpec",
    "load_dataset",
    "read_table",
    "render_wide",
    "render_long",
    "SimSpec",
    "load_simspec",
    "simulate",
    "bundled_path",
]

_DELIMITERS = (",", "\t", ";")


class Layout(enum.Enum):
    WIDE = "wide"
    LONG = "long"


@dataclass(frozen=True)
class DatasetSpec:
    """Where and how to read a dataset.

    Column names matter only for their layout: wide uses ``subject_column``
    and treats every other column as a condition; long additionally needs
    ``condition_column`` and ``value_column``.
    """

    path: str | Path
    layout: Layout = Layout.WIDE
    subject_column: str = "subject"
    condition_column: str = "condition"
    value_column: str = "value"


def _detect_delimiter(header_line: str) -> str:
    counts = {d: header_line.count(d) for d in _DELIMITERS}
    best = max(counts, key=lambda d: counts[d])
    if counts[best] == 0:
        raise LayoutError("header row contains no comma, tab, or semicolon delimiter")
    return best


def _parse_value(raw: str, where: str) -> float:
    text = raw.strip()
    if not text:
        raise MissingCellError(f"empty cell at {where}")
    try:
        return float(text)
    except ValueError:
        raise DataParseError(f"could not parse {raw!r} as a number at {where}") from None


def _read_rows(text: str) -> tuple[list[str], list[list[str]]]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise LayoutError("file is empty")
    delimiter = _detect_delimiter(lines[0])
    rows = list(csv.reader(lines, delimiter=delimiter))
    header = [h.strip() for h in rows[0]]
    return header, rows[1:]


def _wide_table(header: list[str], rows: list[list[str]], spec: DatasetSpec) -> RepeatedMeasuresTable:
    if spec.subject_column not in header:
        raise LayoutError(
            f"wide layout needs a {spec.subject_column!r} column; header has {header}"
        )
    subj_idx = header.index(spec.subject_column)
    condition_labels = [h for i, h in enumerate(header) if i != subj_idx]
    if len(condition_labels) < 2:
        raise LayoutError("wide layout needs at least 2 condition columns")
    subjects: list[str] = []
    seen: set[str] = set()
    values: list[list[float]] = []
    for r, row in enumerate(rows, start=2):
        if len(row) != len(header):
            raise MissingCellError(
                f"line {r}: expected {len(header)} cells, got {len(row)}"
            )
        subject = row[subj_idx].strip()
        if subject in seen:
            raise DuplicateCellError(f"line {r}: subject {subject!r} appears more than once")
        seen.add(subject)
        subjects.append(subject)
        cells = [cell for i, cell in enumerate(row) if i != subj_idx]
        values.append(
            [
                _parse_value(cell, f"line {r}, subject {subject!r}, condition {label!r}")
                for cell, label in zip(cells, condition_labels)
            ]
        )
    return RepeatedMeasuresTable(values, subjects, condition_labels)


def _long_table(header: list[str], rows: list[list[str]], spec: DatasetSpec) -> RepeatedMeasuresTable:
    needed = (spec.subject_column, spec.condition_column, spec.value_column)
    missing = [name for name in needed if name not in header]
    if missing:
        raise LayoutError(f"long layout needs columns {needed}; missing {missing}")
    idx = {name: header.index(name) for name in needed}
    subjects: list[str] = []
    conditions: list[str] = []
    cells: dict[tuple[str, str], float] = {}
    for r, row in enumerate(rows, start=2):
        if len(row) != len(header):
            raise MissingCellError(f"line {r}: expected {len(header)} cells, got {len(row)}")
        subject = row[idx[spec.subject_column]].strip()
        condition = row[idx[spec.condition_column]].strip()
        key = (subject, condition)
        if key in cells:
            raise DuplicateCellError(
                f"line {r}: duplicate cell for subject {subject!r}, condition {condition!r}"
            )
        cells[key] = _parse_value(
            row[idx[spec.value_column]],
            f"line {r}, subject {subject!r}, condition {condition!r}",
        )
        if subject not in subjects:
            subjects.append(subject)
        if condition not in conditions:
            conditions.append(condition)
    values = []
    for subject in subjects:
        row_vals = []
        for condition in conditions:
            key = (subject, condition)
            if key not in cells:
                raise MissingCellError(
                    f"subject {subject!r} has no value for condition {condition!r}"
                )
            row_vals.append(cells[key])
        values.append(row_vals)
    return RepeatedMeasuresTable(values, subjects, conditions)


def read_table(text: str, spec: DatasetSpec) -> RepeatedMeasuresTable:
    """Parse dataset text that is already in memory."""
    header, rows = _read_rows(text)
    if spec.layout is Layout.WIDE:
        return _wide_table(header, rows, spec)
    return _long_table(header, rows, spec)


def load_dataset(spec: DatasetSpec) -> RepeatedMeasuresTable:
    """Read a complete N x C table from a delimited file."""
    path = Path(spec.path)
    if not path.is_file():
        raise LayoutError(f"no such file: {path}")
    return read_table(path.read_text(encoding="utf-8"), spec)


def render_wide(table: RepeatedMeasuresTable, delimiter: str = ",") -> str:
    """Serialize a table in wide layout; full-precision values."""
    buf = _io.StringIO()
    writer = csv.writer(buf, delimiter=delimiter, lineterminator="\n")
    writer.writerow(["subject", *table.condition_labels])
    for i, subject in enumerate(table.subject_ids):
        writer.writerow([subject, *(repr(float(v)) for v in table.values[i])])
    return buf.getvalue()


def render_long(table: RepeatedMeasuresTable, delimiter: str = ",") -> str:
    """Serialize a table in long layout; full-precision values."""
    buf = _io.StringIO()
    writer = csv.writer(buf, delimiter=delimiter, lineterminator="\n")
    writer.writerow(["subject", "condition", "value"])
    for i, subject in enumerate(table.subject_ids):
        for j, condition in enumerate(table.condition_labels):
            writer.writerow([subject, condition, repr(float(table.values[i, j]))])
    return buf.getvalue()


@dataclass(frozen=True)
class SimSpec:
    """Generator settings for Y_ij = mu_j + b_i + eps_ij.

    ``sigma_eps`` may be a single value (homoscedastic errors) or one value
    per condition (heteroscedastic); ``sigma_b`` scales the subject effects.
    """

    n_subjects: int
    condition_means: tuple[float, ...]
    sigma_eps: float | tuple[float, ...]
    sigma_b: float
    seed: int
    condition_labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.n_subjects < 2:
            raise SimSpecError(f"n_subjects must be at least 2, got {self.n_subjects}")
        if len(self.condition_means) < 2:
            raise SimSpecError("need at least 2 condition means")
        sig = self.sigma_eps
        if isinstance(sig, tuple):
            if len(sig) != len(self.condition_means):
                raise SimSpecError(
                    f"sigma_eps has {len(sig)} entries for "
                    f"{len(self.condition_means)} conditions"
                )
            bad = [s for s in sig if s < 0.0]
        else:
            bad = [sig] if sig < 0.0 else []
        if bad:
            raise SimSpecError(f"sigma_eps must be nonnegative, got {bad[0]}")
        if self.sigma_b < 0.0:
            raise SimSpecError(f"sigma_b must be nonnegative, got {self.sigma_b}")
        if self.condition_labels is not None and len(self.condition_labels) != len(
            self.condition_means
        ):
            raise SimSpecError("condition_labels length does not match condition_means")


def _as_simspec(doc: dict, source: str) -> SimSpec:
    required = {"n_subjects", "condition_means", "sigma_eps", "sigma_b", "seed"}
    missing = sorted(required - doc.keys())
    if missing:
        raise SimSpecError(f"{source}: missing fields {missing}")
    try:
        means = tuple(float(v) for v in doc["condition_means"])
        raw_sigma = doc["sigma_eps"]
        sigma: float | tuple[float, ...]
        if isinstance(raw_sigma, (list, tuple)):
            sigma = tuple(float(s) for s in raw_sigma)
        else:
            sigma = float(raw_sigma)
        labels = doc.get("condition_labels")
        return SimSpec(
            n_subjects=int(doc["n_subjects"]),
            condition_means=means,
            sigma_eps=sigma,
            sigma_b=float(doc["sigma_b"]),
            seed=int(doc["seed"]),
            condition_labels=tuple(str(v) for v in labels) if labels is not None else None,
        )
    except (TypeError, ValueError) as exc:
        raise SimSpecError(f"{source}: {exc}") from exc


def load_simspec(path: str | Path, seed_override: int | None = None) -> SimSpec:
    """Read a SimSpec from a TOML document; ``seed_override`` replaces its seed."""
    p = Path(path)
    if not p.is_file():
        raise SimSpecError(f"no such file: {p}")
    try:
        doc = tomllib.loads(p.read_text(encoding="utf-8"))
    except tomllib.TOMLDecodeError as exc:
        raise SimSpecError(f"{p}: {exc}") from exc
    spec = _as_simspec(doc, str(p))
    if seed_override is not None:
        spec = SimSpec(
            n_subjects=spec.n_subjects,
            condition_means=spec.condition_means,
            sigma_eps=spec.sigma_eps,
            sigma_b=spec.sigma_b,
            seed=seed_override,
            condition_labels=spec.condition_labels,
        )
    return spec


def simulate(spec: SimSpec) -> RepeatedMeasuresTable:
    """Draw a table from the mixed model; deterministic per seed.

    Subject effects are drawn first (N values), then the error matrix (N x C),
    both from one Philox stream keyed by the seed.
    """
    n = spec.n_subjects
    c = len(spec.condition_means)
    rng = np.random.Generator(np.random.Philox(spec.seed))
    b = rng.normal(0.0, spec.sigma_b, size=n)
    sigma = np.broadcast_to(np.asarray(spec.sigma_eps, dtype=float), (c,))
    eps = rng.normal(0.0, 1.0, size=(n, c)) * sigma[None, :]
    values = np.asarray(spec.condition_means)[None, :] + b[:, None] + eps
    labels = spec.condition_labels or tuple(f"C{j + 1}" for j in range(c))
    return RepeatedMeasuresTable(
        values,
        tuple(f"S{i + 1}" for i in range(n)),
        labels,
    )


def bundled_path(name: str) -> Path:
    """Filesystem path of a bundled data file, e.g. ``loftus_masson_1994.csv``."""
    ref = resources.files("wsint") / "data" / name
    if not ref.is_file():
        raise FileNotFoundError(f"no bundled data file named {name!r}")
    return Path(str(ref))
