"""Benchmark schemas, score tables and sub-metric composition.

A *schema* says which tasks a benchmark has, which metrics each task
reports, and which tasks enter each overall mean. A *score table* holds one
row per system with raw metric cells keyed by ``(task, language, metric)``.
Missing cells are stored as ``None``.

Score tables are read from CSV (header ``system,rank,<task>.<metric>,...``
with an optional ``comment`` column; per-language cells are written
``<task>.<metric>@<lang>``) or from JSON. Both decimal separators are
accepted, and ``-`` or an empty cell means missing.
"""

from __future__ import annotations

import csv
import enum
import io
import json
import math
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterator, Mapping, Optional, Sequence, Union

from .errors import DuplicateSystem, MalformedNumber, SchemaError, UnknownColumn
from .means import MeanKind, arithmetic_mean

__all__ = [
    "Composition",
    "TaskSchema",
    "BenchmarkSchema",
    "SystemRecord",
    "ScoreTable",
    "Finding",
    "CellKey",
    "parse_number",
    "column_name",
    "schema_from_dict",
    "schema_to_dict",
    "load_schema",
    "parse_table",
    "read_table",
    "serialize_table",
    "compose_task_score",
    "validate",
    "FIXTURES",
    "fixture_paths",
    "load_fixture",
]

CellKey = tuple  # (task_id, language or None, metric)

RESERVED_COLUMNS = ("system", "rank", "comment")
MISSING_MARKERS = ("", "-")
_NUMBER = re.compile(r"^[+-]?(\d+([.,]\d*)?|[.,]\d+)([eE][+-]?\d+)?$")


class Composition(str, enum.Enum):
    SINGLE = "single"
    MEAN_OF_METRICS = "mean"


@dataclass(frozen=True)
class TaskSchema:
    task_id: str
    metrics: tuple
    composition: Composition = Composition.SINGLE
    per_language: bool = False

    def __post_init__(self):
        object.__setattr__(self, "metrics", tuple(self.metrics))
        object.__setattr__(self, "composition", Composition(self.composition))
        if len(self.metrics) not in (1, 2):
            raise SchemaError(f"task {self.task_id!r} must declare 1 or 2 metrics, "
                              f"got {len(self.metrics)}")
        if len(set(self.metrics)) != len(self.metrics):
            raise SchemaError(f"task {self.task_id!r} repeats a metric name")
        if (self.composition is Composition.MEAN_OF_METRICS) != (len(self.metrics) == 2):
            raise SchemaError(
                f"task {self.task_id!r}: composition 'mean' requires exactly two "
                f"metrics and 'single' exactly one"
            )


@dataclass(frozen=True)
class BenchmarkSchema:
    benchmark_id: str
    tasks: tuple
    languages: Optional[tuple] = None
    inclusion_sets: Mapping = field(default_factory=dict)
    reference_system: Optional[str] = None
    original_overall_label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "tasks", tuple(self.tasks))
        if self.languages is not None:
            object.__setattr__(self, "languages", tuple(self.languages))
        ids = [t.task_id for t in self.tasks]
        if not ids:
            raise SchemaError(f"schema {self.benchmark_id!r} declares no tasks")
        dupes = sorted({i for i in ids if ids.count(i) > 1})
        if dupes:
            raise SchemaError(f"duplicate task ids: {dupes}")
        if self.languages is None and any(t.per_language for t in self.tasks):
            raise SchemaError("per-language tasks need a 'languages' list")
        known = set(ids)
        sets = {}
        for kind in MeanKind:
            chosen = self.inclusion_sets.get(kind, self.inclusion_sets.get(kind.value))
            chosen = frozenset(ids if chosen is None else chosen)
            unknown = sorted(chosen - known)
            if unknown:
                raise SchemaError(f"inclusion set for {kind.value} names unknown tasks {unknown}")
            if not chosen:
                raise SchemaError(f"inclusion set for {kind.value} is empty")
            sets[kind] = chosen
        object.__setattr__(self, "inclusion_sets", sets)

    @property
    def task_ids(self) -> tuple:
        return tuple(t.task_id for t in self.tasks)

    @property
    def multilingual(self) -> bool:
        return self.languages is not None

    def task(self, task_id: str) -> TaskSchema:
        for t in self.tasks:
            if t.task_id == task_id:
                return t
        raise SchemaError(f"schema {self.benchmark_id!r} has no task {task_id!r}")

    def inclusion(self, kind) -> frozenset:
        return self.inclusion_sets[MeanKind.parse(kind)]

    def ordered(self, task_ids) -> list:
        """`task_ids` in schema declaration order."""
        chosen = set(task_ids)
        return [t for t in self.task_ids if t in chosen]

    def cell_keys(self) -> list:
        keys = []
        for t in self.tasks:
            langs = self.languages if t.per_language else (None,)
            for lang in langs:
                for m in t.metrics:
                    keys.append((t.task_id, lang, m))
        return keys


@dataclass(frozen=True)
class SystemRecord:
    """One leaderboard row. ``cells`` maps ``(task, language, metric)`` to a float or ``None``."""

    system_name: str
    original_rank: int
    cells: Mapping = field(default_factory=dict)
    comment: str = ""

    def get(self, task_id, metric, language=None):
        return self.cells.get((task_id, language, metric))


@dataclass(frozen=True)
class ScoreTable:
    schema: BenchmarkSchema
    records: tuple

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))
        names = [r.system_name for r in self.records]
        dupes = sorted({n for n in names if names.count(n) > 1})
        if dupes:
            raise DuplicateSystem(f"system(s) listed more than once: {dupes}")

    def __iter__(self) -> Iterator[SystemRecord]:
        return iter(self.records)

    def __len__(self):
        return len(self.records)

    @property
    def system_names(self) -> list:
        return [r.system_name for r in self.records]

    def record(self, name: str) -> SystemRecord:
        for r in self.records:
            if r.system_name == name:
                return r
        raise KeyError(name)

    def reference(self) -> Optional[SystemRecord]:
        ref = self.schema.reference_system
        if ref is None:
            return None
        for r in self.records:
            if r.system_name == ref:
                return r
        return None


@dataclass(frozen=True)
class Finding:
    kind: str  # missing | non_positive | out_of_range | duplicate_rank
    severity: str  # note | warning | error
    system: str
    column: str
    message: str


def parse_number(text) -> Optional[float]:
    """Parse a score cell; ``-`` and empty text give ``None``.

    >>> parse_number("97,35")
    97.35
    >>> parse_number("-") is None
    True
    """
    if text is None:
        return None
    if isinstance(text, bool):
        raise MalformedNumber(f"not a number: {text!r}")
    if isinstance(text, (int, float)):
        value = float(text)
    else:
        s = str(text).strip()
        if s in MISSING_MARKERS:
            return None
        if not _NUMBER.match(s):
            raise MalformedNumber(f"not a number: {text!r}")
        value = float(s.replace(",", "."))
    if not math.isfinite(value):
        raise MalformedNumber(f"not a finite number: {text!r}")
    return value


def column_name(key) -> str:
    task, lang, metric = key
    name = f"{task}.{metric}"
    return name if lang is None else f"{name}@{lang}"


# -- schema files -----------------------------------------------------------

def schema_from_dict(data: Mapping) -> BenchmarkSchema:
    try:
        languages = data.get("languages")
        tasks = []
        for t in data["tasks"]:
            metrics = t["metrics"]
            composition = t.get("composition",
                                "mean" if len(metrics) == 2 else "single")
            if languages is not None and "per_language" not in t:
                raise SchemaError(f"task {t['id']!r} must say whether it is per_language")
            tasks.append(TaskSchema(t["id"], tuple(metrics), composition,
                                    bool(t.get("per_language", False))))
        sets = {MeanKind.parse(k): v for k, v in data.get("inclusion_sets", {}).items()}
        return BenchmarkSchema(
            benchmark_id=data["benchmark_id"],
            tasks=tuple(tasks),
            languages=None if languages is None else tuple(languages),
            inclusion_sets=sets,
            reference_system=data.get("reference_system"),
            original_overall_label=data.get("original_overall_label", ""),
        )
    except KeyError as exc:
        raise SchemaError(f"schema is missing required key {exc}") from None
    except ValueError as exc:
        if isinstance(exc, SchemaError):
            raise
        raise SchemaError(str(exc)) from None


def schema_to_dict(schema: BenchmarkSchema) -> dict:
    out = {
        "benchmark_id": schema.benchmark_id,
        "tasks": [],
        "inclusion_sets": {k.value: schema.ordered(v) for k, v in schema.inclusion_sets.items()},
    }
    for t in schema.tasks:
        entry = {"id": t.task_id, "metrics": list(t.metrics), "composition": t.composition.value}
        if schema.multilingual:
            entry["per_language"] = t.per_language
        out["tasks"].append(entry)
    if schema.languages is not None:
        out["languages"] = list(schema.languages)
    if schema.reference_system is not None:
        out["reference_system"] = schema.reference_system
    if schema.original_overall_label:
        out["original_overall_label"] = schema.original_overall_label
    return out


def load_schema(source: Union[str, Path, Mapping]) -> BenchmarkSchema:
    if isinstance(source, Mapping):
        return schema_from_dict(source)
    text = Path(source).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{source}: invalid JSON ({exc})") from None
    return schema_from_dict(data)


# -- score tables -----------------------------------------------------------

def _column_index(schema: BenchmarkSchema) -> dict:
    index = {column_name(k): k for k in schema.cell_keys()}
    for t in schema.tasks:
        if len(t.metrics) == 1 and not t.per_language:
            index.setdefault(t.task_id, (t.task_id, None, t.metrics[0]))
    return index


def _parse_rank(text, row) -> int:
    try:
        value = float(str(text).strip().replace(",", "."))
    except ValueError:
        raise MalformedNumber(f"row {row}: rank {text!r} is not an integer",
                              row=row, column="rank") from None
    if not value.is_integer() or value < 1:
        raise MalformedNumber(f"row {row}: rank {text!r} must be a positive integer",
                              row=row, column="rank")
    return int(value)


def _build_record(schema, index, row_no, name, rank, raw_cells, comment) -> SystemRecord:
    if not str(name or "").strip():
        raise SchemaError(f"row {row_no}: empty system name")
    cells = {}
    for col, raw in raw_cells.items():
        key = index.get(col)
        if key is None:
            raise UnknownColumn(f"column {col!r} does not match any task/metric "
                                f"of schema {schema.benchmark_id!r}")
        try:
            cells[key] = parse_number(raw)
        except MalformedNumber as exc:
            raise MalformedNumber(f"row {row_no} ({name}), column {col!r}: {exc}",
                                  row=row_no, column=col) from None
    for key in schema.cell_keys():
        cells.setdefault(key, None)
    return SystemRecord(str(name).strip(), _parse_rank(rank, row_no), cells, comment or "")


def parse_table(content: Union[bytes, str], fmt: str, schema: BenchmarkSchema) -> ScoreTable:
    """Parse CSV or JSON score-table content against `schema`.

    Raises
    ------
    MalformedNumber
        A cell is neither numeric nor a missing marker.
    UnknownColumn
        A column does not correspond to any cell of the schema.
    DuplicateSystem
        The same system name appears twice.
    """
    if isinstance(content, bytes):
        content = content.decode("utf-8-sig")
    fmt = fmt.lower()
    index = _column_index(schema)
    records = []
    if fmt == "csv":
        reader = csv.DictReader(io.StringIO(content))
        header = reader.fieldnames or []
        for col in ("system", "rank"):
            if col not in header:
                raise UnknownColumn(f"CSV header lacks required column {col!r}")
        for col in header:
            if col not in RESERVED_COLUMNS and col not in index:
                raise UnknownColumn(f"column {col!r} does not match any task/metric "
                                    f"of schema {schema.benchmark_id!r}")
        for row_no, row in enumerate(reader, start=2):
            if None in row:
                raise MalformedNumber(f"row {row_no}: more cells than header columns", row=row_no)
            raw = {k: v for k, v in row.items() if k not in RESERVED_COLUMNS}
            records.append(_build_record(schema, index, row_no, row["system"], row["rank"],
                                         raw, (row.get("comment") or "").strip()))
    elif fmt == "json":
        data = json.loads(content)
        systems = data["systems"] if isinstance(data, Mapping) else data
        for row_no, item in enumerate(systems, start=1):
            records.append(_build_record(schema, index, row_no, item.get("system"),
                                         item.get("rank"), dict(item.get("cells", {})),
                                         item.get("comment", "")))
    else:
        raise ValueError(f"unknown table format {fmt!r}; expected csv or json")
    return ScoreTable(schema, tuple(records))


def read_table(path: Union[str, Path], schema: BenchmarkSchema) -> ScoreTable:
    path = Path(path)
    fmt = "json" if path.suffix.lower() == ".json" else "csv"
    return parse_table(path.read_bytes(), fmt, schema)


def _cell_text(value) -> str:
    return "-" if value is None else repr(float(value))


def serialize_table(table: ScoreTable, fmt: str = "csv") -> str:
    keys = table.schema.cell_keys()
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        has_comment = any(r.comment for r in table)
        writer.writerow(["system", "rank"] + [column_name(k) for k in keys]
                        + (["comment"] if has_comment else []))
        for r in table:
            writer.writerow([r.system_name, r.original_rank]
                            + [_cell_text(r.cells.get(k)) for k in keys]
                            + ([r.comment] if has_comment else []))
        return buf.getvalue()
    if fmt == "json":
        systems = []
        for r in table:
            item = {"system": r.system_name, "rank": r.original_rank,
                    "cells": {column_name(k): r.cells.get(k) for k in keys}}
            if r.comment:
                item["comment"] = r.comment
            systems.append(item)
        return json.dumps({"benchmark_id": table.schema.benchmark_id, "systems": systems},
                          indent=2) + "\n"
    raise ValueError(f"unknown table format {fmt!r}")


# -- composition and validation ---------------------------------------------

def compose_task_score(record: SystemRecord, task: TaskSchema, language=None) -> Optional[float]:
    """Task-level score: the single metric, or the mean of the two sub-metrics.

    Returns ``None`` when any required metric is missing.
    """
    values = [record.get(task.task_id, m, language) for m in task.metrics]
    if any(v is None for v in values):
        return None
    if task.composition is Composition.SINGLE:
        return values[0]
    return arithmetic_mean(values)


def validate(table: ScoreTable) -> list:
    """Report data issues without raising; an empty list means the table is clean."""
    findings = []
    keys = table.schema.cell_keys()
    for r in table:
        for k in keys:
            v = r.cells.get(k)
            col = column_name(k)
            if v is None:
                findings.append(Finding("missing", "note", r.system_name, col,
                                        f"{r.system_name}: {col} is missing"))
            elif v <= 0:
                findings.append(Finding("non_positive", "warning", r.system_name, col,
                                        f"{r.system_name}: {col} = {v} blocks geometric "
                                        "and harmonic means"))
            elif v > 100:
                findings.append(Finding("out_of_range", "warning", r.system_name, col,
                                        f"{r.system_name}: {col} = {v} is outside [0, 100]"))
    ranks = {}
    for r in table:
        ranks.setdefault(r.original_rank, []).append(r.system_name)
    for rank, names in sorted(ranks.items()):
        if len(names) > 1:
            findings.append(Finding("duplicate_rank", "error", ", ".join(names), "rank",
                                    f"rank {rank} is shared by {names}"))
    return findings


# -- bundled fixtures -------------------------------------------------------

FIXTURES = ("glue", "superglue", "xtreme", "xglue_nlu", "xglue_nlg")


def fixture_paths(name: str):
    """Return ``(schema_path, table_path)`` of a bundled fixture."""
    base = resources.files("benchmeans") / "data"
    schema = base / f"{name}.schema.json"
    table = base / f"{name}.csv"
    if not (schema.is_file() and table.is_file()):
        raise KeyError(f"no bundled fixture named {name!r}")
    return Path(str(schema)), Path(str(table))


def load_fixture(name: str):
    """Load a bundled fixture as ``(schema, table)``."""
    schema_path, table_path = fixture_paths(name)
    schema = load_schema(schema_path)
    return schema, read_table(table_path, schema)
