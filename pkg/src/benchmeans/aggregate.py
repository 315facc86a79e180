"""Overall scores from score tables.

Per system, each included task is reduced to one number: its sub-metrics are
averaged, and for multilingual benchmarks the task is first averaged over
its languages. The chosen mean is then applied across tasks. Missing tasks
are skipped by default, so the mean divides by the number of tasks present.

Reference normalization divides every task score by the reference system's
score on that task and averages the *ratios*; it does not divide one
overall score by another.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import (DivisionByZeroReference, EmptyAfterSkip, MissingCell,
                     NoReference, SchemaError)
from .means import MeanKind, NonPositivePolicy, arithmetic_mean, compute_mean
from .schema import (BenchmarkSchema, ScoreTable, SystemRecord, TaskSchema,
                     compose_task_score)

__all__ = [
    "MissingPolicy",
    "AggregationSpec",
    "NormalizedRecord",
    "task_scores",
    "task_vector",
    "two_step_average",
    "overall_score",
    "normalize_to_reference",
]


class MissingPolicy(enum.Enum):
    SKIP = "skip"
    FAIL = "fail"


@dataclass(frozen=True)
class AggregationSpec:
    """How to turn a record into one overall score.

    Use :meth:`for_schema` to pick up the schema's inclusion set for a mean.
    """

    mean: MeanKind
    inclusion: frozenset
    missing_policy: MissingPolicy = MissingPolicy.SKIP
    non_positive: NonPositivePolicy = NonPositivePolicy.ERROR

    def __post_init__(self):
        object.__setattr__(self, "mean", MeanKind.parse(self.mean))
        object.__setattr__(self, "inclusion", frozenset(self.inclusion))
        if not self.inclusion:
            raise SchemaError("aggregation needs a non-empty inclusion set")

    @classmethod
    def for_schema(cls, schema: BenchmarkSchema, mean, **kwargs) -> "AggregationSpec":
        return cls(MeanKind.parse(mean), schema.inclusion(mean), **kwargs)

    def with_mean(self, mean) -> "AggregationSpec":
        return AggregationSpec(mean, self.inclusion, self.missing_policy, self.non_positive)

    def check(self, schema: BenchmarkSchema) -> None:
        unknown = sorted(self.inclusion - set(schema.task_ids))
        if unknown:
            raise SchemaError(f"inclusion set names tasks not in schema "
                              f"{schema.benchmark_id!r}: {unknown}")


def two_step_average(record: SystemRecord, task: TaskSchema,
                     schema: BenchmarkSchema) -> Optional[float]:
    """Mean of a task's composed score over the languages where it is present."""
    if not schema.multilingual:
        raise SchemaError(f"schema {schema.benchmark_id!r} is not multilingual")
    if not task.per_language:
        return compose_task_score(record, task)
    present = [s for s in (compose_task_score(record, task, lang) for lang in schema.languages)
               if s is not None]
    if not present:
        return None
    return arithmetic_mean(present)


def _task_score(record, task, schema):
    if schema.multilingual:
        return two_step_average(record, task, schema)
    return compose_task_score(record, task)


def task_scores(record: SystemRecord, schema: BenchmarkSchema, task_ids=None) -> dict:
    """Composed score per task (``None`` where missing), in schema order."""
    ids = schema.task_ids if task_ids is None else schema.ordered(task_ids)
    return {t: _task_score(record, schema.task(t), schema) for t in ids}


def task_vector(record: SystemRecord, schema: BenchmarkSchema,
                spec: AggregationSpec) -> np.ndarray:
    spec.check(schema)
    scores = task_scores(record, schema, spec.inclusion)
    missing = [t for t, v in scores.items() if v is None]
    if missing and spec.missing_policy is MissingPolicy.FAIL:
        raise MissingCell(f"{record.system_name}: missing score for {missing}")
    present = [v for v in scores.values() if v is not None]
    if not present:
        raise EmptyAfterSkip(f"{record.system_name}: every included task is missing")
    return np.asarray(present, dtype=np.float64)


def overall_score(record: SystemRecord, schema: BenchmarkSchema,
                  spec: AggregationSpec) -> float:
    return compute_mean(spec.mean, task_vector(record, schema, spec), spec.non_positive)


@dataclass(frozen=True)
class NormalizedRecord:
    system_name: str
    original_rank: int
    ratios: dict
    means: dict = field(default_factory=dict)

    def __getitem__(self, kind) -> float:
        return self.means[MeanKind.parse(kind)]


def normalize_to_reference(table: ScoreTable, schema: BenchmarkSchema,
                           spec: AggregationSpec,
                           reference: Optional[SystemRecord] = None) -> list:
    """Per-task ratios to the reference system, and all three means of them.

    Parameters
    ----------
    table : ScoreTable
    schema : BenchmarkSchema
    spec : AggregationSpec
        Only ``inclusion`` and ``non_positive`` are used; every mean kind is
        computed.
    reference : SystemRecord, optional
        Row to normalize against. Defaults to the table's row named by
        ``schema.reference_system``.

    Returns
    -------
    list of NormalizedRecord
        In table order. Tasks missing for the reference are left out of every
        system's ratios; tasks missing for a system only are left out of that
        system's ratios.
    """
    spec.check(schema)
    if reference is None:
        if schema.reference_system is None:
            raise NoReference(f"schema {schema.benchmark_id!r} declares no reference system")
        reference = table.reference()
        if reference is None:
            raise NoReference(f"reference system {schema.reference_system!r} "
                              "is not in the table")
    ref_scores = {t: v for t, v in task_scores(reference, schema, spec.inclusion).items()
                  if v is not None}
    for t, v in ref_scores.items():
        if v == 0:
            raise DivisionByZeroReference(f"reference score for {t} is zero")
    out = []
    for record in table:
        scores = task_scores(record, schema, ref_scores)
        ratios = {t: scores[t] / ref_scores[t] for t in ref_scores if scores[t] is not None}
        if not ratios:
            raise EmptyAfterSkip(f"{record.system_name}: no task shared with the reference")
        values = list(ratios.values())
        means = {k: compute_mean(k, values, spec.non_positive) for k in MeanKind}
        out.append(NormalizedRecord(record.system_name, record.original_rank, ratios, means))
    return out
