"""Leaderboards, rank comparison, dispersion statistics and subsampling.

Ties in score are broken by the smaller original leaderboard rank, then by
system name, so every leaderboard is fully determined by its inputs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .aggregate import AggregationSpec, MissingPolicy, overall_score, task_scores
from .errors import BenchmeansError, EmptyAfterSkip, InvalidK, MissingCell, TooFewSystems
from .means import (MeanKind, NonPositivePolicy, arithmetic_mean, compute_mean,
                    geometric_mean, harmonic_mean, sample_std, sample_variance,
                    sum_scores)
from .schema import BenchmarkSchema, ScoreTable

__all__ = [
    "LeaderboardRow",
    "RankedLeaderboard",
    "RankComparison",
    "StatsRow",
    "StabilityReport",
    "rank_order",
    "build_leaderboard",
    "kendall_tau",
    "spearman_rho",
    "compare_rankings",
    "stats_table",
    "subsample_stability",
]


@dataclass(frozen=True)
class LeaderboardRow:
    rank: int
    system_name: str
    score: float
    original_rank: int

    @property
    def delta(self) -> int:
        """Places gained relative to the original leaderboard (positive = moved up)."""
        return self.original_rank - self.rank


@dataclass(frozen=True)
class RankedLeaderboard:
    mean: MeanKind
    rows: tuple

    @property
    def order(self) -> list:
        return [r.system_name for r in self.rows]

    def row(self, name: str) -> LeaderboardRow:
        for r in self.rows:
            if r.system_name == name:
                return r
        raise KeyError(name)

    def rank_of(self, name: str) -> int:
        return self.row(name).rank

    def __len__(self):
        return len(self.rows)


def rank_order(entries):
    """Sort ``(name, score, original_rank)`` triples best-first with the tie rules."""
    return sorted(entries, key=lambda e: (-e[1], e[2], e[0]))


def _rank(entries, mean) -> RankedLeaderboard:
    ordered = rank_order(entries)
    rows = tuple(LeaderboardRow(i, name, score, orig)
                 for i, (name, score, orig) in enumerate(ordered, start=1))
    return RankedLeaderboard(MeanKind.parse(mean), rows)


def build_leaderboard(table: ScoreTable, schema: BenchmarkSchema,
                      spec: AggregationSpec) -> RankedLeaderboard:
    if len(table) == 0:
        raise TooFewSystems("cannot rank an empty table")
    entries = []
    for record in table:
        try:
            score = overall_score(record, schema, spec)
        except BenchmeansError as exc:
            raise type(exc)(f"{record.system_name}: {exc}") from exc
        entries.append((record.system_name, score, record.original_rank))
    return _rank(entries, spec.mean)


def kendall_tau(a, b) -> float:
    """Kendall tau-a between two rankings given as sequences of names, best first.

    Only names present in both sequences are compared.
    """
    common = set(a) & set(b)
    pos_a = {n: i for i, n in enumerate(x for x in a if x in common)}
    pos_b = {n: i for i, n in enumerate(x for x in b if x in common)}
    names = sorted(common)
    m = len(names)
    if m < 2:
        raise TooFewSystems(f"rank correlation needs at least 2 common systems, got {m}")
    concordant = discordant = 0
    for x, y in itertools.combinations(names, 2):
        s = (pos_a[x] - pos_a[y]) * (pos_b[x] - pos_b[y])
        if s > 0:
            concordant += 1
        elif s < 0:
            discordant += 1
    return (concordant - discordant) / (m * (m - 1) / 2)


def spearman_rho(a, b) -> float:
    """Spearman rho on ranks re-derived within the systems common to `a` and `b`."""
    common = set(a) & set(b)
    ra = {n: i for i, n in enumerate(x for x in a if x in common)}
    rb = {n: i for i, n in enumerate(x for x in b if x in common)}
    m = len(common)
    if m < 2:
        raise TooFewSystems(f"rank correlation needs at least 2 common systems, got {m}")
    d2 = sum((ra[n] - rb[n]) ** 2 for n in common)
    return 1.0 - 6.0 * d2 / (m * (m * m - 1))


@dataclass(frozen=True)
class RankComparison:
    displacement: dict  # name -> (rank in a, rank in b)
    kendall_tau: float
    spearman_rho: float

    def shift(self, name: str) -> int:
        """Places gained going from leaderboard `a` to `b`."""
        ra, rb = self.displacement[name]
        return ra - rb


def compare_rankings(a: RankedLeaderboard, b: RankedLeaderboard) -> RankComparison:
    common = set(a.order) & set(b.order)
    if len(common) < 2:
        raise TooFewSystems(f"need at least 2 systems in common, got {len(common)}")
    displacement = {n: (a.rank_of(n), b.rank_of(n)) for n in a.order if n in common}
    return RankComparison(displacement, kendall_tau(a.order, b.order),
                          spearman_rho(a.order, b.order))


@dataclass(frozen=True)
class StatsRow:
    system_name: str
    original_rank: int
    n: int
    sum: float
    variance: float
    std: float
    am: float
    gm: float
    hm: float


def stats_table(table: ScoreTable, schema: BenchmarkSchema, inclusion=None,
                systems=None,
                non_positive: NonPositivePolicy = NonPositivePolicy.ERROR) -> list:
    """Sum, sample variance/std and the three means of each system's task scores.

    `inclusion` defaults to the schema's geometric-mean task set. `systems`,
    if given, restricts and orders the output rows.
    """
    inclusion = schema.inclusion(MeanKind.GEOMETRIC) if inclusion is None else inclusion
    spec = AggregationSpec(MeanKind.ARITHMETIC, inclusion)
    spec.check(schema)
    records = list(table) if systems is None else [table.record(n) for n in systems]
    rows = []
    for record in records:
        scores = [v for v in task_scores(record, schema, spec.inclusion).values()
                  if v is not None]
        if not scores:
            raise EmptyAfterSkip(f"{record.system_name}: every included task is missing")
        try:
            rows.append(StatsRow(
                record.system_name, record.original_rank, len(scores),
                sum_scores(scores), sample_variance(scores), sample_std(scores),
                arithmetic_mean(scores), geometric_mean(scores, non_positive),
                harmonic_mean(scores, non_positive)))
        except BenchmeansError as exc:
            raise type(exc)(f"{record.system_name}: {exc}") from exc
    return rows


@dataclass
class StabilityReport:
    """Outcome of re-ranking systems on task subsets.

    ``rank_counts[name][r - 1]`` is how many draws put `name` at rank `r`.
    """

    mean: MeanKind
    k: int
    trials: int
    seed: Optional[int]
    exhaustive: bool
    full_order: list
    rank_counts: dict = field(default_factory=dict)
    top1_changes: int = 0
    subsets: list = field(default_factory=list)

    @property
    def top1_change_frequency(self) -> float:
        return self.top1_changes / self.trials

    def rank_frequencies(self, name: str) -> np.ndarray:
        return np.asarray(self.rank_counts[name], dtype=float) / self.trials

    def mean_rank(self, name: str) -> float:
        counts = np.asarray(self.rank_counts[name], dtype=float)
        return float(np.dot(counts, np.arange(1, counts.size + 1)) / self.trials)

    def to_dict(self) -> dict:
        return {
            "mean": self.mean.value,
            "k": self.k,
            "trials": self.trials,
            "seed": self.seed,
            "exhaustive": self.exhaustive,
            "full_order": list(self.full_order),
            "top1_changes": self.top1_changes,
            "top1_change_frequency": self.top1_change_frequency,
            "rank_counts": {n: list(c) for n, c in self.rank_counts.items()},
        }


def subsample_stability(table: ScoreTable, schema: BenchmarkSchema, spec: AggregationSpec,
                        k: int, trials: int = 1000, seed: Optional[int] = 0,
                        exhaustive: bool = False) -> StabilityReport:
    """Re-rank every system on random `k`-task subsets of the inclusion set.

    Draws come from a PCG64 generator seeded with `seed`, so a report is
    reproducible across platforms. With ``exhaustive=True`` every `k`-subset
    is used exactly once instead and `trials`/`seed` are ignored.
    """
    spec.check(schema)
    tasks = schema.ordered(spec.inclusion)
    if not 2 <= k <= len(tasks):
        raise InvalidK(f"k must lie in [2, {len(tasks)}], got {k}")
    if not exhaustive and trials < 1:
        raise InvalidK(f"trials must be at least 1, got {trials}")
    if len(table) == 0:
        raise TooFewSystems("cannot rank an empty table")

    # task scores are composed once; each draw only re-aggregates
    per_system = []
    for record in table:
        scores = task_scores(record, schema, tasks)
        missing = [t for t, v in scores.items() if v is None]
        if missing and spec.missing_policy is MissingPolicy.FAIL:
            raise MissingCell(f"{record.system_name}: missing score for {missing}")
        per_system.append((record.system_name, record.original_rank, scores))

    def leaderboard(subset):
        entries = []
        for name, orig, scores in per_system:
            values = [scores[t] for t in subset if scores[t] is not None]
            if not values:
                raise EmptyAfterSkip(f"{name}: every task in subset {list(subset)} is missing")
            try:
                entries.append((name, compute_mean(spec.mean, values, spec.non_positive), orig))
            except BenchmeansError as exc:
                raise type(exc)(f"{name}: {exc}") from exc
        return [e[0] for e in rank_order(entries)]

    if exhaustive:
        subsets = list(itertools.combinations(tasks, k))
        seed = None
    else:
        rng = np.random.Generator(np.random.PCG64(seed))
        subsets = [tuple(tasks[i] for i in np.sort(rng.choice(len(tasks), size=k, replace=False)))
                   for _ in range(trials)]

    full = leaderboard(tasks)
    n_sys = len(per_system)
    report = StabilityReport(MeanKind.parse(spec.mean), k, len(subsets), seed, exhaustive,
                             full, {name: [0] * n_sys for name, _, _ in per_system},
                             subsets=subsets)
    for subset in subsets:
        order = leaderboard(subset)
        for r, name in enumerate(order):
            report.rank_counts[name][r] += 1
        if order[0] != full[0]:
            report.top1_changes += 1
    return report
