"""Recompute multi-task benchmark leaderboards under the three Pythagorean means."""

from .aggregate import (AggregationSpec, MissingPolicy, NormalizedRecord,
                        normalize_to_reference, overall_score, task_scores,
                        task_vector, two_step_average)
from .errors import *  # noqa: F401,F403
from .means import (MeanKind, NonPositivePolicy, arithmetic_mean, compute_mean,
                    geometric_mean, harmonic_mean, sample_std, sample_variance,
                    sum_scores)
from .rank import (LeaderboardRow, RankComparison, RankedLeaderboard, StabilityReport,
                   StatsRow, build_leaderboard, compare_rankings, kendall_tau,
                   spearman_rho, stats_table, subsample_stability)
from .schema import (BenchmarkSchema, Composition, FIXTURES, Finding, ScoreTable,
                     SystemRecord, TaskSchema, compose_task_score, fixture_paths,
                     load_fixture, load_schema, parse_number, parse_table, read_table,
                     serialize_table, validate)

__version__ = "0.1.0"
