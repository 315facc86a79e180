"""Command line front end.

Exit status: 0 on success, 1 on a data or validation error, 2 on a usage
error. The default output format can be set with ``BENCHMEANS_FORMAT``.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .aggregate import (AggregationSpec, MissingPolicy, normalize_to_reference,
                        overall_score, task_scores)
from .errors import BenchmeansError, MalformedNumber, TooFewSystems
from .means import MeanKind, NonPositivePolicy
from .rank import build_leaderboard, compare_rankings, stats_table, subsample_stability
from .report import Report, ReportFormat, render
from .schema import load_schema, read_table, validate

FORMAT_ENV = "BENCHMEANS_FORMAT"
MEAN_CHOICES = ("am", "gm", "hm")
ALL_ORDER = (MeanKind.ARITHMETIC, MeanKind.HARMONIC, MeanKind.GEOMETRIC)


class DataError(Exception):
    pass


def _load(args):
    try:
        schema = load_schema(args.schema)
    except FileNotFoundError:
        raise DataError(f"{args.schema}: no such file") from None
    except BenchmeansError as exc:
        raise DataError(f"{args.schema}: {exc}") from None
    try:
        table = read_table(args.table, schema)
    except FileNotFoundError:
        raise DataError(f"{args.table}: no such file") from None
    except (BenchmeansError, ValueError, KeyError) as exc:
        where = ""
        if isinstance(exc, MalformedNumber) and exc.row is not None:
            where = f" (row {exc.row}, column {exc.column})"
        raise DataError(f"{args.table}{where}: {exc}") from None
    return schema, table


def _spec(schema, args, mean):
    return AggregationSpec.for_schema(
        schema, mean,
        missing_policy=MissingPolicy(args.missing),
        non_positive=(NonPositivePolicy.EXCLUDE if args.exclude_non_positive
                      else NonPositivePolicy.ERROR))


def cmd_score(args) -> Report:
    schema, table = _load(args)
    kinds = ALL_ORDER if args.mean == "all" else (MeanKind.parse(args.mean),)
    specs = [_spec(schema, args, k) for k in kinds]
    rows = []
    for record in table:
        scores = []
        for spec in specs:
            try:
                scores.append(overall_score(record, schema, spec))
            except BenchmeansError as exc:
                raise DataError(f"{args.table}: {record.system_name}: {exc}") from None
        tasks = list(task_scores(record, schema).values())
        rows.append([record.original_rank, record.system_name] + scores + tasks)
    columns = ["N", "System"] + [k.label for k in kinds] + list(schema.task_ids)
    return Report(columns, rows, args.decimals)


def cmd_rank(args) -> Report:
    schema, table = _load(args)
    if len(table) == 0:
        raise DataError(f"{args.table}: table has no systems")
    board = build_leaderboard(table, schema, _spec(schema, args, args.mean))
    label = board.mean.label
    columns = ["Rank", "System", "N", "Δ", label]
    signed = ["Δ"]
    base = None
    notes, meta = [], {}
    if args.baseline:
        base = build_leaderboard(table, schema, _spec(schema, args, args.baseline))
        b = base.mean.label
        columns += [f"{b} rank", f"Δ {b}"]
        signed.append(f"Δ {b}")
        if len(board) >= 2:
            cmp = compare_rankings(base, board)
            meta = {"kendall_tau": cmp.kendall_tau, "spearman_rho": cmp.spearman_rho}
            notes.append(f"{label} vs {b}: Kendall tau = {cmp.kendall_tau:.4f}, "
                         f"Spearman rho = {cmp.spearman_rho:.4f}")
    rows = []
    for r in board.rows:
        row = [r.rank, r.system_name, r.original_rank, r.delta, r.score]
        if base is not None:
            br = base.rank_of(r.system_name)
            row += [br, br - r.rank]
        rows.append(row)
    return Report(columns, rows, args.decimals, notes, meta, tuple(signed))


def cmd_normalize(args) -> Report:
    schema, table = _load(args)
    reference = None
    if args.reference_table:
        ref_table = read_table(args.reference_table, schema)
        if len(ref_table) != 1:
            raise DataError(f"{args.reference_table}: expected exactly one reference row, "
                            f"got {len(ref_table)}")
        reference = ref_table.records[0]
    spec = _spec(schema, args, MeanKind.GEOMETRIC)
    normalized = normalize_to_reference(table, schema, spec, reference)
    tasks = schema.ordered(spec.inclusion)
    rows = [[n.original_rank, n.system_name, n.means[MeanKind.HARMONIC],
             n.means[MeanKind.GEOMETRIC], n.means[MeanKind.ARITHMETIC]]
            + [n.ratios.get(t) for t in tasks] for n in normalized]
    decimals = 3 if args.decimals is None else args.decimals
    return Report(["N", "System", "HM", "GM", "AM"] + tasks, rows, decimals)


def cmd_stats(args) -> Report:
    schema, table = _load(args)
    systems = None
    if args.top is not None:
        systems = [r.system_name for r in sorted(table, key=lambda r: r.original_rank)][:args.top]
    inclusion = args.tasks.split(",") if args.tasks else None
    rows = stats_table(table, schema, inclusion, systems,
                       NonPositivePolicy.EXCLUDE if args.exclude_non_positive
                       else NonPositivePolicy.ERROR)
    out = [[s.original_rank, s.system_name, s.am, s.gm, s.hm, s.sum, s.variance, s.std]
           for s in rows]
    return Report(["N", "System", "AM", "GM", "HM", "Sum", "Var", "Std"], out, args.decimals)


def cmd_stability(args) -> Report:
    schema, table = _load(args)
    spec = _spec(schema, args, args.mean)
    n_tasks = len(spec.inclusion)
    if args.k == "full":
        k = n_tasks
    else:
        try:
            k = int(args.k)
        except ValueError:
            raise DataError(f"--k must be an integer or 'full', got {args.k!r}") from None
    rep = subsample_stability(table, schema, spec, k, args.trials, args.seed, args.exhaustive)
    n_sys = len(rep.full_order)
    columns = ["System", "N", "Full rank", "Mean rank"] + [f"P(rank {i})"
                                                           for i in range(1, n_sys + 1)]
    orig = {r.system_name: r.original_rank for r in table}
    rows = []
    for i, name in enumerate(rep.full_order, start=1):
        rows.append([name, orig[name], i, rep.mean_rank(name)]
                    + [float(p) for p in rep.rank_frequencies(name)])
    how = (f"all {rep.trials} subsets" if rep.exhaustive
           else f"{rep.trials} random draws, seed {rep.seed}")
    notes = [f"{rep.mean.label} over {k} of {n_tasks} tasks ({how}): top-1 system differs "
             f"from the full-set leader in {rep.top1_change_frequency:.2%} of draws"]
    meta = {"k": k, "trials": rep.trials, "seed": rep.seed, "exhaustive": rep.exhaustive,
            "top1_change_frequency": rep.top1_change_frequency}
    return Report(columns, rows, args.decimals, notes, meta)


def cmd_validate(args) -> Report:
    schema, table = _load(args)
    findings = validate(table)
    rows = [[f.severity, f.kind, f.system, f.column, f.message] for f in findings]
    report = Report(["Severity", "Kind", "System", "Column", "Message"], rows, args.decimals)
    report.meta = {"errors": sum(f.severity == "error" for f in findings)}
    return report


def _non_negative_int(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="benchmeans",
        description="Recompute benchmark leaderboards under arithmetic, geometric "
                    "and harmonic means.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, decimals=2):
        p.add_argument("schema", help="benchmark schema (JSON)")
        p.add_argument("table", help="score table (CSV or JSON)")
        p.add_argument("--format", choices=[f.value for f in ReportFormat], default=None,
                       help=f"output format (default: ${FORMAT_ENV} or markdown)")
        p.add_argument("--decimals", type=_non_negative_int, default=decimals)
        p.add_argument("--missing", choices=[m.value for m in MissingPolicy], default="skip")
        p.add_argument("--exclude-non-positive", action="store_true",
                       help="drop scores <= 0 from geometric/harmonic means instead of failing")

    p = sub.add_parser("score", help="overall scores per system")
    common(p)
    p.add_argument("--mean", choices=MEAN_CHOICES + ("all",), default="all")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("rank", help="leaderboard under one mean")
    common(p)
    p.add_argument("--mean", choices=MEAN_CHOICES, default="gm")
    p.add_argument("--baseline", choices=MEAN_CHOICES, default=None)
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("normalize", help="per-task ratios to the reference system")
    common(p, decimals=None)
    p.add_argument("--reference-table", default=None,
                   help="one-row table to normalize against instead of the schema's reference row")
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("stats", help="sum, variance, std and means per system")
    common(p)
    p.add_argument("--top", type=int, default=None, help="only the N best original ranks")
    p.add_argument("--tasks", default=None, help="comma-separated inclusion set")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("stability", help="re-rank on random task subsets")
    common(p)
    p.add_argument("--mean", choices=MEAN_CHOICES, default="gm")
    p.add_argument("--k", default="full", help="tasks per draw, or 'full'")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--exhaustive", action="store_true", help="use every k-subset once")
    p.set_defaults(func=cmd_stability)

    p = sub.add_parser("validate", help="list missing, non-positive and out-of-range cells")
    common(p)
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    fmt = args.format or os.environ.get(FORMAT_ENV) or ReportFormat.MARKDOWN.value
    if fmt not in {f.value for f in ReportFormat}:
        parser.error(f"{FORMAT_ENV}={fmt!r} is not one of markdown, csv, json")
    try:
        report = args.func(args)
    except DataError as exc:
        print(f"benchmeans: error: {exc}", file=sys.stderr)
        return 1
    except (BenchmeansError, TooFewSystems) as exc:
        print(f"benchmeans: error: {Path(args.table).name}: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"benchmeans: error: {exc.filename}: no such file", file=sys.stderr)
        return 1
    sys.stdout.write(render(report, fmt))
    if args.command == "validate" and report.meta["errors"]:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
