"""
Re-ranking SuperGLUE under three means
======================================

The official overall score is an arithmetic mean of task scores. Here we
recompute the six top rows under the geometric and harmonic means and see
who moves.
"""

from benchmeans import AggregationSpec, build_leaderboard, compare_rankings, load_fixture

schema, table = load_fixture("superglue")

# The arithmetic mean uses the eight scored tasks; the other two means also
# include the two diagnostic sets.
for kind in ("am", "gm", "hm"):
    print(kind, sorted(schema.inclusion(kind)))

###############################################################################
# Build one leaderboard per mean.

boards = {}
for kind in ("am", "gm", "hm"):
    boards[kind] = build_leaderboard(table, schema, AggregationSpec.for_schema(schema, kind))

for kind, board in boards.items():
    print(f"\n{kind.upper()}")
    for row in board.rows:
        print(f"  {row.rank}. {row.system_name:<11} {row.score:6.2f}   (was {row.original_rank})")

###############################################################################
# How different are the orderings? Kendall tau counts the pairs of systems
# whose relative order flips.

cmp = compare_rankings(boards["am"], boards["gm"])
print(f"\nKendall tau {cmp.kendall_tau:.2f}, Spearman rho {cmp.spearman_rho:.2f}")
for name, (before, after) in cmp.displacement.items():
    if before != after:
        print(f"  {name}: {before} -> {after}")
