"""
How much does the task selection decide the winner?
===================================================

Draw random subsets of tasks, re-rank, and count how often the leader
changes. With the full task set the leader never changes; with small
subsets it often does.
"""

import numpy as np

from benchmeans import AggregationSpec, load_fixture, subsample_stability

schema, table = load_fixture("glue")

for kind in ("am", "gm"):
    spec = AggregationSpec.for_schema(schema, kind)
    n_tasks = len(spec.inclusion)
    print(f"\n{kind.upper()} ({n_tasks} tasks)")
    for k in (2, 4, 6, 8, n_tasks):
        rep = subsample_stability(table, schema, spec, k=k, trials=2000, seed=42)
        print(f"  k={k:2d}: leader changes in {rep.top1_change_frequency:6.1%} of draws")

###############################################################################
# Per-system rank distribution for one setting.

spec = AggregationSpec.for_schema(schema, "gm")
rep = subsample_stability(table, schema, spec, k=5, trials=2000, seed=42)
for name in rep.full_order:
    freqs = np.round(rep.rank_frequencies(name), 2)
    print(f"{name:<14} mean rank {rep.mean_rank(name):.2f}  {freqs.tolist()}")

###############################################################################
# For small benchmarks, enumerate every subset instead of sampling.

x_schema, x_table = load_fixture("xtreme")
rep = subsample_stability(x_table, x_schema, AggregationSpec.for_schema(x_schema, "gm"),
                          k=2, exhaustive=True)
print(f"\nXTREME, all {rep.trials} pairs of categories: "
      f"leader changes in {rep.top1_changes} of them")
