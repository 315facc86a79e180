"""
Scores relative to the human baseline
=====================================

Dividing every task score by the human score on that task gives unitless
ratios. Averaging the ratios (not the overall scores) shows how close each
system is to human level.
"""

from benchmeans import (AggregationSpec, fixture_paths, load_fixture,
                        normalize_to_reference, overall_score, read_table)

schema, table = load_fixture("superglue")
spec = AggregationSpec.for_schema(schema, "gm")

for n in normalize_to_reference(table, schema, spec):
    print(f"{n.system_name:<11} HM {n['hm']:.3f}  GM {n['gm']:.3f}  AM {n['am']:.3f}")

###############################################################################
# A ratio above 1 means the system beats the human baseline on that task.

deberta = next(n for n in normalize_to_reference(table, schema, spec)
               if n.system_name == "DeBERTa")
above = {t: round(r, 3) for t, r in deberta.ratios.items() if r > 1}
print("DeBERTa above human on:", above)

###############################################################################
# The geometric mean of ratios is exactly the ratio of geometric means, which
# is what makes it the natural summary for normalized numbers. The arithmetic
# mean has no such property.

ratio_of_gms = (overall_score(table.record("DeBERTa"), schema, spec)
                / overall_score(table.record("Human"), schema, spec))
print(f"GM of ratios {deberta['gm']:.6f}  vs ratio of GMs {ratio_of_gms:.6f}")

###############################################################################
# GLUE's leaderboard has no human score for the diagnostic set (AX), so the
# default reference skips it. A one-row reference table can supply it.

g_schema, g_table = load_fixture("glue")
ref_path = fixture_paths("glue")[0].parent / "glue_appendix1_reference.csv"
reference = read_table(ref_path, g_schema).record("Human")
g_spec = AggregationSpec.for_schema(g_schema, "gm")
for label, ref in (("without AX", None), ("with AX", reference)):
    rows = normalize_to_reference(g_table, g_schema, g_spec, ref)
    print(label, {n.system_name: round(n["gm"], 3) for n in rows})
