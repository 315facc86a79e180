"""
Describing your own benchmark
=============================

A schema lists tasks, their metrics and, for multilingual benchmarks, the
languages. Tasks scored per language are averaged over languages first and
then across tasks.
"""

from benchmeans import (AggregationSpec, NonPositivePolicy, build_leaderboard, load_schema,
                        parse_table, validate)

schema = load_schema({
    "benchmark_id": "toy-multilingual",
    "languages": ["en", "de", "sw"],
    "tasks": [
        {"id": "NLI", "metrics": ["acc"], "per_language": True},
        {"id": "QA", "metrics": ["f1", "em"], "composition": "mean", "per_language": True},
        {"id": "Diag", "metrics": ["mcc"], "per_language": False},
    ],
    "inclusion_sets": {"am": ["NLI", "QA"], "gm": ["NLI", "QA", "Diag"],
                       "hm": ["NLI", "QA", "Diag"]},
})

csv_text = """system,rank,NLI.acc@en,NLI.acc@de,NLI.acc@sw,QA.f1@en,QA.em@en,QA.f1@de,QA.em@de,QA.f1@sw,QA.em@sw,Diag.mcc
alpha,1,91,88,70,85,75,80,70,-,-,40
beta,2,89,87,79,83,73,81,71,60,50,"-0,4"
"""
table = parse_table(csv_text, "csv", schema)

###############################################################################
# Validation reports problems without raising.

for finding in validate(table):
    print(finding.severity, finding.message)

###############################################################################
# A negative diagnostic score blocks the geometric mean unless excluded.

try:
    build_leaderboard(table, schema, AggregationSpec.for_schema(schema, "gm"))
except ValueError as exc:
    print("error:", exc)

spec = AggregationSpec.for_schema(schema, "gm", non_positive=NonPositivePolicy.EXCLUDE)
for row in build_leaderboard(table, schema, spec).rows:
    print(row.rank, row.system_name, round(row.score, 2))
