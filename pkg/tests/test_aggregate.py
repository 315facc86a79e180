import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from benchmeans import (AggregationSpec, DivisionByZeroReference, EmptyAfterSkip, MeanKind,
                        MissingCell, MissingPolicy, NoReference, NonPositivePolicy,
                        NonPositiveValue, SchemaError, SystemRecord, geometric_mean,
                        normalize_to_reference, overall_score, parse_table, task_vector,
                        two_step_average)
from benchmeans.report import round_half_up
from benchmeans.schema import schema_from_dict


@pytest.fixture
def multilingual():
    schema = schema_from_dict({
        "benchmark_id": "ml", "languages": ["en", "de", "fr", "ja"],
        "tasks": [{"id": "NER", "metrics": ["f1"], "per_language": True},
                  {"id": "QA", "metrics": ["f1", "em"], "per_language": True},
                  {"id": "RET", "metrics": ["acc"], "per_language": False}]})
    table = parse_table(
        "system,rank,NER.f1@en,NER.f1@de,NER.f1@fr,NER.f1@ja,"
        "QA.f1@en,QA.em@en,QA.f1@de,QA.em@de,QA.f1@fr,QA.em@fr,QA.f1@ja,QA.em@ja,RET.acc\n"
        "A,1,97,96,-,98,80,60,-,-,-,-,-,-,75.4\n"
        "B,2,70,80,90,-,-,-,-,-,-,-,-,-,-\n",
        "csv", schema)
    return schema, table


def test_glue_human_skip_drops_ax(glue):
    schema, table = glue
    spec = AggregationSpec.for_schema(schema, "gm")
    v = task_vector(table.record("Human"), schema, spec)
    assert v.size == 10
    assert geometric_mean(v) == pytest.approx(86.906, abs=5e-4)


def test_glue_human_fail_policy(glue):
    schema, table = glue
    spec = AggregationSpec.for_schema(schema, "gm", missing_policy=MissingPolicy.FAIL)
    with pytest.raises(MissingCell):
        task_vector(table.record("Human"), schema, spec)


def test_superglue_deberta_vector(superglue):
    schema, table = superglue
    spec = AggregationSpec.for_schema(schema, "gm")
    v = task_vector(table.record("DeBERTa"), schema, spec)
    np.testing.assert_allclose(v, [90.4, 96.65, 98.4, 75.95, 94.3, 93.2, 77.5, 95.9, 66.7, 93.55])


def test_two_step_examples(multilingual):
    schema, table = multilingual
    a, b = table.record("A"), table.record("B")
    assert two_step_average(a, schema.task("NER"), schema) == pytest.approx(oracles.am([97, 96, 98]))
    assert two_step_average(a, schema.task("NER"), schema) == pytest.approx(97.0)
    assert two_step_average(b, schema.task("NER"), schema) == pytest.approx(80.0)
    assert two_step_average(a, schema.task("QA"), schema) == pytest.approx(70.0)
    assert two_step_average(a, schema.task("RET"), schema) == 75.4
    assert two_step_average(b, schema.task("QA"), schema) is None


def test_two_step_requires_languages(superglue):
    schema, table = superglue
    with pytest.raises(SchemaError):
        two_step_average(table.record("Human"), schema.task("CB"), schema)


def test_multilingual_overall(multilingual):
    schema, table = multilingual
    spec = AggregationSpec(MeanKind.ARITHMETIC, schema.task_ids)
    v = task_vector(table.record("A"), schema, spec)
    np.testing.assert_allclose(v, [97.0, 70.0, 75.4])
    assert overall_score(table.record("A"), schema, spec) == pytest.approx(oracles.am([97, 70, 75.4]))
    assert task_vector(table.record("B"), schema, spec).tolist() == [80.0]


def test_overall_examples(superglue, glue, xtreme):
    s_schema, s_table = superglue
    assert round(overall_score(s_table.record("DeBERTa"), s_schema,
                               AggregationSpec.for_schema(s_schema, "gm")), 2) == 87.60
    g_schema, g_table = glue
    assert round(overall_score(g_table.record("Human"), g_schema,
                               AggregationSpec.for_schema(g_schema, "hm")), 2) == 86.16
    x_schema, x_table = xtreme
    assert round(overall_score(x_table.record("VECO"), x_schema,
                               AggregationSpec.for_schema(x_schema, "hm")), 2) == 81.27


def test_spec_invariants(superglue):
    schema, table = superglue
    with pytest.raises(SchemaError):
        AggregationSpec(MeanKind.ARITHMETIC, [])
    with pytest.raises(SchemaError):
        overall_score(table.record("Human"), schema, AggregationSpec("am", {"NotATask"}))


def test_empty_after_skip(glue):
    schema, table = glue
    with pytest.raises(EmptyAfterSkip):
        task_vector(table.record("Human"), schema, AggregationSpec("gm", {"AX"}))


def test_non_positive_policy(superglue):
    schema, _ = superglue
    t = parse_table("system,rank,BoolQ.acc,AX-b.mcc\nX,1,80,-0.3\n", "csv", schema)
    r = t.record("X")
    inc = {"BoolQ", "AX-b"}
    with pytest.raises(NonPositiveValue):
        overall_score(r, schema, AggregationSpec("gm", inc))
    assert overall_score(r, schema, AggregationSpec("gm", inc,
                         non_positive=NonPositivePolicy.EXCLUDE)) == pytest.approx(80.0)
    assert overall_score(r, schema, AggregationSpec("am", inc)) == pytest.approx(39.85)


def test_skip_consistency(glue):
    schema, table = glue
    human = table.record("Human")
    for kind in MeanKind:
        full = AggregationSpec.for_schema(schema, kind)
        explicit = AggregationSpec(kind, full.inclusion - {"AX"})
        assert overall_score(human, schema, full) == overall_score(human, schema, explicit)


@given(st.sampled_from(range(10)), st.floats(min_value=0.01, max_value=20))
def test_monotone_in_each_task(idx, bump):
    schema = schema_from_dict({"benchmark_id": "m", "tasks": [
        {"id": f"t{i}", "metrics": ["s"]} for i in range(10)]})
    base = [89, 97.35, 100, 66.85, 91.5, 93.6, 80, 100, 76.6, 99.5]
    raised = list(base)
    raised[idx] += bump
    mk = lambda vals: SystemRecord("X", 1, {(f"t{i}", None, "s"): v for i, v in enumerate(vals)})
    for kind in MeanKind:
        spec = AggregationSpec(kind, schema.task_ids)
        assert overall_score(mk(raised), schema, spec) > overall_score(mk(base), schema, spec)


def test_normalize_examples(superglue):
    schema, table = superglue
    spec = AggregationSpec.for_schema(schema, "gm")
    norm = {n.system_name: n for n in normalize_to_reference(table, schema, spec)}
    assert round(norm["DeBERTa"].ratios["BoolQ"], 3) == 1.016
    human = norm["Human"]
    assert set(human.ratios.values()) == {1.0}
    assert all(v == 1.0 for v in human.means.values())
    d = norm["DeBERTa"]
    assert round(d["am"], 3) == 0.989
    assert round(d["hm"], 3) == 0.985
    assert round(d["gm"], 3) == 0.987


def test_normalized_means_against_oracle(superglue):
    schema, table = superglue
    spec = AggregationSpec.for_schema(schema, "gm")
    human = task_vector(table.record("Human"), schema, spec)
    for n in normalize_to_reference(table, schema, spec):
        model = task_vector(table.record(n.system_name), schema, spec)
        ratios = list(model / human)
        for kind in MeanKind:
            assert n.means[kind] == pytest.approx(oracles.MEANS[kind.value](ratios), rel=1e-12)


def test_gm_ratio_identity(superglue, glue):
    for schema, table in (superglue, glue):
        spec = AggregationSpec.for_schema(schema, "gm")
        ref = table.reference()
        ref_gm = overall_score(ref, schema, spec)
        for n in normalize_to_reference(table, schema, spec):
            model = table.record(n.system_name)
            # restrict the model to the reference's present tasks
            shared = AggregationSpec("gm", set(n.ratios))
            assert n.means[MeanKind.GEOMETRIC] * ref_gm == pytest.approx(
                overall_score(model, schema, shared), rel=1e-9)


def test_ratio_of_means_is_not_mean_of_ratios(superglue):
    schema, table = superglue
    spec = AggregationSpec.for_schema(schema, "gm")
    d = {n.system_name: n for n in normalize_to_reference(table, schema, spec)}["DeBERTa"]
    assert round(d["am"], 3) == 0.989
    assert round(90.3 / 89.8, 3) == 1.006
    assert d["am"] < 90.3 / 89.8


def test_reference_missing_task_excluded(glue):
    schema, table = glue
    spec = AggregationSpec.for_schema(schema, "gm")
    for n in normalize_to_reference(table, schema, spec):
        assert "AX" not in n.ratios
        assert len(n.ratios) == 10


def test_no_reference(xglue_nlu, superglue):
    schema, table = xglue_nlu
    with pytest.raises(NoReference):
        normalize_to_reference(table, schema, AggregationSpec.for_schema(schema, "gm"))
    s_schema, s_table = superglue
    no_human = parse_table("system,rank,BoolQ.acc\nX,1,80\n", "csv", s_schema)
    with pytest.raises(NoReference):
        normalize_to_reference(no_human, s_schema, AggregationSpec.for_schema(s_schema, "gm"))


def test_zero_reference(superglue):
    schema, _ = superglue
    t = parse_table("system,rank,BoolQ.acc\nHuman,1,0\nX,2,80\n", "csv", schema)
    with pytest.raises(DivisionByZeroReference):
        normalize_to_reference(t, schema, AggregationSpec("gm", {"BoolQ"}))


def test_superglue_am_agrees_at_one_decimal(superglue):
    # leaderboard AMs are published to one decimal from unrounded task scores
    printed = {"Human": 89.8, "DeBERTa": 90.3, "T5+Meena": 90.2, "T5": 89.3,
               "PAI Albert": 86.1, "NEZHA Plus": 86.7}
    schema, table = superglue
    spec = AggregationSpec.for_schema(schema, "am")
    for name, want in printed.items():
        assert round_half_up(overall_score(table.record(name), schema, spec), 1) == want
