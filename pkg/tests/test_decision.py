import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from generators import decision_dag, inject_cycle, inject_unreachable
from normforge.decision import (
    DecisionEdge,
    DecisionModel,
    DecisionNode,
    FindingCode,
    NodeKind,
    ProceduralNormRef,
    Trace,
    enumerate_traces,
    integrate_case_model,
    load_model,
    model_from_dict,
    model_to_dict,
    traverse,
    validate_model,
)
from normforge.errors import IdCollision, MissingAnswer, NoSuchAnswer, UnknownNode, ValidationFailed

DEGENERATE = DecisionModel(
    "na", "none", (DecisionNode("na", NodeKind.OUTCOME, verdict="not applicable"),), (), "na"
)


@pytest.fixture
def section_model(fixtures_dir):
    return load_model(fixtures_dir / "section112" / "section112.dmodel.json")


@pytest.fixture
def cases(fixtures_dir):
    d = fixtures_dir / "section112" / "cases"
    return load_model(d / "in_re_ruschig.dmodel.json"), load_model(d / "pfizer_v_teva.dmodel.json")


def codes(findings):
    return {f.code for f in findings}


def test_degenerate_model_is_valid():
    assert validate_model(DEGENERATE) == []


def test_degenerate_traversal():
    t = traverse(DEGENERATE, {})
    assert t == Trace((("na", None),), (), "not applicable")


def test_cycle_is_reported_with_members(section_model):
    m = DecisionModel(
        section_model.id, section_model.section_citation, section_model.nodes,
        section_model.edges + (DecisionEdge("D", "A", "maybe"),), section_model.entry,
    )
    findings = [f for f in validate_model(m) if f.code is FindingCode.CYCLE_DETECTED]
    assert len(findings) == 1
    assert set(findings[0].cycle) == {"A", "D"}


def test_fixture_validates(section_model, section112):
    assert validate_model(section_model, section112.rulebase("us_patent_law")) == []


def test_unresolved_procedure(section_model):
    from normforge.rules import RuleBase

    findings = validate_model(section_model, RuleBase("us_patent_law"))
    assert codes(findings) == {FindingCode.UNRESOLVED_PROCEDURE}


@pytest.mark.parametrize(
    "node, code",
    [
        (DecisionNode("x", NodeKind.DECISION), FindingCode.FIELD_MISMATCH),
        (DecisionNode("x", NodeKind.OUTCOME, verdict="v", prompt="p?"), FindingCode.FIELD_MISMATCH),
        (DecisionNode("x", NodeKind.PROCEDURE), FindingCode.FIELD_MISMATCH),
    ],
)
def test_field_mismatch(node, code):
    m = DecisionModel("m", "c", (node,), (), "x")
    assert code in codes(validate_model(m))


def test_duplicate_labels_and_dangling_edges():
    nodes = (
        DecisionNode("a", NodeKind.DECISION, prompt="?"),
        DecisionNode("o", NodeKind.OUTCOME, verdict="v"),
    )
    m = DecisionModel("m", "c", nodes, (DecisionEdge("a", "o", "yes"), DecisionEdge("a", "o", "yes"),
                                         DecisionEdge("a", "ghost", "no")), "a")
    assert {FindingCode.DUPLICATE_ANSWER, FindingCode.DANGLING_EDGE} <= codes(validate_model(m))


def test_procedure_needs_one_unlabelled_exit(section_model):
    edges = tuple(e for e in section_model.edges if e.source != "P_7_33_01")
    m = DecisionModel(section_model.id, "c", section_model.nodes, edges, "A")
    assert FindingCode.PROCEDURE_EXIT in codes(validate_model(m))


# -- integration -----------------------------------------------------------

def test_integrate_one_case(section_model, cases):
    ruschig, _ = cases
    merged = integrate_case_model(section_model, ruschig, "D")
    labels = [e.answer for e in merged.outgoing("D")]
    assert labels == ["yes", "no", "In_re_Ruschig"]


def test_integrate_both_cases(section_model, cases, section112):
    rb = section112.rulebase("us_patent_law")
    merged = section_model
    for case in cases:
        merged = integrate_case_model(merged, case, "D", rb)
    before = section_model.outgoing("D")
    after = merged.outgoing("D")
    assert len(after) == len(before) + 2
    assert len({e.answer for e in after}) == len(after)
    assert validate_model(merged, rb) == []
    # monotone: nothing pre-existing removed or relabelled
    assert set(section_model.nodes) <= set(merged.nodes)
    assert set(section_model.edges) <= set(merged.edges)


def test_integrated_branch_traversal(section_model, cases):
    ruschig, _ = cases
    merged = integrate_case_model(section_model, ruschig, "D")
    t = traverse(merged, {"A": "yes", "D": "In_re_Ruschig", "In_re_Ruschig/Q": "no"})
    assert t.path[-1][0] == "In_re_Ruschig/O_reject"
    assert t.verdict.startswith("reject")


def test_integrate_unknown_node(section_model, cases):
    with pytest.raises(UnknownNode):
        integrate_case_model(section_model, cases[0], "Z")


def test_integrate_twice_collides(section_model, cases):
    once = integrate_case_model(section_model, cases[0], "D")
    with pytest.raises(IdCollision):
        integrate_case_model(once, cases[0], "A")


def test_integrate_at_outcome_fails(section_model, cases):
    with pytest.raises(ValidationFailed):
        integrate_case_model(section_model, cases[0], "O_enabled")


# -- traversal -------------------------------------------------------------

def test_rejection_path(section_model):
    t = traverse(section_model, {"A": "yes", "D": "yes"})
    assert ProceduralNormRef("mpep_7_33_01", "MPEP 7.33.01") in t.triggered
    assert t.verdict == "reject: disclosure not enabling"
    assert [p[0] for p in t.path] == ["A", "D", "P_7_33_01", "O_not_enabling"]


def test_missing_answer(section_model):
    with pytest.raises(MissingAnswer) as err:
        traverse(section_model, {"A": "yes"})
    assert err.value.node == "D"


def test_no_such_answer(section_model):
    with pytest.raises(NoSuchAnswer) as err:
        traverse(section_model, {"A": "perhaps"})
    assert (err.value.node, err.value.label) == ("A", "perhaps")


def test_invalid_model_is_not_traversed():
    bad = DecisionModel("m", "c", (DecisionNode("a", NodeKind.DECISION, prompt="?"),), (), "a")
    with pytest.raises(ValidationFailed):
        traverse(bad, {"a": "yes"})


def test_three_decisions_give_eight_traces(fixtures_dir):
    m = load_model(fixtures_dir / "three_decisions.dmodel.json")
    traces = [t for _, t in enumerate_traces(m)]
    assert len(traces) == 8
    assert len(set(traces)) == 8
    kinds = {n.id: n.kind for n in m.nodes}
    assert all(kinds[t.path[-1][0]] is NodeKind.OUTCOME for t in traces)
    assert all(t.path[0][0] == m.entry for t in traces)


# -- properties ------------------------------------------------------------

@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 2**32))
def test_generated_models_are_valid(seed):
    m = decision_dag(random.Random(seed))
    assert validate_model(m) == []


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 2**32))
def test_injected_cycles_are_rejected(seed):
    rng = random.Random(seed)
    m = inject_cycle(decision_dag(rng), rng)
    assert FindingCode.CYCLE_DETECTED in codes(validate_model(m))


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 2**32))
def test_injected_unreachable_nodes_are_rejected(seed):
    rng = random.Random(seed)
    m = inject_unreachable(decision_dag(rng), rng)
    assert FindingCode.UNREACHABLE_NODE in codes(validate_model(m))


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32))
def test_traversal_terminates_and_is_deterministic(seed):
    rng = random.Random(seed)
    m = decision_dag(rng, rng.randint(1, 5))
    for answers, trace in enumerate_traces(m):
        assert len(trace.path) <= len(m.nodes)
        assert m.node(trace.path[-1][0]).kind is NodeKind.OUTCOME
        assert traverse(m, answers) == trace


def test_json_round_trip(section_model):
    assert model_from_dict(model_to_dict(section_model)) == section_model
