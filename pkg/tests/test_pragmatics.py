import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from normforge.errors import (
    DuplicateProposition,
    DuplicateQuestionAnswer,
    DuplicateWhWord,
    EmptyAnswer,
    EmptyInput,
    ForeignInterpretation,
    MixedNorms,
    NoSuchQuestion,
    QuestionNotAccepted,
    UnknownDomain,
)
from normforge.pragmatics import (
    ContextKind,
    DomainModel,
    DomainRegistry,
    NormText,
    Proposition,
    Question,
    WhWord,
    accept_question,
    assemble_interpretation,
    assemble_pragmatics,
    build_question_space,
    consolidate_context,
    dumps_pragmatics,
    load_pragmatics,
    record_answer,
)

NORM = NormText("35_usc_112_a", "The specification shall contain a written description of the invention.", "patent")
OTHER = NormText("35_usc_101", "Whoever invents any new and useful process may obtain a patent.", "patent")


def props(n):
    return [Proposition(i, f"proposition {i}") for i in range(1, n + 1)]


def accepted_space(norm=NORM, n=2, whs=(WhWord.WHO, WhWord.WHAT)):
    space = build_question_space(norm, props(n), list(whs))
    for q in list(space.questions):
        space = accept_question(space, q.proposition.index, q.wh, True)
    return space


# -- build_question_space ---------------------------------------------------

def test_single_question():
    space = build_question_space(NORM, props(1), [WhWord.WHO])
    assert len(space.questions) == 1
    assert space.questions[0].accepted is False


def test_row_major_matches_cartesian_product():
    ps = props(2)
    whs = [WhWord.WHO, WhWord.WHAT, WhWord.WHEN]
    space = build_question_space(NORM, ps, whs)
    expected = list(itertools.product(ps, whs))
    assert [(q.proposition, q.wh) for q in space.questions] == expected
    assert len(space.questions) == 6


def test_section_112_propositions():
    space = build_question_space(
        NORM,
        [
            Proposition(1, "specification contains written description"),
            Proposition(2, "description enables making and using"),
        ],
        [WhWord.WHO, WhWord.WHAT],
    )
    assert len(space.questions) == 4


@pytest.mark.parametrize(
    "ps, whs, exc",
    [
        ([], [WhWord.WHO], EmptyInput),
        ([Proposition(1, "p")], [], EmptyInput),
        ([Proposition(1, "p"), Proposition(1, "q")], [WhWord.WHO], DuplicateProposition),
        ([Proposition(1, "p")], [WhWord.WHO, WhWord.WHO], DuplicateWhWord),
    ],
)
def test_build_errors(ps, whs, exc):
    with pytest.raises(exc):
        build_question_space(NORM, ps, whs)


def test_wh_words_serialize_lowercase():
    assert [w.value for w in WhWord] == ["who", "what", "when", "where", "why", "how", "whom"]


@settings(max_examples=60, deadline=None)
@given(n=st.integers(1, 12), whs=st.lists(st.sampled_from(list(WhWord)), min_size=1, unique=True))
def test_cardinality_and_determinism(n, whs):
    a = build_question_space(NORM, props(n), whs)
    b = build_question_space(NORM, props(n), whs)
    assert len(a.questions) == n * len(whs)
    assert a == b


# -- accept_question --------------------------------------------------------

def test_accept_is_idempotent():
    space = build_question_space(NORM, props(2), [WhWord.WHO, WhWord.WHAT])
    once = accept_question(space, 1, WhWord.WHO, True)
    twice = accept_question(once, 1, WhWord.WHO, True)
    assert once == twice


def test_accept_one_of_four():
    space = build_question_space(NORM, props(2), [WhWord.WHO, WhWord.WHAT])
    space = accept_question(space, 1, WhWord.WHO, True)
    assert sum(q.accepted for q in space.questions) == 1


def test_accept_unknown_question():
    space = build_question_space(NORM, props(1), [WhWord.WHO])
    with pytest.raises(NoSuchQuestion):
        accept_question(space, 1, WhWord.WHY, True)


def test_rejected_question_invalidates_answers():
    space = accepted_space()
    answer = record_answer(space.question(1, WhWord.WHO), "the applicant")
    space = accept_question(space, 1, WhWord.WHO, False)
    with pytest.raises(QuestionNotAccepted):
        record_answer(space.question(1, WhWord.WHO), "the applicant")
    interp = assemble_interpretation([answer], "stale")
    with pytest.raises(QuestionNotAccepted):
        assemble_pragmatics(NORM, [interp], space)


# -- record_answer ----------------------------------------------------------

def test_record_enablement_answer():
    space = accepted_space()
    ep = record_answer(space.question(2, WhWord.WHO), "any person skilled in the art", ContextKind.EXPLICIT, "35 USC 112(a)")
    assert ep.answer_text == "any person skilled in the art"
    assert ep.kind is ContextKind.EXPLICIT


def test_record_mpep_note():
    space = accepted_space()
    ep = record_answer(
        space.question(1, WhWord.WHAT),
        "recite the subject matter omitted from the claims",
        ContextKind.EXTRINSIC,
        "MPEP ¶7.33.01 note 2",
    )
    assert ep.provenance.startswith("MPEP")


def test_record_unaccepted():
    space = build_question_space(NORM, props(1), [WhWord.WHO])
    with pytest.raises(QuestionNotAccepted):
        record_answer(space.question(1, WhWord.WHO), "someone")


def test_record_empty_answer():
    space = accepted_space()
    with pytest.raises(EmptyAnswer):
        record_answer(space.question(1, WhWord.WHO), "   ")


@settings(max_examples=100, deadline=None)
@given(accepted=st.booleans(), text=st.text(max_size=5))
def test_acceptance_gate_fuzz(accepted, text):
    q = Question(NORM.id, Proposition(1, "p"), WhWord.WHAT, accepted)
    try:
        ep = record_answer(q, text)
    except (QuestionNotAccepted, EmptyAnswer):
        assert not accepted or not text.strip()
    else:
        assert ep.question.accepted and text.strip()


# -- interpretations and pragmatics ----------------------------------------

def test_empty_interpretation():
    interp = assemble_interpretation([], "In re Ruschig")
    assert interp.answers == frozenset()


def test_duplicate_question_answer():
    space = accepted_space()
    q = space.question(1, WhWord.WHO)
    with pytest.raises(DuplicateQuestionAnswer):
        assemble_interpretation([record_answer(q, "a"), record_answer(q, "b")], "x")


def test_mixed_norms():
    a = record_answer(accepted_space(NORM).question(1, WhWord.WHO), "a")
    b = record_answer(accepted_space(OTHER).question(1, WhWord.WHO), "b")
    with pytest.raises(MixedNorms):
        assemble_interpretation([a, b], "x")


def test_corpus_interpretation_counts(fixtures_dir):
    p = load_pragmatics(fixtures_dir / "section112" / "pragmatics" / "section112.json")
    assert len(p.interpretations) == 2
    assert {i.source for i in p.interpretations} == {"35 USC 112(a)", "MPEP 7.33.01"}
    space = p.question_space
    three = assemble_interpretation(
        [
            record_answer(space.question(1, WhWord.WHAT), "the invention"),
            record_answer(space.question(2, WhWord.WHO), "any person skilled in the art"),
            record_answer(space.question(2, WhWord.WHAT), "make and use the same"),
        ],
        "In re Ruschig",
    )
    assert len(three.answers) == 3


def test_empty_pragmatics():
    space = accepted_space()
    p = assemble_pragmatics(NORM, [], space)
    assert p.interpretations == frozenset()


def test_foreign_interpretation():
    foreign = assemble_interpretation([record_answer(accepted_space(OTHER).question(1, WhWord.WHO), "a")], "x")
    with pytest.raises(ForeignInterpretation):
        assemble_pragmatics(NORM, [foreign], accepted_space())


def test_domain_registry():
    reg = DomainRegistry([DomainModel("patent", "US patent law")])
    assert reg.norm("n", "text", "patent").domain_id == "patent"
    with pytest.raises(UnknownDomain):
        reg.norm("n", "text", "trademark")
    with pytest.raises(EmptyInput):
        NormText("n", "", "patent")


# -- consolidation ----------------------------------------------------------

def _interp(space, pairs, source):
    return assemble_interpretation([record_answer(space.question(i, wh), t) for i, wh, t in pairs], source)


def test_disjoint_interpretations_sum():
    space = accepted_space()
    i1 = _interp(space, [(1, WhWord.WHO, "a"), (1, WhWord.WHAT, "b")], "s1")
    i2 = _interp(space, [(2, WhWord.WHO, "c")], "s2")
    bundle = consolidate_context(assemble_pragmatics(NORM, [i1, i2], space))
    # brute-force union of (question, answer) pairs
    union = {(a.question.key, a.answer_text) for i in (i1, i2) for a in i.answers}
    assert len(bundle) == len(union) == 3
    assert [q.key for q in bundle.gaps] == [space.question(2, WhWord.WHAT).key]


def test_identical_answers_dedup():
    space = accepted_space()
    i1 = _interp(space, [(1, WhWord.WHO, "any person skilled in the art")], "s1")
    i2 = _interp(space, [(1, WhWord.WHO, "  any person skilled in the art ")], "s2")
    bundle = consolidate_context(assemble_pragmatics(NORM, [i1, i2], space))
    assert len(bundle) == 1
    assert bundle.entries[0].contributors == tuple(sorted([i1.id, i2.id]))


def test_nfc_dedup():
    space = accepted_space()
    i1 = _interp(space, [(1, WhWord.WHO, "café")], "s1")
    i2 = _interp(space, [(1, WhWord.WHO, "café")], "s2")
    assert len(consolidate_context(assemble_pragmatics(NORM, [i1, i2], space))) == 1


def test_conflicting_answers_coexist():
    space = accepted_space()
    i1 = _interp(space, [(1, WhWord.WHO, "the inventor")], "s1")
    i2 = _interp(space, [(1, WhWord.WHO, "the assignee")], "s2")
    assert len(consolidate_context(assemble_pragmatics(NORM, [i1, i2], space))) == 2


def test_empty_bundle_reports_all_accepted():
    space = build_question_space(NORM, props(2), [WhWord.WHO, WhWord.WHAT])
    space = accept_question(space, 2, WhWord.WHAT, True)
    bundle = consolidate_context(assemble_pragmatics(NORM, [], space))
    assert len(bundle) == 0
    assert bundle.gaps == space.accepted()


ANSWERS = ["a", "b", " a", "c"]


def _random_interps(space, rng, k):
    out = []
    for j in range(k):
        qs = rng.sample(space.questions, rng.randint(0, len(space.questions)))
        out.append(
            assemble_interpretation(
                [record_answer(q, rng.choice(ANSWERS), rng.choice(list(ContextKind))) for q in qs], f"src{j}"
            )
        )
    return out


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 10**6))
def test_consolidation_algebra(seed):
    rng = random.Random(seed)
    space = accepted_space(n=3)
    interps = _random_interps(space, rng, rng.randint(0, 4))
    whole = consolidate_context(assemble_pragmatics(NORM, interps, space))
    shuffled = interps[:]
    rng.shuffle(shuffled)
    assert consolidate_context(assemble_pragmatics(NORM, shuffled, space)) == whole
    cut = rng.randint(0, len(interps))
    left = consolidate_context(assemble_pragmatics(NORM, interps[:cut], space))
    right = consolidate_context(assemble_pragmatics(NORM, interps[cut:], space))
    assert left.merge(right) == whole
    assert right.merge(left) == whole
    # monotone: every entry of a part survives in the whole
    keys = {(e.question.key, e.answer_text) for e in whole.entries}
    assert {(e.question.key, e.answer_text) for e in left.entries} <= keys


def test_serialization_is_deterministic(fixtures_dir, tmp_path):
    path = fixtures_dir / "section112" / "pragmatics" / "section112.json"
    p = load_pragmatics(path)
    assert dumps_pragmatics(p) == path.read_text(encoding="utf-8")
    out = tmp_path / "copy.json"
    out.write_text(dumps_pragmatics(p), encoding="utf-8")
    assert load_pragmatics(out) == p
