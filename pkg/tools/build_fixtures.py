"""Regenerate the JSON/XML fixtures under fixtures/ from the library API.

Hand-written inputs (.norm, .meta.json, .facts, sources.json) are read, not
written. Run from the repository root: ``python3 tools/build_fixtures.py``.
"""

from __future__ import annotations

from pathlib import Path

from normforge.decision import (
    DecisionEdge,
    DecisionModel,
    DecisionNode,
    NodeKind,
    ProceduralNormRef,
    save_model,
)
from normforge.pragmatics import (
    ContextKind,
    DomainModel,
    DomainRegistry,
    Proposition,
    WhWord,
    accept_question,
    assemble_interpretation,
    assemble_pragmatics,
    build_question_space,
    record_answer,
    save_pragmatics,
)
from normforge.rules import serialize_interchange
from normforge.vocabulary import (
    AnnotationKey,
    ConceptAnnotation,
    LegalTerm,
    Vocabulary,
    define_concept,
    define_fact_type,
    save_vocabulary,
)
from normforge.workspace import load_metadata, to_document
from normforge.rules import parse_rulebase

ROOT = Path(__file__).resolve().parent.parent / "fixtures"
LEXICON = "../base_lexicon.txt"

SECTION_112A = (
    "The specification shall contain a written description of the invention, and of the manner "
    "and process of making and using it, in such full, clear, concise, and exact terms as to "
    "enable any person skilled in the art to which it pertains, or with which it is most nearly "
    "connected, to make and use the same, and shall set forth the best mode contemplated by the "
    "inventor or joint inventor of carrying out the invention."
)


def _ann(**kw) -> list[ConceptAnnotation]:
    return [ConceptAnnotation(AnnotationKey(k), v) for k, v in kw.items()]


def patent_vocabulary() -> Vocabulary:
    lexicon = frozenset((ROOT / "base_lexicon.txt").read_text().split())
    v = Vocabulary("us_patent_law", base_lexicon=lexicon, base_lexicon_ref=LEXICON)
    v = define_concept(
        v,
        LegalTerm("office_action", "Office action"),
        _ann(source="MPEP 7.33.01", jurisdiction="us", authority="USPTO"),
        "written communication from the examiner to the applicant stating rejections and objections",
    )
    v = define_concept(
        v,
        LegalTerm("paragraph_7_33_01", "MPEP form paragraph 7.33.01"),
        _ann(source="MPEP 7.33.01", jurisdiction="us", authority="USPTO"),
        "form paragraph rejecting a claim under 35 U.S.C. 112, first paragraph, "
        "as based on a disclosure which is not enabling",
    )
    v = define_concept(
        v,
        LegalTerm("claim", "Claim"),
        _ann(source="35 USC 112(a)", jurisdiction="us"),
    )
    v = define_concept(
        v,
        LegalTerm("specification", "Specification"),
        _ann(source="35 USC 112(a)", jurisdiction="us"),
    )
    v = define_concept(
        v,
        LegalTerm("essential_subject_matter_requirement", "Essential subject matter requirement"),
        _ann(source="MPEP 7.33.01", jurisdiction="us", authority="USPTO"),
        "matter critical or essential to the practice of the invention must be included in the claim(s)",
    )
    v = define_concept(
        v,
        LegalTerm("is_rejected_under", "is rejected under"),
        _ann(source="MPEP 7.33.01", jurisdiction="us"),
        "the examiner rejects the claim on the ground named by the object",
    )
    v = define_concept(
        v,
        LegalTerm("patentee", "Patentee"),
        _ann(source="35 USC 100", jurisdiction="us", status="in force"),
        "includes not only the patentee to whom the patent was issued but also the successors "
        "in title to the patentee",
    )
    v = define_fact_type(v, "office_action", "includes", "paragraph_7_33_01")
    v = define_fact_type(v, "claim", "is_rejected_under", "essential_subject_matter_requirement")
    return v


def copyright_vocabulary() -> Vocabulary:
    lexicon = frozenset((ROOT / "base_lexicon.txt").read_text().split())
    v = Vocabulary("us_copyright_law", base_lexicon=lexicon, base_lexicon_ref=LEXICON)
    return define_concept(
        v,
        LegalTerm("work_made_for_hire", "Work made for hire"),
        _ann(source="17 USC 101", jurisdiction="us"),
        "a work prepared by an employee within the scope of employment",
    )


def section112_model() -> DecisionModel:
    nodes = (
        DecisionNode(
            "A",
            NodeKind.DECISION,
            prompt="Does the specification contain a written description of the invention, and of "
            "the manner and process of making and using it?",
            provenance="35 USC 112(a)",
        ),
        DecisionNode(
            "D",
            NodeKind.DECISION,
            prompt="Is subject matter critical or essential to the practice of the invention "
            "not included in the claim(s)?",
            provenance="MPEP 7.33.01",
        ),
        DecisionNode(
            "P_7_33_01",
            NodeKind.PROCEDURE,
            procedures=(ProceduralNormRef("mpep_7_33_01", "MPEP 7.33.01"),),
            provenance="MPEP 7.33.01, note 1: must be preceded by form paragraph 7.30.01 or 7.103",
        ),
        DecisionNode(
            "O_not_enabling",
            NodeKind.OUTCOME,
            verdict="reject: disclosure not enabling",
            provenance="MPEP 7.33.01",
        ),
        DecisionNode(
            "O_no_description",
            NodeKind.OUTCOME,
            verdict="reject: written description lacking",
            provenance="35 USC 112(a)",
        ),
        DecisionNode(
            "O_enabled",
            NodeKind.OUTCOME,
            verdict="no rejection under 35 USC 112(a) on this ground",
            provenance="35 USC 112(a)",
        ),
    )
    edges = (
        DecisionEdge("A", "D", "yes"),
        DecisionEdge("A", "O_no_description", "no"),
        DecisionEdge("D", "P_7_33_01", "yes"),
        DecisionEdge("D", "O_enabled", "no"),
        DecisionEdge("P_7_33_01", "O_not_enabling"),
    )
    return DecisionModel("section112_enablement", "35 USC 112(a)", nodes, edges, "A")


def case_model(case_id: str, citation: str, prompt: str) -> DecisionModel:
    nodes = (
        DecisionNode("Q", NodeKind.DECISION, prompt=prompt, provenance=citation),
        DecisionNode("O_reject", NodeKind.OUTCOME, verdict=f"reject: test of {citation} not met", provenance=citation),
        DecisionNode("O_pass", NodeKind.OUTCOME, verdict=f"no rejection: test of {citation} met", provenance=citation),
    )
    edges = (DecisionEdge("Q", "O_pass", "yes"), DecisionEdge("Q", "O_reject", "no"))
    return DecisionModel(case_id, citation, nodes, edges, "Q")


def three_decision_model() -> DecisionModel:
    """Every decision is visited on every walk, so 2**3 distinct traces exist."""
    nodes = (
        DecisionNode("A", NodeKind.DECISION, prompt="Is a written description of the invention present?",
                     provenance="35 USC 112(a)"),
        DecisionNode("B", NodeKind.DECISION, prompt="Is the best mode contemplated by the inventor set forth?",
                     provenance="35 USC 112(a)"),
        DecisionNode("D", NodeKind.DECISION,
                     prompt="Is subject matter critical or essential to the practice of the invention "
                     "not included in the claim(s)?",
                     provenance="MPEP 7.33.01"),
        DecisionNode("P_7_33_01", NodeKind.PROCEDURE,
                     procedures=(ProceduralNormRef("mpep_7_33_01", "MPEP 7.33.01"),),
                     provenance="MPEP 7.33.01"),
        DecisionNode("O_not_enabling", NodeKind.OUTCOME, verdict="reject: disclosure not enabling",
                     provenance="MPEP 7.33.01"),
        DecisionNode("O_enabled", NodeKind.OUTCOME, verdict="no enablement rejection",
                     provenance="35 USC 112(a)"),
    )
    edges = (
        DecisionEdge("A", "B", "yes"),
        DecisionEdge("A", "B", "no"),
        DecisionEdge("B", "D", "yes"),
        DecisionEdge("B", "D", "no"),
        DecisionEdge("D", "P_7_33_01", "yes"),
        DecisionEdge("D", "O_enabled", "no"),
        DecisionEdge("P_7_33_01", "O_not_enabling"),
    )
    return DecisionModel("section112_checklist", "35 USC 112(a)", nodes, edges, "A")


def section112_pragmatics():
    domains = DomainRegistry([DomainModel("us_patent_law", "United States patent law", "us_patent_law")])
    norm = domains.norm("35_usc_112_a", SECTION_112A, "us_patent_law")
    space = build_question_space(
        norm,
        [
            Proposition(1, "specification contains written description"),
            Proposition(2, "description enables making and using"),
        ],
        [WhWord.WHO, WhWord.WHAT],
    )
    for idx, wh in [(1, WhWord.WHAT), (2, WhWord.WHO), (2, WhWord.WHAT)]:
        space = accept_question(space, idx, wh, True, accepted_by="examiner")
    statute = assemble_interpretation(
        [
            record_answer(space.question(2, WhWord.WHO), "any person skilled in the art",
                          ContextKind.EXPLICIT, "35 USC 112(a)"),
            record_answer(space.question(1, WhWord.WHAT),
                          "the invention, and the manner and process of making and using it",
                          ContextKind.EXPLICIT, "35 USC 112(a)"),
        ],
        "35 USC 112(a)",
        id="statute",
    )
    manual = assemble_interpretation(
        [
            record_answer(space.question(2, WhWord.WHAT),
                          "recite the subject matter omitted from the claims",
                          ContextKind.EXTRINSIC, "MPEP 7.33.01 note 2"),
            record_answer(space.question(2, WhWord.WHO), "any person skilled in the art",
                          ContextKind.IMPLICIT, "MPEP 7.33.01"),
        ],
        "MPEP 7.33.01",
        id="mpep",
    )
    return assemble_pragmatics(norm, [statute, manual], space)


def main() -> None:
    ws = ROOT / "section112"
    save_vocabulary(patent_vocabulary(), ws / "us_patent_law.vocab.json")
    save_vocabulary(patent_vocabulary(), ROOT / "adversarial" / "us_patent_law.vocab.json")
    save_vocabulary(copyright_vocabulary(), ROOT / "adversarial" / "us_copyright_law.vocab.json")
    save_vocabulary(patent_vocabulary(), ROOT / "conflicts" / "us_patent_law.vocab.json")
    save_model(section112_model(), ws / "section112.dmodel.json")
    save_model(
        case_model("In_re_Ruschig", "In re Ruschig (Fed. Cir.)",
                   "Does the disclosure satisfy the written description test applied in In re Ruschig?"),
        ws / "cases" / "in_re_ruschig.dmodel.json",
    )
    save_model(
        case_model("Pfizer_v_Teva", "Pfizer Inc. v. Teva Pharmaceuticals Inc.",
                   "Does the disclosure satisfy the test applied in Pfizer Inc. v. Teva Pharmaceuticals Inc.?"),
        ws / "cases" / "pfizer_v_teva.dmodel.json",
    )
    save_model(three_decision_model(), ROOT / "three_decisions.dmodel.json")
    save_pragmatics(section112_pragmatics(), ws / "pragmatics" / "section112.json")
    rb = parse_rulebase((ws / "section112.norm").read_bytes())
    doc = to_document(rb, load_metadata(ws / "section112.meta.json"))
    (ws / "section112.kr4ip.xml").write_text(serialize_interchange(doc), encoding="utf-8")


if __name__ == "__main__":
    main()
