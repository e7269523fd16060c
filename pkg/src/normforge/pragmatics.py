"""Question spaces, interpretations and the pragmatics set attached to a norm.

A norm text is probed by crossing its propositions with wh-words. Each
accepted (proposition, wh) question may receive answers; a set of answers
from one source forms an interpretation, and the set of interpretations is
the norm's pragmatics. ``consolidate_context`` merges everything into one
bundle and reports accepted questions that nobody answered.
"""

from __future__ import annotations

import enum
import hashlib
import json
import unicodedata
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Mapping

from .errors import (
    DuplicateProposition,
    DuplicateQuestionAnswer,
    DuplicateWhWord,
    EmptyAnswer,
    EmptyInput,
    ForeignInterpretation,
    MixedNorms,
    NoSuchQuestion,
    ParseError,
    QuestionNotAccepted,
    UnknownDomain,
)


class WhWord(enum.Enum):
    WHO = "who"
    WHAT = "what"
    WHEN = "when"
    WHERE = "where"
    WHY = "why"
    HOW = "how"
    WHOM = "whom"


class ContextKind(enum.Enum):
    IMPLICIT = "implicit"
    EXPLICIT = "explicit"
    INTRINSIC = "intrinsic"
    EXTRINSIC = "extrinsic"


_WH_ORDER = {wh: i for i, wh in enumerate(WhWord)}


@dataclass(frozen=True)
class DomainModel:
    id: str
    description: str = ""
    vocabulary_ref: str | None = None


@dataclass(frozen=True)
class NormText:
    id: str
    text: str
    domain_id: str

    def __post_init__(self):
        if not self.text or not self.text.strip():
            raise EmptyInput(f"norm {self.id!r} has empty text")


class DomainRegistry:
    """Workspace-level registry of domain models; norms must point into it."""

    def __init__(self, domains: Iterable[DomainModel] = ()):
        self._domains: dict[str, DomainModel] = {}
        for d in domains:
            self.register(d)

    def register(self, domain: DomainModel) -> None:
        if domain.id in self._domains:
            raise ValueError(f"domain {domain.id!r} already registered")
        self._domains[domain.id] = domain

    def __contains__(self, domain_id: str) -> bool:
        return domain_id in self._domains

    def __getitem__(self, domain_id: str) -> DomainModel:
        try:
            return self._domains[domain_id]
        except KeyError:
            raise UnknownDomain(domain_id) from None

    def norm(self, id: str, text: str, domain_id: str) -> NormText:
        self[domain_id]
        return NormText(id, text, domain_id)


@dataclass(frozen=True)
class Proposition:
    index: int
    statement: str

    def __post_init__(self):
        if self.index < 1:
            raise ValueError("proposition index is 1-based")
        if not self.statement.strip():
            raise EmptyInput(f"proposition {self.index} has an empty statement")


@dataclass(frozen=True)
class Question:
    norm_id: str
    proposition: Proposition
    wh: WhWord
    accepted: bool = False
    # free-text note; carries no semantics
    accepted_by: str | None = field(default=None, compare=False)

    @property
    def key(self) -> tuple[str, int, WhWord]:
        return (self.norm_id, self.proposition.index, self.wh)

    def sort_key(self) -> tuple[int, int]:
        return (self.proposition.index, _WH_ORDER[self.wh])


@dataclass(frozen=True)
class QuestionSpace:
    norm: NormText
    questions: tuple[Question, ...]

    @property
    def propositions(self) -> tuple[Proposition, ...]:
        seen: dict[int, Proposition] = {}
        for q in self.questions:
            seen.setdefault(q.proposition.index, q.proposition)
        return tuple(seen.values())

    @property
    def wh_words(self) -> tuple[WhWord, ...]:
        return tuple(dict.fromkeys(q.wh for q in self.questions))

    def question(self, proposition_index: int, wh: WhWord) -> Question:
        for q in self.questions:
            if q.proposition.index == proposition_index and q.wh is wh:
                return q
        raise NoSuchQuestion((proposition_index, wh.value))

    def accepted(self) -> tuple[Question, ...]:
        return tuple(q for q in self.questions if q.accepted)


@dataclass(frozen=True)
class ElementaryPragmatics:
    """One answer to one accepted question. Unaccepted questions are refused."""

    question: Question
    answer_text: str
    kind: ContextKind
    provenance: str = ""

    def __post_init__(self):
        if not self.question.accepted:
            raise QuestionNotAccepted(self.question.key)
        if not self.answer_text or not self.answer_text.strip():
            raise EmptyAnswer(self.question.key)


@dataclass(frozen=True)
class Interpretation:
    id: str
    answers: frozenset[ElementaryPragmatics]
    source: str

    @property
    def norm_id(self) -> str | None:
        for a in self.answers:
            return a.question.norm_id
        return None


@dataclass(frozen=True)
class Pragmatics:
    norm: NormText
    question_space: QuestionSpace
    interpretations: frozenset[Interpretation] = frozenset()


@dataclass(frozen=True)
class BundleEntry:
    question: Question
    answer_text: str
    kinds: tuple[ContextKind, ...]
    provenances: tuple[str, ...]
    contributors: tuple[str, ...]


@dataclass(frozen=True)
class ContextBundle:
    entries: tuple[BundleEntry, ...]
    gaps: tuple[Question, ...]

    def __len__(self) -> int:
        return len(self.entries)

    def merge(self, other: ContextBundle) -> ContextBundle:
        """Combine two bundles built over the same question space."""
        acc = _Accumulator()
        for e in self.entries + other.entries:
            acc.add_entry(e)
        answered = acc.answered()
        gaps = {q.key: q for q in self.gaps + other.gaps if q.key not in answered}
        return ContextBundle(acc.entries(), tuple(sorted(gaps.values(), key=Question.sort_key)))


def build_question_space(
    norm: NormText, propositions: list[Proposition], whs: list[WhWord]
) -> QuestionSpace:
    """Cross every proposition with every wh-word, row-major."""
    if not propositions or not whs:
        raise EmptyInput("need at least one proposition and one wh-word")
    seen_idx: set[int] = set()
    for p in propositions:
        if p.index in seen_idx:
            raise DuplicateProposition(p.index)
        seen_idx.add(p.index)
    if len(set(whs)) != len(whs):
        dup = next(w for w in whs if whs.count(w) > 1)
        raise DuplicateWhWord(dup.value)
    questions = tuple(Question(norm.id, p, wh) for p in propositions for wh in whs)
    return QuestionSpace(norm, questions)


def accept_question(
    space: QuestionSpace,
    proposition_index: int,
    wh: WhWord,
    accepted: bool = True,
    accepted_by: str | None = None,
) -> QuestionSpace:
    target = space.question(proposition_index, wh)
    updated = replace(target, accepted=accepted, accepted_by=accepted_by if accepted else None)
    return replace(
        space, questions=tuple(updated if q is target else q for q in space.questions)
    )


def record_answer(
    question: Question,
    answer_text: str,
    kind: ContextKind = ContextKind.EXPLICIT,
    provenance: str = "",
) -> ElementaryPragmatics:
    return ElementaryPragmatics(question, answer_text, kind, provenance)


def assemble_interpretation(
    answers: Iterable[ElementaryPragmatics], source: str, id: str | None = None
) -> Interpretation:
    """Group answers into an interpretation.

    Without an explicit ``id`` a stable one is derived from the source and
    the answer contents.
    """
    answers = list(answers)
    norms = {a.question.norm_id for a in answers}
    if len(norms) > 1:
        raise MixedNorms(sorted(norms))
    seen: set = set()
    for a in answers:
        if a.question.key in seen:
            raise DuplicateQuestionAnswer(a.question.key)
        seen.add(a.question.key)
    if id is None:
        digest = hashlib.sha1(source.encode("utf-8"))
        for a in sorted(answers, key=_answer_sort_key):
            digest.update(repr((a.question.sort_key(), a.answer_text)).encode("utf-8"))
        id = "i-" + digest.hexdigest()[:10]
    return Interpretation(id, frozenset(answers), source)


def assemble_pragmatics(
    norm: NormText, interpretations: Iterable[Interpretation], space: QuestionSpace
) -> Pragmatics:
    """Attach interpretations to a norm, checking they answer its own questions.

    An answer whose question was rejected after the answer was recorded is
    refused with ``QuestionNotAccepted``.
    """
    if space.norm != norm:
        raise ForeignInterpretation(f"question space belongs to {space.norm.id!r}")
    interpretations = frozenset(interpretations)
    for interp in interpretations:
        for a in interp.answers:
            q = a.question
            if q.norm_id != norm.id:
                raise ForeignInterpretation(f"{interp.id}: answers a question of {q.norm_id!r}")
            try:
                current = space.question(q.proposition.index, q.wh)
            except NoSuchQuestion:
                raise ForeignInterpretation(f"{interp.id}: question {q.key} not in space") from None
            if current.proposition != q.proposition:
                raise ForeignInterpretation(f"{interp.id}: proposition {q.proposition.index} differs")
            if not current.accepted:
                raise QuestionNotAccepted(q.key)
    return Pragmatics(norm, space, interpretations)


def normalize_answer(text: str) -> str:
    return unicodedata.normalize("NFC", text).strip()


def _answer_sort_key(a: ElementaryPragmatics):
    return (a.question.sort_key(), normalize_answer(a.answer_text))


class _Accumulator:
    def __init__(self):
        self._rows: dict[tuple, dict] = {}

    def add(self, question: Question, text: str, kinds, provenances, contributors):
        key = (question.key, normalize_answer(text))
        row = self._rows.setdefault(
            key,
            {"question": question, "text": key[1], "kinds": set(), "prov": set(), "by": set()},
        )
        row["kinds"].update(kinds)
        row["prov"].update(p for p in provenances if p)
        row["by"].update(contributors)

    def add_entry(self, e: BundleEntry):
        self.add(e.question, e.answer_text, e.kinds, e.provenances, e.contributors)

    def answered(self) -> set:
        return {k[0] for k in self._rows}

    def entries(self) -> tuple[BundleEntry, ...]:
        rows = sorted(self._rows.values(), key=lambda r: (r["question"].sort_key(), r["text"]))
        return tuple(
            BundleEntry(
                question=r["question"],
                answer_text=r["text"],
                kinds=tuple(sorted(r["kinds"], key=lambda k: k.value)),
                provenances=tuple(sorted(r["prov"])),
                contributors=tuple(sorted(r["by"])),
            )
            for r in rows
        )


def consolidate_context(p: Pragmatics) -> ContextBundle:
    acc = _Accumulator()
    for interp in p.interpretations:
        for a in interp.answers:
            acc.add(a.question, a.answer_text, [a.kind], [a.provenance], [interp.id])
    answered = acc.answered()
    gaps = tuple(q for q in p.question_space.accepted() if q.key not in answered)
    return ContextBundle(acc.entries(), gaps)


# -- JSON corpus files -----------------------------------------------------

def _question_ref(q: Question) -> dict:
    return {"proposition": q.proposition.index, "wh": q.wh.value}


def pragmatics_to_dict(p: Pragmatics) -> dict:
    space = p.question_space
    return {
        "norm": {"id": p.norm.id, "text": p.norm.text, "domain_id": p.norm.domain_id},
        "question_space": {
            "norm": p.norm.id,
            "questions": [
                {
                    "proposition": {"index": q.proposition.index, "statement": q.proposition.statement},
                    "wh": q.wh.value,
                    "accepted": q.accepted,
                    **({"accepted_by": q.accepted_by} if q.accepted_by else {}),
                }
                for q in space.questions
            ],
        },
        "interpretations": [
            {
                "id": i.id,
                "source": i.source,
                "answers": [
                    {
                        "question": _question_ref(a.question),
                        "answer_text": a.answer_text,
                        "kind": a.kind.value,
                        "provenance": a.provenance,
                    }
                    for a in sorted(i.answers, key=_answer_sort_key)
                ],
            }
            for i in sorted(p.interpretations, key=lambda i: i.id)
        ],
    }


def pragmatics_from_dict(data: Mapping) -> Pragmatics:
    nd = data["norm"]
    norm = NormText(nd["id"], nd["text"], nd["domain_id"])
    questions = []
    for qd in data["question_space"]["questions"]:
        prop = Proposition(int(qd["proposition"]["index"]), qd["proposition"]["statement"])
        questions.append(
            Question(norm.id, prop, WhWord(qd["wh"]), bool(qd.get("accepted", False)), qd.get("accepted_by"))
        )
    props = list(dict.fromkeys(q.proposition for q in questions))
    whs = list(dict.fromkeys(q.wh for q in questions))
    space = build_question_space(norm, props, whs)
    if [(q.proposition, q.wh) for q in space.questions] != [(q.proposition, q.wh) for q in questions]:
        raise ValueError("question_space is not a complete row-major product")
    space = replace(space, questions=tuple(questions))
    interps = []
    for idata in data.get("interpretations", []):
        answers = []
        for ad in idata.get("answers", []):
            ref = ad["question"]
            q = space.question(int(ref["proposition"]), WhWord(ref["wh"]))
            answers.append(record_answer(q, ad["answer_text"], ContextKind(ad["kind"]), ad.get("provenance", "")))
        interps.append(assemble_interpretation(answers, idata["source"], id=idata.get("id")))
    return assemble_pragmatics(norm, interps, space)


def dumps_pragmatics(p: Pragmatics) -> str:
    return json.dumps(pragmatics_to_dict(p), indent=2, ensure_ascii=False) + "\n"


def load_pragmatics(path: str | Path) -> Pragmatics:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno, str(path)) from None
    return pragmatics_from_dict(data)


def save_pragmatics(p: Pragmatics, path: str | Path) -> None:
    Path(path).write_text(dumps_pragmatics(p), encoding="utf-8")


def bundle_to_dict(b: ContextBundle) -> dict:
    return {
        "entries": [
            {
                "question": _question_ref(e.question),
                "answer_text": e.answer_text,
                "kinds": [k.value for k in e.kinds],
                "provenances": list(e.provenances),
                "contributors": list(e.contributors),
            }
            for e in b.entries
        ],
        "gaps": [_question_ref(q) for q in b.gaps],
    }
