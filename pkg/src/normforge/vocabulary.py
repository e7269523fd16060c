"""Layered legal vocabulary: terms express concepts, concepts build fact types.

A vocabulary also carries a plain-language base lexicon. When a concept with
an explicit definition owns a lexeme that is also an ordinary word, the
explicit definition wins and the resolution is marked as shadowing.
"""

from __future__ import annotations

import enum
import json
import re
from dataclasses import dataclass, field, replace
from functools import cached_property
from pathlib import Path
from typing import Iterable

from .errors import (
    DuplicateConcept,
    DuplicateFactType,
    MalformedLexeme,
    ParseError,
    UnknownConcept,
)

LEXEME_RE = re.compile(r"[a-z][a-z0-9_]*\Z")


def check_lexeme(lexeme: str) -> str:
    if not isinstance(lexeme, str) or not LEXEME_RE.match(lexeme):
        raise MalformedLexeme(lexeme)
    return lexeme


class AnnotationKey(enum.Enum):
    SOURCE = "source"
    JURISDICTION = "jurisdiction"
    DEFINITION = "definition"
    SYNONYM = "synonym"
    STATUS = "status"
    AUTHORITY = "authority"


@dataclass(frozen=True)
class LegalTerm:
    lexeme: str
    label: str = ""

    def __post_init__(self):
        check_lexeme(self.lexeme)


@dataclass(frozen=True)
class ConceptAnnotation:
    key: AnnotationKey
    value: str

    def __post_init__(self):
        if not isinstance(self.key, AnnotationKey):
            object.__setattr__(self, "key", AnnotationKey(self.key))


@dataclass(frozen=True)
class LegalConcept:
    id: str
    preferred_term: str
    scope_id: str
    annotations: tuple[ConceptAnnotation, ...] = ()
    explicit_definition: str | None = None

    def __post_init__(self):
        if self.explicit_definition is not None and not self.explicit_definition.strip():
            raise ValueError(f"concept {self.id!r}: explicit definition is empty")


@dataclass(frozen=True)
class FactType:
    subject: str
    verb: str
    object: str


class ResolutionKind(enum.Enum):
    EXPLICIT = "explicit"
    PLAIN = "plain"
    UNDEFINED = "undefined"


@dataclass(frozen=True)
class Resolution:
    kind: ResolutionKind
    concept: LegalConcept | None = None
    shadowing: bool = False


@dataclass(frozen=True)
class Vocabulary:
    scope_id: str
    terms: tuple[LegalTerm, ...] = ()
    concepts: tuple[LegalConcept, ...] = ()
    fact_types: tuple[FactType, ...] = ()
    base_lexicon: frozenset[str] = frozenset()
    base_lexicon_ref: str | None = field(default=None, compare=False)

    @cached_property
    def _concepts_by_id(self) -> dict[str, LegalConcept]:
        return {c.id: c for c in self.concepts}

    @cached_property
    def _concepts_by_lexeme(self) -> dict[str, list[LegalConcept]]:
        out: dict[str, list[LegalConcept]] = {}
        for c in self.concepts:
            out.setdefault(c.preferred_term, []).append(c)
        return out

    def __len__(self) -> int:
        return len(self.concepts)

    def concept(self, concept_id: str) -> LegalConcept:
        try:
            return self._concepts_by_id[concept_id]
        except KeyError:
            raise UnknownConcept(concept_id) from None

    def owners(self, lexeme: str) -> list[LegalConcept]:
        return list(self._concepts_by_lexeme.get(lexeme, ()))

    def defines(self, lexeme: str) -> bool:
        return lexeme in self._concepts_by_lexeme

    def remove_concept(self, concept_id: str) -> Vocabulary:
        """Drop a concept, its preferred term and any fact type built on it."""
        c = self.concept(concept_id)
        still_used = {x.preferred_term for x in self.concepts if x.id != concept_id}
        return replace(
            self,
            concepts=tuple(x for x in self.concepts if x.id != concept_id),
            terms=tuple(t for t in self.terms if t.lexeme != c.preferred_term or t.lexeme in still_used),
            fact_types=tuple(
                f for f in self.fact_types if concept_id not in (f.subject, f.object)
            ),
        )


def define_concept(
    vocab: Vocabulary,
    term: LegalTerm,
    annotations: Iterable[ConceptAnnotation] = (),
    explicit_definition: str | None = None,
    scope: str | None = None,
    concept_id: str | None = None,
) -> Vocabulary:
    """Register a concept named by ``term``; the concept id defaults to the lexeme."""
    check_lexeme(term.lexeme)
    concept_id = concept_id or term.lexeme
    if concept_id in vocab._concepts_by_id:
        raise DuplicateConcept(concept_id)
    concept = LegalConcept(
        id=concept_id,
        preferred_term=term.lexeme,
        scope_id=scope or vocab.scope_id,
        annotations=tuple(annotations),
        explicit_definition=explicit_definition,
    )
    terms = vocab.terms
    if all(t.lexeme != term.lexeme for t in terms):
        terms = terms + (term,)
    return replace(vocab, terms=terms, concepts=vocab.concepts + (concept,))


def define_fact_type(vocab: Vocabulary, subject: str, verb: str, object: str) -> Vocabulary:
    vocab.concept(subject)
    vocab.concept(object)
    check_lexeme(verb)
    ft = FactType(subject, verb, object)
    if ft in vocab.fact_types:
        raise DuplicateFactType((subject, verb, object))
    return replace(vocab, fact_types=vocab.fact_types + (ft,))


def resolve_term(vocab: Vocabulary, lexeme: str) -> Resolution:
    check_lexeme(lexeme)
    plain = lexeme in vocab.base_lexicon
    for c in vocab.owners(lexeme):
        if c.explicit_definition is not None:
            return Resolution(ResolutionKind.EXPLICIT, c, shadowing=plain)
    if plain:
        return Resolution(ResolutionKind.PLAIN)
    return Resolution(ResolutionKind.UNDEFINED)


def validate_vocabulary(vocab: Vocabulary) -> list[str]:
    """Return one message per dangling or duplicated reference. Empty means valid."""
    problems = []
    lexemes = [t.lexeme for t in vocab.terms]
    for lx in sorted({x for x in lexemes if lexemes.count(x) > 1}):
        problems.append(f"duplicate term {lx!r}")
    known_terms = set(lexemes)
    ids = [c.id for c in vocab.concepts]
    for cid in sorted({x for x in ids if ids.count(x) > 1}):
        problems.append(f"duplicate concept {cid!r}")
    for c in vocab.concepts:
        if c.preferred_term not in known_terms:
            problems.append(f"concept {c.id!r} references unknown term {c.preferred_term!r}")
    known = set(ids)
    seen = set()
    for f in vocab.fact_types:
        for part in (f.subject, f.object):
            if part not in known:
                problems.append(f"fact type {f.subject} {f.verb} {f.object}: unknown concept {part!r}")
        if f in seen:
            problems.append(f"duplicate fact type {f.subject} {f.verb} {f.object}")
        seen.add(f)
    return problems


# -- files -----------------------------------------------------------------

def vocabulary_to_dict(vocab: Vocabulary, base_lexicon_ref: str | None = None) -> dict:
    return {
        "scope_id": vocab.scope_id,
        "terms": [{"lexeme": t.lexeme, "label": t.label} for t in vocab.terms],
        "concepts": [
            {
                "id": c.id,
                "preferred_term": c.preferred_term,
                "scope_id": c.scope_id,
                "annotations": [{"key": a.key.value, "value": a.value} for a in c.annotations],
                "explicit_definition": c.explicit_definition,
            }
            for c in vocab.concepts
        ],
        "fact_types": [
            {"subject": f.subject, "verb": f.verb, "object": f.object} for f in vocab.fact_types
        ],
        "base_lexicon_ref": base_lexicon_ref if base_lexicon_ref is not None else vocab.base_lexicon_ref,
    }


def _read_lexicon(path: Path) -> frozenset[str]:
    words = set()
    for line in path.read_text(encoding="utf-8").splitlines():
        w = line.strip()
        if w and not w.startswith("#"):
            words.add(w)
    return frozenset(words)


def vocabulary_from_dict(data: dict, base_dir: Path | None = None) -> Vocabulary:
    ref = data.get("base_lexicon_ref")
    lexicon: frozenset[str] = frozenset()
    if ref:
        lexicon = _read_lexicon((base_dir or Path.cwd()) / ref)
    concepts = tuple(
        LegalConcept(
            id=c["id"],
            preferred_term=c["preferred_term"],
            scope_id=c.get("scope_id", data["scope_id"]),
            annotations=tuple(
                ConceptAnnotation(AnnotationKey(a["key"]), a["value"]) for a in c.get("annotations", [])
            ),
            explicit_definition=c.get("explicit_definition"),
        )
        for c in data.get("concepts", [])
    )
    return Vocabulary(
        scope_id=data["scope_id"],
        terms=tuple(LegalTerm(t["lexeme"], t.get("label", "")) for t in data.get("terms", [])),
        concepts=concepts,
        fact_types=tuple(
            FactType(f["subject"], f["verb"], f["object"]) for f in data.get("fact_types", [])
        ),
        base_lexicon=lexicon,
        base_lexicon_ref=ref,
    )


def load_vocabulary(path: str | Path) -> Vocabulary:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if not text.strip():
        raise ParseError("empty vocabulary file", 1, 1, str(path))
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno, str(path)) from None
    if not isinstance(data, dict) or "scope_id" not in data:
        raise ParseError("expected an object with a scope_id", 1, 1, str(path))
    try:
        vocab = vocabulary_from_dict(data, path.parent)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"invalid vocabulary: {exc}", 1, 1, str(path)) from None
    problems = validate_vocabulary(vocab)
    if problems:
        raise ParseError("; ".join(problems), 1, 1, str(path))
    return vocab


def save_vocabulary(vocab: Vocabulary, path: str | Path) -> None:
    """Write ``vocab`` as JSON plus its base lexicon word list.

    The word list goes to ``base_lexicon_ref`` (relative to the vocabulary
    file) or, when unset, to a sibling ``<name>.lexicon.txt``. An existing
    list with identical contents is left alone.
    """
    path = Path(path)
    ref = vocab.base_lexicon_ref
    if ref is None and vocab.base_lexicon:
        ref = path.name.removesuffix(".vocab.json").removesuffix(".json") + ".lexicon.txt"
    if ref is not None:
        lex_path = path.parent / ref
        if not lex_path.exists() or _read_lexicon(lex_path) != vocab.base_lexicon:
            lex_path.write_text("".join(w + "\n" for w in sorted(vocab.base_lexicon)), encoding="utf-8")
    data = vocabulary_to_dict(vocab, ref)
    path.write_text(json.dumps(data, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
