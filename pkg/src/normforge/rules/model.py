"""Deontic rule data model shared by the DSL, the XML interchange and the reasoner."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Iterable, Iterator, Union

from ..errors import DuplicateRuleId


class Modality(enum.Enum):
    OBLIGATION = "obligation"
    PROHIBITION = "prohibition"
    PERMISSION = "permission"

    @property
    def keyword(self) -> str:
        return _KEYWORDS[self]

    @classmethod
    def from_keyword(cls, word: str) -> Modality:
        return _BY_KEYWORD[word]


_KEYWORDS = {
    Modality.OBLIGATION: "obligatory",
    Modality.PROHIBITION: "prohibited",
    Modality.PERMISSION: "permitted",
}
_BY_KEYWORD = {v: k for k, v in _KEYWORDS.items()}


@dataclass(frozen=True, order=True)
class Clause:
    subject: str
    verb: str
    object: str
    # surface spelling as written (articles, capitals); ignored by equality
    display: str | None = field(default=None, compare=False, repr=False)

    def lexemes(self) -> tuple[str, str, str]:
        return (self.subject, self.verb, self.object)

    def __str__(self) -> str:
        return f"{self.subject} {self.verb} {self.object}"


@dataclass(frozen=True)
class Atom:
    clause: Clause

    def atoms(self) -> Iterator[Clause]:
        yield self.clause

    def depth(self) -> int:
        return 1


@dataclass(frozen=True)
class And:
    """Conjunction of atoms. Without parentheses in the grammar, only atoms nest here."""

    children: tuple[Atom, ...]

    def __post_init__(self):
        if len(self.children) < 2:
            raise ValueError("'and' needs at least two operands")
        if not all(isinstance(c, Atom) for c in self.children):
            raise ValueError("'and' operands must be atoms")

    def atoms(self) -> Iterator[Clause]:
        for c in self.children:
            yield from c.atoms()

    def depth(self) -> int:
        return 2


@dataclass(frozen=True)
class Or:
    children: tuple[Union[Atom, And], ...]

    def __post_init__(self):
        if len(self.children) < 2:
            raise ValueError("'or' needs at least two operands")
        if not all(isinstance(c, (Atom, And)) for c in self.children):
            raise ValueError("'or' operands must be atoms or conjunctions")

    def atoms(self) -> Iterator[Clause]:
        for c in self.children:
            yield from c.atoms()

    def depth(self) -> int:
        return 1 + max(c.depth() for c in self.children)


Condition = Union[Atom, And, Or]


def parse_instant(value: str | datetime) -> datetime:
    """Parse an ISO-8601 date or timestamp; naive values are taken as UTC."""
    if isinstance(value, datetime):
        dt = value
    else:
        text = value.strip()
        if text.endswith(("Z", "z")):
            text = text[:-1] + "+00:00"
        dt = datetime.fromisoformat(text)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(timezone.utc)


def format_instant(dt: datetime) -> str:
    dt = parse_instant(dt)
    if dt.microsecond:
        return dt.strftime("%Y-%m-%dT%H:%M:%S.%fZ")
    return dt.strftime("%Y-%m-%dT%H:%M:%SZ")


@dataclass(frozen=True)
class TimeInterval:
    start: datetime | None = None
    end: datetime | None = None

    def __post_init__(self):
        for name in ("start", "end"):
            v = getattr(self, name)
            if v is not None:
                object.__setattr__(self, name, parse_instant(v))
        if self.start is not None and self.end is not None and self.start > self.end:
            raise ValueError("time interval start is after its end")

    def contains(self, instant: datetime) -> bool:
        if self.start is not None and instant < self.start:
            return False
        if self.end is not None and instant > self.end:
            return False
        return True


@dataclass(frozen=True)
class RulePragmatics:
    sources: tuple[str, ...] = ()
    references: tuple[str, ...] = ()
    authority: str | None = None
    jurisdictions: frozenset[str] = frozenset()
    associations: tuple[str, ...] = ()
    time: TimeInterval | None = None

    def __post_init__(self):
        # an interval unbounded on both sides is the same as no interval
        if self.time is not None and self.time.start is None and self.time.end is None:
            object.__setattr__(self, "time", None)

    @classmethod
    def from_dict(cls, data: dict) -> RulePragmatics:
        time = data.get("time")
        return cls(
            sources=tuple(data.get("sources", ())),
            references=tuple(data.get("references", ())),
            authority=data.get("authority"),
            jurisdictions=frozenset(j.lower() for j in data.get("jurisdictions", ())),
            associations=tuple(data.get("associations", ())),
            time=TimeInterval(time.get("start"), time.get("end")) if time else None,
        )

    def to_dict(self) -> dict:
        out: dict = {
            "sources": list(self.sources),
            "references": list(self.references),
            "authority": self.authority,
            "jurisdictions": sorted(self.jurisdictions),
            "associations": list(self.associations),
            "time": None,
        }
        if self.time is not None:
            out["time"] = {
                "start": format_instant(self.time.start) if self.time.start else None,
                "end": format_instant(self.time.end) if self.time.end else None,
            }
        return out


@dataclass(frozen=True)
class DeonticRule:
    id: str
    modality: Modality
    head: Clause
    body: Condition | None = None
    pragmatics: RulePragmatics = RulePragmatics()

    def lexemes(self) -> Iterator[str]:
        """Every lexeme occurrence, head first, then body atoms left to right."""
        yield from self.head.lexemes()
        if self.body is not None:
            for clause in self.body.atoms():
                yield from clause.lexemes()


@dataclass(frozen=True)
class RuleBase:
    scope_id: str = ""
    rules: tuple[DeonticRule, ...] = ()
    facts: tuple[Clause, ...] = ()

    def __post_init__(self):
        seen: set[str] = set()
        for r in self.rules:
            if r.id in seen:
                raise DuplicateRuleId(r.id)
            seen.add(r.id)

    def rule(self, rule_id: str) -> DeonticRule:
        for r in self.rules:
            if r.id == rule_id:
                return r
        raise KeyError(rule_id)

    @property
    def rule_ids(self) -> tuple[str, ...]:
        return tuple(r.id for r in self.rules)


def merge_rulebases(bases: Iterable[RuleBase], scope_id: str | None = None) -> RuleBase:
    bases = list(bases)
    scope = scope_id if scope_id is not None else next((b.scope_id for b in bases if b.scope_id), "")
    return RuleBase(
        scope,
        tuple(r for b in bases for r in b.rules),
        tuple(f for b in bases for f in b.facts),
    )
