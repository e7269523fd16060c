"""Guard-filtered deontic forward chaining.

Rules are first filtered by their pragmatics envelope (jurisdiction and time
guards), then fired against a set of plain facts. Conclusions never feed
rule bodies, so the fixpoint is reached after one productive pass.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from datetime import datetime
from typing import Iterable

from .rules.model import (
    And,
    Atom,
    Clause,
    Condition,
    DeonticRule,
    Modality,
    Or,
    RuleBase,
    format_instant,
    parse_instant,
)


@dataclass(frozen=True)
class QueryContext:
    jurisdiction: str
    instant: datetime
    authority: str | None = None

    def __post_init__(self):
        if not self.jurisdiction:
            raise ValueError("query jurisdiction is empty")
        object.__setattr__(self, "jurisdiction", self.jurisdiction.lower())
        object.__setattr__(self, "instant", parse_instant(self.instant))

    def to_dict(self) -> dict:
        return {
            "jurisdiction": self.jurisdiction,
            "instant": format_instant(self.instant),
            "authority": self.authority,
        }


@dataclass(frozen=True)
class Derivation:
    rule_id: str
    matched_facts: tuple[Clause, ...]


@dataclass(frozen=True)
class Conclusion:
    modality: Modality
    clause: Clause
    derivation: tuple[Derivation, ...]

    def sort_key(self):
        return (self.clause, self.modality.value)


class ConflictKind(enum.Enum):
    OBLIGATION_PROHIBITION = "obligation_prohibition"
    PERMISSION_PROHIBITION = "permission_prohibition"


@dataclass(frozen=True)
class Conflict:
    clause: Clause
    kind: ConflictKind
    rules: tuple[tuple[str, ...], tuple[str, ...]]


class ViolationReason(enum.Enum):
    OBLIGATION_UNMET = "obligation_unmet"
    PROHIBITION_BREACHED = "prohibition_breached"


@dataclass(frozen=True)
class Violation:
    conclusion: Conclusion
    reason: ViolationReason


@dataclass(frozen=True)
class ComplianceReport:
    violations: tuple[Violation, ...]
    satisfied: tuple[Conclusion, ...]


def is_applicable(rule: DeonticRule, ctx: QueryContext) -> bool:
    p = rule.pragmatics
    if p.jurisdictions and ctx.jurisdiction not in p.jurisdictions:
        return False
    if p.time is not None and not p.time.contains(ctx.instant):
        return False
    return True


def filter_applicable(rb: RuleBase, ctx: QueryContext) -> RuleBase:
    """Keep the rules whose jurisdiction and time guards admit ``ctx``."""
    return RuleBase(rb.scope_id, tuple(r for r in rb.rules if is_applicable(r, ctx)), rb.facts)


def evaluate(cond: Condition, facts: frozenset[Clause]) -> tuple[bool, tuple[Clause, ...]]:
    """Truth value of ``cond`` and the facts that made it true."""
    if isinstance(cond, Atom):
        ok = cond.clause in facts
        return ok, (cond.clause,) if ok else ()
    results = [evaluate(c, facts) for c in cond.children]
    if isinstance(cond, And):
        if all(ok for ok, _ in results):
            return True, tuple(f for _, fs in results for f in fs)
        return False, ()
    return any(ok for ok, _ in results), tuple(f for ok, fs in results if ok for f in fs)


def _fire(rule: DeonticRule, facts: frozenset[Clause]) -> Derivation | None:
    if rule.body is None:
        return Derivation(rule.id, ())
    ok, matched = evaluate(rule.body, facts)
    return Derivation(rule.id, tuple(dict.fromkeys(matched))) if ok else None


def forward_chain(rb: RuleBase, facts: Iterable[Clause]) -> frozenset[Conclusion]:
    """Least fixpoint of the rules over ``facts``. Pragmatics are ignored here."""
    facts = frozenset(facts)
    derived: dict[tuple[Modality, Clause], dict[str, Derivation]] = {}
    changed = True
    while changed:
        changed = False
        for rule in rb.rules:
            key = (rule.modality, rule.head)
            if rule.id in derived.get(key, {}):
                continue
            d = _fire(rule, facts)
            if d is not None:
                derived.setdefault(key, {})[rule.id] = d
                changed = True
    return frozenset(
        Conclusion(m, c, tuple(ds[k] for k in sorted(ds))) for (m, c), ds in derived.items()
    )


def replay(conclusion: Conclusion, rb: RuleBase) -> bool:
    """Re-fire each recorded rule on its matched facts alone."""
    for d in conclusion.derivation:
        try:
            rule = rb.rule(d.rule_id)
        except KeyError:
            return False
        if rule.modality is not conclusion.modality or rule.head != conclusion.clause:
            return False
        if _fire(rule, frozenset(d.matched_facts)) is None:
            return False
    return bool(conclusion.derivation)


def sorted_conclusions(conclusions: Iterable[Conclusion]) -> list[Conclusion]:
    return sorted(conclusions, key=Conclusion.sort_key)


def detect_conflicts(conclusions: Iterable[Conclusion]) -> list[Conflict]:
    by_clause: dict[Clause, dict[Modality, tuple[str, ...]]] = {}
    for c in conclusions:
        ids = tuple(d.rule_id for d in c.derivation)
        slot = by_clause.setdefault(c.clause, {})
        slot[c.modality] = tuple(sorted(set(slot.get(c.modality, ()) + ids)))
    out = []
    for clause in sorted(by_clause):
        mods = by_clause[clause]
        forbidden = mods.get(Modality.PROHIBITION)
        if not forbidden:
            continue
        if Modality.OBLIGATION in mods:
            out.append(Conflict(clause, ConflictKind.OBLIGATION_PROHIBITION, (mods[Modality.OBLIGATION], forbidden)))
        if Modality.PERMISSION in mods:
            out.append(Conflict(clause, ConflictKind.PERMISSION_PROHIBITION, (mods[Modality.PERMISSION], forbidden)))
    return out


def check_compliance(conclusions: Iterable[Conclusion], facts: Iterable[Clause]) -> ComplianceReport:
    facts = frozenset(facts)
    violations, satisfied = [], []
    for c in sorted_conclusions(conclusions):
        if c.modality is Modality.OBLIGATION and c.clause not in facts:
            violations.append(Violation(c, ViolationReason.OBLIGATION_UNMET))
        elif c.modality is Modality.PROHIBITION and c.clause in facts:
            violations.append(Violation(c, ViolationReason.PROHIBITION_BREACHED))
        else:
            satisfied.append(c)
    return ComplianceReport(tuple(violations), tuple(satisfied))


@dataclass(frozen=True)
class ReasoningResult:
    context: QueryContext
    conclusions: tuple[Conclusion, ...]
    conflicts: tuple[Conflict, ...]
    compliance: ComplianceReport

    @property
    def exit_code(self) -> int:
        return 1 if self.conflicts or self.compliance.violations else 0


def reason(rb: RuleBase, ctx: QueryContext, facts: Iterable[Clause] = ()) -> ReasoningResult:
    """Filter, chain, then check conflicts and compliance. Rulebase facts are included."""
    all_facts = frozenset(rb.facts) | frozenset(facts)
    applicable = filter_applicable(rb, ctx)
    conclusions = sorted_conclusions(forward_chain(applicable, all_facts))
    return ReasoningResult(
        ctx,
        tuple(conclusions),
        tuple(detect_conflicts(conclusions)),
        check_compliance(conclusions, all_facts),
    )


# -- JSON ------------------------------------------------------------------

def clause_to_dict(c: Clause) -> dict:
    return {"subject": c.subject, "verb": c.verb, "object": c.object}


def conclusion_to_dict(c: Conclusion) -> dict:
    return {
        "modality": c.modality.value,
        "clause": clause_to_dict(c.clause),
        "derivation": [
            {"rule_id": d.rule_id, "matched_facts": [clause_to_dict(f) for f in d.matched_facts]}
            for d in c.derivation
        ],
    }


def result_to_dict(r: ReasoningResult) -> dict:
    return {
        "context": r.context.to_dict(),
        "conclusions": [conclusion_to_dict(c) for c in r.conclusions],
        "conflicts": [
            {
                "clause": clause_to_dict(c.clause),
                "kind": c.kind.value,
                "rules": [list(c.rules[0]), list(c.rules[1])],
            }
            for c in r.conflicts
        ],
        "compliance": {
            "violations": [
                {"conclusion": conclusion_to_dict(v.conclusion), "reason": v.reason.value}
                for v in r.compliance.violations
            ],
            "satisfied": [conclusion_to_dict(c) for c in r.compliance.satisfied],
        },
    }
