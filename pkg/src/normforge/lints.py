"""Static checks of a rulebase against four statutory-interpretation maxims.

Each maxim becomes a decidable registry check:

* relevance: a lexeme defined only in another legal scope leaks across the
  boundary of the provision (e.g. copyright's ``work_made_for_hire`` in a
  patent rulebase).
* quantity: a rule controls entities outside the declared whitelist, or,
  with no whitelist, an obligation/prohibition applies unconditionally.
* quality: a rule cites no legal basis, or cites one the source registry
  does not know.
* manner: a lexeme has neither a plain meaning nor a definition (error), or
  an explicit definition overrides a plain word (info).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Collection, Iterable, Mapping

from .errors import MissingVocabulary
from .rules.model import Modality, RuleBase
from .vocabulary import ResolutionKind, Vocabulary, resolve_term


class Maxim(enum.Enum):
    RELEVANCE = "relevance"
    QUANTITY = "quantity"
    QUALITY = "quality"
    MANNER = "manner"


class Severity(enum.Enum):
    ERROR = "error"
    WARNING = "warning"
    INFO = "info"


_MAXIM_ORDER = {m: i for i, m in enumerate(Maxim)}


@dataclass(frozen=True)
class Finding:
    maxim: Maxim
    severity: Severity
    rule_id: str
    message: str
    lexeme: str | None = None

    def to_dict(self) -> dict:
        return {
            "maxim": self.maxim.value,
            "severity": self.severity.value,
            "rule_id": self.rule_id,
            "lexeme": self.lexeme,
            "message": self.message,
        }

    def __str__(self) -> str:
        lex = f" [{self.lexeme}]" if self.lexeme else ""
        return f"{self.rule_id}: {self.severity.value} {self.maxim.value}{lex}: {self.message}"


@dataclass(frozen=True)
class LintConfig:
    declared_scope: str
    entity_whitelist: frozenset[str] | None = None
    # replaces the severity of every finding of that maxim
    severity_overrides: Mapping[Maxim, Severity] = field(default_factory=dict)


@dataclass(frozen=True)
class LintReport:
    findings: tuple[Finding, ...]

    def count(self, severity: Severity) -> int:
        return sum(1 for f in self.findings if f.severity is severity)

    @property
    def exit_code(self) -> int:
        if self.count(Severity.ERROR):
            return 2
        if self.count(Severity.WARNING):
            return 1
        return 0

    def to_dict(self) -> dict:
        return {
            "findings": [f.to_dict() for f in self.findings],
            "counts": {s.value: self.count(s) for s in Severity},
        }


def _scope_vocabs(rb: RuleBase, vocabs: Iterable[Vocabulary]) -> tuple[list[Vocabulary], list[Vocabulary]]:
    own, foreign = [], []
    for v in vocabs:
        (own if v.scope_id == rb.scope_id else foreign).append(v)
    if not own:
        raise MissingVocabulary(rb.scope_id)
    return own, foreign


def _in_scope(lexeme: str, own: list[Vocabulary]) -> bool:
    return any(v.defines(lexeme) or lexeme in v.base_lexicon for v in own)


def _override(findings: list[Finding], cfg: LintConfig | None) -> list[Finding]:
    if cfg is None or not cfg.severity_overrides:
        return findings
    return [
        replace(f, severity=cfg.severity_overrides[f.maxim]) if f.maxim in cfg.severity_overrides else f
        for f in findings
    ]


def lint_relevance(rb: RuleBase, vocabs: Iterable[Vocabulary], cfg: LintConfig | None = None) -> list[Finding]:
    own, foreign = _scope_vocabs(rb, vocabs)
    findings = []
    for rule in rb.rules:
        for lx in rule.lexemes():
            if _in_scope(lx, own):
                continue
            scopes = sorted({v.scope_id for v in foreign if v.defines(lx)})
            if scopes:
                findings.append(
                    Finding(
                        Maxim.RELEVANCE,
                        Severity.ERROR,
                        rule.id,
                        f"{lx!r} is defined only in {', '.join(scopes)}, outside scope {rb.scope_id!r}",
                        lx,
                    )
                )
    return _override(findings, cfg)


def lint_quantity(rb: RuleBase, vocabs: Iterable[Vocabulary], cfg: LintConfig | None = None) -> list[Finding]:
    _scope_vocabs(rb, vocabs)
    whitelist = None
    if cfg is not None and cfg.entity_whitelist is not None:
        whitelist = {w.lower() for w in cfg.entity_whitelist}
    findings = []
    for rule in rb.rules:
        if whitelist is not None:
            outside = [lx for lx in (rule.head.subject, rule.head.object) if lx not in whitelist]
            if outside:
                findings.append(
                    Finding(
                        Maxim.QUANTITY,
                        Severity.WARNING,
                        rule.id,
                        "rule controls entities outside its domain: " + ", ".join(dict.fromkeys(outside)),
                        outside[0],
                    )
                )
        elif rule.body is None and rule.modality is not Modality.PERMISSION:
            findings.append(
                Finding(
                    Maxim.QUANTITY,
                    Severity.WARNING,
                    rule.id,
                    f"unconditioned {rule.modality.value} applies without limit",
                )
            )
    return _override(findings, cfg)


def lint_quality(rb: RuleBase, source_registry: Collection[str], cfg: LintConfig | None = None) -> list[Finding]:
    findings = []
    for rule in rb.rules:
        refs = rule.pragmatics.references
        if not refs:
            findings.append(
                Finding(Maxim.QUALITY, Severity.ERROR, rule.id, "rule cites no legal basis for its objective")
            )
        for ref in refs:
            if ref not in source_registry:
                findings.append(
                    Finding(Maxim.QUALITY, Severity.WARNING, rule.id, f"reference {ref!r} is not a registered source")
                )
    return _override(findings, cfg)


def lint_manner(rb: RuleBase, vocabs: Iterable[Vocabulary], cfg: LintConfig | None = None) -> list[Finding]:
    own, foreign = _scope_vocabs(rb, vocabs)
    findings = []
    for rule in rb.rules:
        for lx in rule.lexemes():
            res = next(
                (r for r in (resolve_term(v, lx) for v in own) if r.kind is not ResolutionKind.UNDEFINED),
                None,
            )
            if res is None:
                if any(v.defines(lx) for v in foreign) and not any(v.defines(lx) for v in own):
                    continue  # reported by relevance
                findings.append(
                    Finding(
                        Maxim.MANNER,
                        Severity.ERROR,
                        rule.id,
                        f"{lx!r} has no plain meaning and no definition",
                        lx,
                    )
                )
            elif res.kind is ResolutionKind.EXPLICIT and res.shadowing:
                source = next((a.value for a in res.concept.annotations if a.key.value == "source"), None)
                via = f" by {source}" if source else ""
                findings.append(
                    Finding(
                        Maxim.MANNER,
                        Severity.INFO,
                        rule.id,
                        f"plain meaning of {lx!r} is altered{via}: {res.concept.explicit_definition}",
                        lx,
                    )
                )
    return _override(findings, cfg)


def lint_all(
    rb: RuleBase,
    vocabs: Iterable[Vocabulary],
    source_registry: Collection[str],
    cfg: LintConfig | None = None,
) -> LintReport:
    vocabs = list(vocabs)
    if not rb.rules:
        return LintReport(())
    if cfg is None:
        cfg = LintConfig(rb.scope_id)
    elif cfg.declared_scope != rb.scope_id:
        raise ValueError(f"lint scope {cfg.declared_scope!r} does not match rulebase scope {rb.scope_id!r}")
    findings = (
        lint_relevance(rb, vocabs, cfg)
        + lint_quantity(rb, vocabs, cfg)
        + lint_quality(rb, source_registry, cfg)
        + lint_manner(rb, vocabs, cfg)
    )
    # stable sort keeps lexeme order within one (rule, maxim) group
    findings.sort(key=lambda f: (f.rule_id, _MAXIM_ORDER[f.maxim]))
    return LintReport(tuple(findings))


def format_report(report: LintReport) -> str:
    lines = [str(f) for f in report.findings]
    c = report.to_dict()["counts"]
    lines.append(f"{c['error']} error(s), {c['warning']} warning(s), {c['info']} info")
    return "\n".join(lines) + "\n"
