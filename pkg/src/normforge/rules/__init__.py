from .dsl import parse_facts, parse_rulebase, rule_text, serialize_dsl, tokenize
from .interchange import (
    LegalDocument,
    canonicalize_interchange,
    parse_interchange,
    serialize_interchange,
)
from .model import (
    And,
    Atom,
    Clause,
    Condition,
    DeonticRule,
    Modality,
    Or,
    RuleBase,
    RulePragmatics,
    TimeInterval,
    format_instant,
    merge_rulebases,
    parse_instant,
)
from .references import ReferenceFinding, ReferenceProblem, validate_references

__all__ = [
    "And",
    "Atom",
    "Clause",
    "Condition",
    "DeonticRule",
    "LegalDocument",
    "Modality",
    "Or",
    "ReferenceFinding",
    "ReferenceProblem",
    "RuleBase",
    "RulePragmatics",
    "TimeInterval",
    "canonicalize_interchange",
    "format_instant",
    "merge_rulebases",
    "parse_facts",
    "parse_instant",
    "parse_interchange",
    "parse_rulebase",
    "rule_text",
    "serialize_dsl",
    "serialize_interchange",
    "tokenize",
    "validate_references",
]
