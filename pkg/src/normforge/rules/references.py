"""Checks that every rule points back to the legally binding text it formalizes."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Collection

from .model import RuleBase


class ReferenceProblem(enum.Enum):
    MISSING_REFERENCE = "missing_reference"
    DANGLING_REFERENCE = "dangling_reference"


@dataclass(frozen=True)
class ReferenceFinding:
    rule_id: str
    problem: ReferenceProblem
    citations: tuple[str, ...] = ()


def validate_references(rb: RuleBase, registry: Collection[str]) -> list[ReferenceFinding]:
    findings = []
    for rule in rb.rules:
        refs = rule.pragmatics.references
        if not refs:
            findings.append(ReferenceFinding(rule.id, ReferenceProblem.MISSING_REFERENCE))
            continue
        dangling = tuple(c for c in refs if c not in registry)
        if dangling:
            findings.append(ReferenceFinding(rule.id, ReferenceProblem.DANGLING_REFERENCE, dangling))
    return findings
