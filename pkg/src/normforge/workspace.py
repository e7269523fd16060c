"""Workspace discovery and loading.

A workspace is a directory holding ``*.norm`` rulebases (with optional
``<stem>.meta.json`` pragmatics sidecars), ``*.kr4ip.xml`` documents,
``*.vocab.json`` vocabularies, ``*.dmodel.json`` decision models, a
``sources.json`` citation registry and ``pragmatics/*.json`` corpora.
Files are always visited in lexicographic order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Mapping

from .errors import NormforgeError, ParseError
from .rules import (
    LegalDocument,
    RuleBase,
    RulePragmatics,
    merge_rulebases,
    parse_interchange,
    parse_rulebase,
)
from .vocabulary import Vocabulary, load_vocabulary

DOCUMENT_KEY = "@document"


class MissingPragmatics(NormforgeError, KeyError):
    def __init__(self, rule_ids):
        self.rule_ids = tuple(rule_ids)
        super().__init__(f"no pragmatics metadata for rule(s): {', '.join(self.rule_ids)}")

    def __str__(self) -> str:
        return self.args[0]


def _stem(path: Path, suffix: str) -> str:
    return path.name[: -len(suffix)]


def read_json(path: Path):
    text = path.read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno, str(path)) from None


def load_metadata(path: str | Path) -> dict:
    data = read_json(Path(path))
    if not isinstance(data, dict):
        raise ParseError("expected an object keyed by rule id", 1, 1, str(path))
    return data


def attach_pragmatics(rb: RuleBase, meta: Mapping, require_all: bool = True) -> RuleBase:
    """Replace each rule's pragmatics with the sidecar entry of the same id."""
    missing = [r.id for r in rb.rules if r.id not in meta]
    if missing and require_all:
        raise MissingPragmatics(missing)
    rules = tuple(
        replace(r, pragmatics=RulePragmatics.from_dict(meta[r.id])) if r.id in meta else r for r in rb.rules
    )
    return replace(rb, rules=rules)


def to_document(rb: RuleBase, meta: Mapping) -> LegalDocument:
    rb = attach_pragmatics(rb, meta)
    doc_meta = meta.get(DOCUMENT_KEY, {})
    return LegalDocument(rb, tuple((str(k), str(v)) for k, v in doc_meta.items()))


def load_norm_file(path: str | Path, with_sidecar: bool = True) -> RuleBase:
    path = Path(path)
    rb = parse_rulebase(path.read_bytes())
    sidecar = path.with_name(_stem(path, ".norm") + ".meta.json")
    if with_sidecar and sidecar.exists():
        rb = attach_pragmatics(rb, load_metadata(sidecar), require_all=False)
    return rb


@dataclass
class Workspace:
    root: Path

    def files(self, pattern: str) -> list[Path]:
        return sorted(p for p in self.root.glob(pattern) if p.is_file())

    def rulebases(self) -> list[RuleBase]:
        norms = self.files("*.norm")
        stems = {_stem(p, ".norm") for p in norms}
        out = [load_norm_file(p) for p in norms]
        for p in self.files("*.kr4ip.xml"):
            if _stem(p, ".kr4ip.xml") not in stems:
                out.append(parse_interchange(p.read_bytes()).rulebase)
        return out

    def rulebase(self, scope_id: str | None = None) -> RuleBase:
        bases = self.rulebases()
        if scope_id is not None:
            bases = [replace(b, scope_id=b.scope_id or scope_id) for b in bases]
            bases = [b for b in bases if b.scope_id == scope_id]
        return merge_rulebases(bases, scope_id)

    def vocabularies(self) -> list[Vocabulary]:
        return [load_vocabulary(p) for p in self.files("*.vocab.json")]

    def source_registry(self) -> frozenset[str]:
        path = self.root / "sources.json"
        if not path.exists():
            raise FileNotFoundError(str(path))
        data = read_json(path)
        if isinstance(data, dict):
            data = data.get("citations", [])
        return frozenset(str(c) for c in data)

    def decision_models(self) -> list[Path]:
        return self.files("*.dmodel.json")

    def pragmatics_files(self) -> list[Path]:
        return self.files("pragmatics/*.json")
