"""XML interchange format (``.kr4ip.xml``) carrying each rule's pragmatics envelope.

Layout::

    <LegalDocument>
      <Metadata><Entry key="...">...</Entry></Metadata>
      <RuleBase scope="...">
        <Rule id="..." modality="obligation|prohibition|permission">
          <Head subject="..." verb="..." object="..."/>
          <Body>(Atom | And | Or)</Body>              optional
          <rulePragmatics>
            <Sources><Source>...</Source></Sources>
            <References><Reference>...</Reference></References>
            <Authority>...</Authority>
            <Jurisdictions><Jurisdiction>...</Jurisdiction></Jurisdictions>
            <Associations><Association>...</Association></Associations>
            <TimeInstants start="..." end="..."/>
          </rulePragmatics>
        </Rule>
        <Fact subject="..." verb="..." object="..."/>
      </RuleBase>
    </LegalDocument>

Serialization is canonical: fixed element order, two-space indentation,
jurisdictions sorted, instants in UTC with a ``Z`` suffix.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass

from ..errors import DuplicateRuleId, SchemaError, XmlError
from ..vocabulary import LEXEME_RE
from .dsl import RULE_ID_RE
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
)

PRAGMATICS_ORDER = ("Sources", "References", "Authority", "Jurisdictions", "Associations", "TimeInstants")
_LIST_CHILD = {
    "Sources": "Source",
    "References": "Reference",
    "Jurisdictions": "Jurisdiction",
    "Associations": "Association",
}


@dataclass(frozen=True)
class LegalDocument:
    rulebase: RuleBase
    metadata: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "metadata", tuple(sorted(dict(self.metadata).items())))


# -- parsing ---------------------------------------------------------------

def _clause(el: ET.Element) -> Clause:
    parts = []
    for attr in ("subject", "verb", "object"):
        value = el.get(attr)
        if value is None:
            raise SchemaError(el.tag, f"missing attribute {attr!r}")
        value = value.lower()
        if not LEXEME_RE.match(value) or value == "the":
            raise SchemaError(el.tag, f"malformed lexeme {value!r}")
        parts.append(value)
    return Clause(*parts)


def _condition(el: ET.Element) -> Condition:
    if el.tag == "Atom":
        return Atom(_clause(el))
    if el.tag in ("And", "Or"):
        kids = [_condition(c) for c in el]
        try:
            return And(tuple(kids)) if el.tag == "And" else Or(tuple(kids))
        except ValueError as exc:
            raise SchemaError(el.tag, str(exc)) from None
    raise SchemaError(el.tag, "unexpected element in Body")


def _texts(el: ET.Element, child: str) -> list[str]:
    out = []
    for c in el:
        if c.tag != child:
            raise SchemaError(c.tag, f"unexpected element in {el.tag}")
        out.append((c.text or "").strip())
    return out


def _pragmatics(el: ET.Element) -> RulePragmatics:
    children = list(el)
    tags = [c.tag for c in children]
    for t in tags:
        if t not in PRAGMATICS_ORDER:
            raise SchemaError(t, "unexpected element in rulePragmatics")
    if len(set(tags)) != len(tags):
        raise SchemaError("rulePragmatics", "repeated child element")
    if tags != sorted(tags, key=PRAGMATICS_ORDER.index):
        raise SchemaError("rulePragmatics", "children out of order: " + ", ".join(PRAGMATICS_ORDER))
    by_tag = {c.tag: c for c in children}
    lists = {tag: _texts(by_tag[tag], child) if tag in by_tag else [] for tag, child in _LIST_CHILD.items()}
    authority = None
    if "Authority" in by_tag:
        authority = (by_tag["Authority"].text or "").strip() or None
    time = None
    if "TimeInstants" in by_tag:
        ti = by_tag["TimeInstants"]
        start, end = ti.get("start"), ti.get("end")
        if start or end:
            try:
                time = TimeInterval(start or None, end or None)
            except ValueError as exc:
                raise SchemaError("TimeInstants", str(exc)) from None
    return RulePragmatics(
        sources=tuple(lists["Sources"]),
        references=tuple(lists["References"]),
        authority=authority,
        jurisdictions=frozenset(j.lower() for j in lists["Jurisdictions"]),
        associations=tuple(lists["Associations"]),
        time=time,
    )


def _rule(el: ET.Element) -> DeonticRule:
    rid = el.get("id")
    if not rid or not RULE_ID_RE.match(rid):
        raise SchemaError("Rule", f"missing or malformed id {rid!r}")
    try:
        modality = Modality(el.get("modality", ""))
    except ValueError:
        raise SchemaError("Rule", f"unknown modality {el.get('modality')!r}") from None
    head = body = prag = None
    for c in el:
        if c.tag == "Head" and head is None:
            head = _clause(c)
        elif c.tag == "Body" and body is None and prag is None:
            kids = list(c)
            if len(kids) != 1:
                raise SchemaError("Body", "expected exactly one condition element")
            body = _condition(kids[0])
        elif c.tag == "rulePragmatics" and prag is None:
            prag = _pragmatics(c)
        else:
            raise SchemaError(c.tag, f"unexpected element in Rule {rid!r}")
    if head is None:
        raise SchemaError("Head", "required")
    if prag is None:
        raise SchemaError("rulePragmatics", "required")
    return DeonticRule(rid, modality, head, body, prag)


def parse_interchange(xml: str | bytes) -> LegalDocument:
    try:
        root = ET.fromstring(xml)
    except ET.ParseError as exc:
        raise XmlError(str(exc), tuple(exc.position)) from None
    if root.tag != "LegalDocument":
        raise SchemaError(root.tag, "root element must be LegalDocument")
    metadata: dict[str, str] = {}
    rulebase_el = None
    for c in root:
        if c.tag == "Metadata":
            for entry in c:
                if entry.tag != "Entry" or entry.get("key") is None:
                    raise SchemaError(entry.tag, "Metadata holds Entry elements with a key")
                metadata[entry.get("key")] = (entry.text or "").strip()
        elif c.tag == "RuleBase" and rulebase_el is None:
            rulebase_el = c
        else:
            raise SchemaError(c.tag, "unexpected element in LegalDocument")
    if rulebase_el is None:
        raise SchemaError("RuleBase", "required")
    rules, facts = [], []
    for c in rulebase_el:
        if c.tag == "Rule":
            rules.append(_rule(c))
        elif c.tag == "Fact":
            facts.append(_clause(c))
        else:
            raise SchemaError(c.tag, "unexpected element in RuleBase")
    try:
        rb = RuleBase(rulebase_el.get("scope", ""), tuple(rules), tuple(facts))
    except DuplicateRuleId as exc:
        raise SchemaError("Rule", f"duplicate id {exc.rule_id!r}") from None
    return LegalDocument(rb, tuple(metadata.items()))


# -- serialization ---------------------------------------------------------

def _clause_el(parent: ET.Element, tag: str, c: Clause) -> None:
    ET.SubElement(parent, tag, {"subject": c.subject, "verb": c.verb, "object": c.object})


def _condition_el(parent: ET.Element, cond: Condition) -> None:
    if isinstance(cond, Atom):
        _clause_el(parent, "Atom", cond.clause)
        return
    el = ET.SubElement(parent, "And" if isinstance(cond, And) else "Or")
    for c in cond.children:
        _condition_el(el, c)


def _pragmatics_el(parent: ET.Element, p: RulePragmatics) -> None:
    el = ET.SubElement(parent, "rulePragmatics")
    values = {
        "Sources": p.sources,
        "References": p.references,
        "Jurisdictions": sorted(p.jurisdictions),
        "Associations": p.associations,
    }
    for tag in PRAGMATICS_ORDER:
        if tag == "Authority":
            ET.SubElement(el, tag).text = p.authority or None
        elif tag == "TimeInstants":
            attrs = {}
            if p.time is not None and p.time.start is not None:
                attrs["start"] = format_instant(p.time.start)
            if p.time is not None and p.time.end is not None:
                attrs["end"] = format_instant(p.time.end)
            ET.SubElement(el, tag, attrs)
        else:
            group = ET.SubElement(el, tag)
            for v in values[tag]:
                ET.SubElement(group, _LIST_CHILD[tag]).text = v


def serialize_interchange(doc: LegalDocument) -> str:
    root = ET.Element("LegalDocument")
    if doc.metadata:
        meta = ET.SubElement(root, "Metadata")
        for k, v in doc.metadata:
            ET.SubElement(meta, "Entry", {"key": k}).text = v
    rb_el = ET.SubElement(root, "RuleBase", {"scope": doc.rulebase.scope_id})
    for rule in doc.rulebase.rules:
        r_el = ET.SubElement(rb_el, "Rule", {"id": rule.id, "modality": rule.modality.value})
        _clause_el(r_el, "Head", rule.head)
        if rule.body is not None:
            _condition_el(ET.SubElement(r_el, "Body"), rule.body)
        _pragmatics_el(r_el, rule.pragmatics)
    for fact in doc.rulebase.facts:
        _clause_el(rb_el, "Fact", fact)
    ET.indent(root, space="  ")
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(root, encoding="unicode") + "\n"


def canonicalize_interchange(xml: str | bytes) -> str:
    return serialize_interchange(parse_interchange(xml))
