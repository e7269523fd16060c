"""Statute decision models: DAGs of decision points, procedures and outcomes.

Case-law sub-models are spliced in as extra labelled branches of an anchor
node, so the generic path through a section is never altered.
"""

from __future__ import annotations

import enum
import graphlib
import json
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path
from typing import Iterable, Iterator, Mapping

from .errors import (
    IdCollision,
    MissingAnswer,
    NoSuchAnswer,
    ParseError,
    UnknownNode,
    ValidationFailed,
)
from .rules.model import RuleBase

CASE_ID_SEP = "/"


class NodeKind(enum.Enum):
    DECISION = "decision"
    PROCEDURE = "procedure"
    OUTCOME = "outcome"


@dataclass(frozen=True)
class ProceduralNormRef:
    rule_id: str
    citation: str = ""


@dataclass(frozen=True)
class DecisionNode:
    id: str
    kind: NodeKind
    prompt: str | None = None
    procedures: tuple[ProceduralNormRef, ...] = ()
    verdict: str | None = None
    provenance: str = ""


@dataclass(frozen=True)
class DecisionEdge:
    source: str
    target: str
    answer: str | None = None


@dataclass(frozen=True)
class DecisionModel:
    id: str
    section_citation: str
    nodes: tuple[DecisionNode, ...]
    edges: tuple[DecisionEdge, ...]
    entry: str

    def node(self, node_id: str) -> DecisionNode:
        for n in self.nodes:
            if n.id == node_id:
                return n
        raise UnknownNode(node_id)

    def outgoing(self, node_id: str) -> tuple[DecisionEdge, ...]:
        return tuple(e for e in self.edges if e.source == node_id)


class FindingCode(enum.Enum):
    DUPLICATE_NODE = "duplicate_node"
    UNKNOWN_ENTRY = "unknown_entry"
    DANGLING_EDGE = "dangling_edge"
    FIELD_MISMATCH = "field_mismatch"
    DUPLICATE_ANSWER = "duplicate_answer"
    UNLABELLED_BRANCH = "unlabelled_branch"
    DEAD_END = "dead_end"
    PROCEDURE_EXIT = "procedure_exit"
    OUTCOME_HAS_EDGES = "outcome_has_edges"
    CYCLE_DETECTED = "cycle_detected"
    UNREACHABLE_NODE = "unreachable_node"
    UNRESOLVED_PROCEDURE = "unresolved_procedure"


@dataclass(frozen=True)
class ModelFinding:
    code: FindingCode
    node: str | None
    detail: str = ""
    cycle: tuple[str, ...] = ()

    def __str__(self) -> str:
        where = f" at {self.node!r}" if self.node else ""
        return f"{self.code.value}{where}: {self.detail}" if self.detail else f"{self.code.value}{where}"


@dataclass(frozen=True)
class Trace:
    path: tuple[tuple[str, str | None], ...]
    triggered: tuple[ProceduralNormRef, ...] = ()
    verdict: str = ""


def _field_problems(n: DecisionNode) -> list[str]:
    problems = []
    if n.kind is NodeKind.DECISION:
        if not n.prompt:
            problems.append("decision node needs a prompt")
        if n.procedures or n.verdict is not None:
            problems.append("decision node carries procedures or a verdict")
    elif n.kind is NodeKind.PROCEDURE:
        if not n.procedures:
            problems.append("procedure node needs at least one procedure")
        if n.prompt is not None or n.verdict is not None:
            problems.append("procedure node carries a prompt or a verdict")
    else:
        if not n.verdict:
            problems.append("outcome node needs a verdict")
        if n.prompt is not None or n.procedures:
            problems.append("outcome node carries a prompt or procedures")
    return problems


def validate_model(m: DecisionModel, rb: RuleBase | None = None) -> list[ModelFinding]:
    """Structural checks, plus procedure resolution when a rulebase is given.

    Procedure nodes have exactly one unlabelled exit; labelled exits on a
    procedure node are case-law branches added by ``integrate_case_model``.
    """
    findings: list[ModelFinding] = []
    ids: dict[str, DecisionNode] = {}
    for n in m.nodes:
        if n.id in ids:
            findings.append(ModelFinding(FindingCode.DUPLICATE_NODE, n.id))
        ids[n.id] = n
    if m.entry not in ids:
        findings.append(ModelFinding(FindingCode.UNKNOWN_ENTRY, m.entry))

    succ: dict[str, list[str]] = {nid: [] for nid in ids}
    for e in m.edges:
        missing = [x for x in (e.source, e.target) if x not in ids]
        if missing:
            findings.append(
                ModelFinding(FindingCode.DANGLING_EDGE, e.source, f"edge to unknown node(s) {missing}")
            )
            continue
        succ[e.source].append(e.target)

    for n in ids.values():
        for problem in _field_problems(n):
            findings.append(ModelFinding(FindingCode.FIELD_MISMATCH, n.id, problem))
        out = [e for e in m.edges if e.source == n.id and e.target in ids]
        labels = [e.answer for e in out]
        if n.kind is NodeKind.DECISION:
            if not out:
                findings.append(ModelFinding(FindingCode.DEAD_END, n.id, "decision node has no branches"))
            if any(lbl is None or lbl == "" for lbl in labels):
                findings.append(ModelFinding(FindingCode.UNLABELLED_BRANCH, n.id))
        elif n.kind is NodeKind.PROCEDURE:
            plain = [lbl for lbl in labels if lbl is None]
            if len(plain) != 1:
                findings.append(
                    ModelFinding(
                        FindingCode.PROCEDURE_EXIT, n.id, f"expected one unlabelled exit, found {len(plain)}"
                    )
                )
        elif out:
            findings.append(ModelFinding(FindingCode.OUTCOME_HAS_EDGES, n.id))
        named = [lbl for lbl in labels if lbl]
        dups = sorted({lbl for lbl in named if named.count(lbl) > 1})
        if dups:
            findings.append(ModelFinding(FindingCode.DUPLICATE_ANSWER, n.id, f"repeated labels {dups}"))

    try:
        tuple(graphlib.TopologicalSorter({k: v for k, v in succ.items()}).static_order())
    except graphlib.CycleError as exc:
        cycle = tuple(exc.args[1])
        findings.append(
            ModelFinding(FindingCode.CYCLE_DETECTED, cycle[0], " -> ".join(cycle), cycle=cycle)
        )

    if m.entry in ids:
        reached = {m.entry}
        stack = [m.entry]
        while stack:
            for nxt in succ[stack.pop()]:
                if nxt not in reached:
                    reached.add(nxt)
                    stack.append(nxt)
        for nid in ids:
            if nid not in reached:
                findings.append(ModelFinding(FindingCode.UNREACHABLE_NODE, nid))

    if rb is not None:
        known = set(rb.rule_ids)
        for n in ids.values():
            for ref in n.procedures:
                if ref.rule_id not in known:
                    findings.append(
                        ModelFinding(FindingCode.UNRESOLVED_PROCEDURE, n.id, f"rule {ref.rule_id!r} not found")
                    )
    return findings


def integrate_case_model(
    section: DecisionModel, case: DecisionModel, at: str, rb: RuleBase | None = None
) -> DecisionModel:
    """Splice ``case`` into ``section`` as a new branch of node ``at``.

    Case node ids are prefixed with ``<case.id>/`` and the new edge is
    labelled with the case model id.
    """
    anchor = section.node(at)
    if anchor.kind is NodeKind.OUTCOME:
        raise ValidationFailed(
            [ModelFinding(FindingCode.OUTCOME_HAS_EDGES, at, "cannot branch from an outcome node")]
        )

    def pref(node_id: str) -> str:
        return f"{case.id}{CASE_ID_SEP}{node_id}"

    existing = {n.id for n in section.nodes}
    new_nodes = tuple(
        DecisionNode(pref(n.id), n.kind, n.prompt, n.procedures, n.verdict, n.provenance) for n in case.nodes
    )
    clashes = sorted(existing & {n.id for n in new_nodes})
    if clashes:
        raise IdCollision(clashes)
    new_edges = tuple(DecisionEdge(pref(e.source), pref(e.target), e.answer) for e in case.edges)
    merged = DecisionModel(
        id=section.id,
        section_citation=section.section_citation,
        nodes=section.nodes + new_nodes,
        edges=section.edges + (DecisionEdge(at, pref(case.entry), case.id),) + new_edges,
        entry=section.entry,
    )
    findings = validate_model(merged, rb)
    if findings:
        raise ValidationFailed(findings)
    return merged


def traverse(m: DecisionModel, answers: Mapping[str, str]) -> Trace:
    """Walk from the entry to an outcome.

    Decision nodes follow the branch named in ``answers``. Procedure nodes
    record their procedures and take their unlabelled exit, unless
    ``answers`` names one of their case-law branches.
    """
    findings = validate_model(m)
    if findings:
        raise ValidationFailed(findings)
    nodes = {n.id: n for n in m.nodes}
    path: list[tuple[str, str | None]] = []
    triggered: list[ProceduralNormRef] = []
    current = nodes[m.entry]
    for _ in range(len(nodes)):
        out = m.outgoing(current.id)
        if current.kind is NodeKind.OUTCOME:
            path.append((current.id, None))
            return Trace(tuple(path), tuple(triggered), current.verdict or "")
        if current.kind is NodeKind.DECISION:
            if current.id not in answers:
                raise MissingAnswer(current.id)
            label = answers[current.id]
            edge = next((e for e in out if e.answer == label), None)
            if edge is None:
                raise NoSuchAnswer(current.id, label)
            path.append((current.id, label))
        else:
            triggered.extend(current.procedures)
            label = answers.get(current.id)
            edge = next((e for e in out if label is not None and e.answer == label), None)
            if label is not None and edge is None:
                raise NoSuchAnswer(current.id, label)
            if edge is None:
                edge = next(e for e in out if e.answer is None)
            path.append((current.id, edge.answer))
        current = nodes[edge.target]
    raise AssertionError("walk exceeded node count in a validated acyclic model")


def decision_labels(m: DecisionModel) -> dict[str, tuple[str, ...]]:
    """Branch labels of every decision node, in edge order."""
    return {
        n.id: tuple(e.answer for e in m.outgoing(n.id))
        for n in m.nodes
        if n.kind is NodeKind.DECISION
    }


def enumerate_traces(m: DecisionModel) -> Iterator[tuple[dict[str, str], Trace]]:
    """Every full answer assignment over the decision nodes with its trace."""
    labels = decision_labels(m)
    keys = sorted(labels)
    for combo in product(*(labels[k] for k in keys)):
        answers = dict(zip(keys, combo))
        yield answers, traverse(m, answers)


# -- JSON ------------------------------------------------------------------

def model_to_dict(m: DecisionModel) -> dict:
    def node(n: DecisionNode) -> dict:
        d: dict = {"id": n.id, "kind": n.kind.value}
        if n.prompt is not None:
            d["prompt"] = n.prompt
        if n.procedures:
            d["procedures"] = [{"rule_id": p.rule_id, "citation": p.citation} for p in n.procedures]
        if n.verdict is not None:
            d["verdict"] = n.verdict
        d["provenance"] = n.provenance
        return d

    return {
        "id": m.id,
        "section_citation": m.section_citation,
        "entry": m.entry,
        "nodes": [node(n) for n in m.nodes],
        "edges": [{"from": e.source, "to": e.target, "answer": e.answer} for e in m.edges],
    }


def model_from_dict(data: Mapping) -> DecisionModel:
    nodes = tuple(
        DecisionNode(
            id=n["id"],
            kind=NodeKind(n["kind"]),
            prompt=n.get("prompt"),
            procedures=tuple(
                ProceduralNormRef(p["rule_id"], p.get("citation", "")) for p in n.get("procedures", [])
            ),
            verdict=n.get("verdict"),
            provenance=n.get("provenance", ""),
        )
        for n in data["nodes"]
    )
    edges = tuple(DecisionEdge(e["from"], e["to"], e.get("answer")) for e in data.get("edges", []))
    return DecisionModel(data["id"], data.get("section_citation", ""), nodes, edges, data["entry"])


def load_model(path: str | Path) -> DecisionModel:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno, str(path)) from None
    try:
        return model_from_dict(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"invalid decision model: {exc}", 1, 1, str(path)) from None


def save_model(m: DecisionModel, path: str | Path) -> None:
    Path(path).write_text(json.dumps(model_to_dict(m), indent=2, ensure_ascii=False) + "\n", encoding="utf-8")


def trace_to_dict(t: Trace) -> dict:
    return {
        "path": [{"node": node, "answer": answer} for node, answer in t.path],
        "triggered": [{"rule_id": p.rule_id, "citation": p.citation} for p in t.triggered],
        "verdict": t.verdict,
    }
