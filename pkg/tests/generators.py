"""Seeded random generators for rulebases, contexts and decision graphs."""

from __future__ import annotations

import random
from datetime import datetime, timedelta, timezone

from normforge.decision import DecisionEdge, DecisionModel, DecisionNode, NodeKind, ProceduralNormRef
from normforge.reasoner import QueryContext
from normforge.rules import (
    And,
    Atom,
    Clause,
    DeonticRule,
    LegalDocument,
    Modality,
    Or,
    RuleBase,
    RulePragmatics,
    TimeInterval,
)

LEXEMES = [
    "claim", "office_action", "paragraph_7_33_01", "includes", "is_rejected_under",
    "essential_subject_matter_requirement", "specification", "patentee", "applicant",
    "it", "is", "that", "if", "and", "or", "fact", "obligatory", "x1", "y_2", "z",
]
JURISDICTIONS = ["us", "in", "de", "eu", "jp"]
EPOCH = datetime(2000, 1, 1, tzinfo=timezone.utc)


def lexeme(rng: random.Random) -> str:
    if rng.random() < 0.7:
        return rng.choice(LEXEMES)
    head = rng.choice("abcdefghijklmnopqrstuvwxyz")
    tail = "".join(rng.choice("abcdefghijklmnopqrstuvwxyz0123456789_") for _ in range(rng.randint(0, 8)))
    word = head + tail
    return word if word != "the" else "thee"


def clause(rng: random.Random, pool: list[Clause] | None = None) -> Clause:
    if pool and rng.random() < 0.6:
        return rng.choice(pool)
    return Clause(lexeme(rng), lexeme(rng), lexeme(rng))


def condition(rng: random.Random, pool: list[Clause] | None = None, max_depth: int = 4):
    """A random condition of at most ``max_depth`` levels counting the clause.

    Without parentheses the deepest expressible shape is or -> and -> atom -> clause.
    """
    depth = rng.randint(2, max(2, max_depth))
    if depth == 2:
        return Atom(clause(rng, pool))
    if depth == 3:
        return And(tuple(Atom(clause(rng, pool)) for _ in range(rng.randint(2, 3))))

    def term():
        if rng.random() < 0.5:
            return Atom(clause(rng, pool))
        return And(tuple(Atom(clause(rng, pool)) for _ in range(rng.randint(2, 3))))

    return Or(tuple(term() for _ in range(rng.randint(2, 3))))


def instant(rng: random.Random) -> datetime:
    return EPOCH + timedelta(days=rng.randint(0, 9000), seconds=rng.choice([0, rng.randint(0, 86399)]))


def pragmatics(rng: random.Random) -> RulePragmatics:
    time = None
    if rng.random() < 0.5:
        a, b = instant(rng), instant(rng)
        start, end = min(a, b), max(a, b)
        time = TimeInterval(
            start if rng.random() < 0.8 else None,
            end if rng.random() < 0.8 else None,
        )
    return RulePragmatics(
        sources=tuple(f"Source {rng.randint(1, 9)}" for _ in range(rng.randint(0, 2))),
        references=tuple(f"MPEP 7.{rng.randint(1, 40)}" for _ in range(rng.randint(0, 2))),
        authority=rng.choice([None, "USPTO", "EPO"]),
        jurisdictions=frozenset(rng.sample(JURISDICTIONS, rng.randint(0, 2))),
        associations=tuple(f"assoc_{rng.randint(1, 5)}" for _ in range(rng.randint(0, 2))),
        time=time,
    )


def rulebase(
    rng: random.Random,
    max_rules: int = 30,
    max_depth: int = 4,
    with_pragmatics: bool = False,
    pool: list[Clause] | None = None,
) -> RuleBase:
    n = rng.randint(0, max_rules)
    rules = []
    used: set[str] = set()
    for k in range(1, n + 1):
        rid = f"r{k}"
        if rng.random() < 0.3:
            rid = rng.choice(["mpep_7_33_01", "rule-", "R.", "x"]) + str(rng.randint(0, 99))
        if rid in used or (rid.startswith("r") and rid[1:].isdigit() and int(rid[1:]) > k):
            rid = f"custom_{k}"
        used.add(rid)
        body = condition(rng, pool, max_depth) if rng.random() < 0.8 else None
        rules.append(
            DeonticRule(
                rid,
                rng.choice(list(Modality)),
                clause(rng, pool),
                body,
                pragmatics(rng) if with_pragmatics else RulePragmatics(),
            )
        )
    facts = tuple(clause(rng, pool) for _ in range(rng.randint(0, 5)))
    scope = rng.choice(["", "us_patent_law", "us_copyright_law"])
    return RuleBase(scope, tuple(rules), facts)


def document(rng: random.Random) -> LegalDocument:
    meta = tuple((f"k{i}", f"value {rng.randint(0, 9)}") for i in range(rng.randint(0, 3)))
    return LegalDocument(rulebase(rng, max_rules=8, with_pragmatics=True), meta)


_FUZZ_PIECES = [
    b"It", b"is", b"obligatory", b"prohibited", b"permitted", b"that", b"the", b"if", b"and", b"or",
    b"Fact:", b",", b".", b" ", b"\n", b"// id: ", b"// scope: ", b"//", b"claim", b"x_1", b"r1",
    b"\xff", b"\xc3\xa9", b"\t", b":", b"(", b"\x00", b"Paragraph_7_33_01",
]


def fuzz_bytes(rng: random.Random, seeds: list[bytes] | None = None) -> bytes:
    """Raw random bytes, grammar fragments, or byte-level mutants of valid programs."""
    roll = rng.random()
    if roll < 0.35:
        return bytes(rng.getrandbits(8) for _ in range(rng.randint(0, 40)))
    if roll < 0.7 or not seeds:
        return b" ".join(rng.choice(_FUZZ_PIECES) for _ in range(rng.randint(0, 30)))
    data = bytearray(rng.choice(seeds))
    for _ in range(rng.randint(1, 4)):
        pos = rng.randint(0, len(data))
        op = rng.randrange(3)
        if op == 0:
            data[pos:pos] = rng.choice(_FUZZ_PIECES)
        elif op == 1:
            del data[pos:pos + rng.randint(1, 8)]
        elif data:
            data[min(pos, len(data) - 1)] = rng.getrandbits(8)
    return bytes(data)


def decision_dag(rng: random.Random, n_decisions: int | None = None):
    """A valid random decision model: decisions in topological order, each with two branches."""
    k = n_decisions if n_decisions is not None else rng.randint(1, 8)
    decisions = [f"d{i}" for i in range(k)]
    nodes = [DecisionNode(d, NodeKind.DECISION, prompt=f"question {d}?") for d in decisions]
    nodes.append(DecisionNode("p", NodeKind.PROCEDURE, procedures=(ProceduralNormRef("r1", "MPEP 7.33.01"),)))
    nodes.append(DecisionNode("o_yes", NodeKind.OUTCOME, verdict="reject"))
    nodes.append(DecisionNode("o_no", NodeKind.OUTCOME, verdict="allow"))
    edges = []
    for i, d in enumerate(decisions):
        later = decisions[i + 1:] + ["p", "o_yes", "o_no"]
        # first branch goes to the next decision so every node is reachable
        first = decisions[i + 1] if i + 1 < k else "p"
        edges.append(DecisionEdge(d, first, "yes"))
        edges.append(DecisionEdge(d, rng.choice(later), "no"))
    edges.append(DecisionEdge("p", "o_yes"))
    if not any(e.target == "o_no" for e in edges):
        edges[-2] = DecisionEdge(edges[-2].source, "o_no", "no")
    return DecisionModel("random", "35 USC 112(a)", tuple(nodes), tuple(edges), "d0")


def context(rng: random.Random):
    return QueryContext(rng.choice(JURISDICTIONS), instant(rng), rng.choice([None, "USPTO"]))


def clause_pool(rng: random.Random, size: int = 8) -> list[Clause]:
    return [Clause(lexeme(rng), lexeme(rng), lexeme(rng)) for _ in range(size)]


def inject_cycle(m, rng: random.Random):
    """Add a back edge from a node reached on the yes-chain to an earlier decision."""
    decisions = [n.id for n in m.nodes if n.kind is NodeKind.DECISION]
    i = rng.randrange(len(decisions))
    j = rng.randint(i, len(decisions) - 1)
    back = DecisionEdge(decisions[j], decisions[i], "loop")
    return DecisionModel(m.id, m.section_citation, m.nodes, m.edges + (back,), m.entry)


def inject_unreachable(m, rng: random.Random):
    if rng.random() < 0.5:
        extra = (DecisionNode("orphan", NodeKind.OUTCOME, verdict="unreached"),)
        edges = m.edges
    else:
        extra = (
            DecisionNode("orphan", NodeKind.DECISION, prompt="?"),
            DecisionNode("orphan_out", NodeKind.OUTCOME, verdict="v"),
        )
        edges = m.edges + (DecisionEdge("orphan", "orphan_out", "yes"),)
    return DecisionModel(m.id, m.section_citation, m.nodes + extra, edges, m.entry)
