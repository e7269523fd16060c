"""Lexer, recursive-descent parser and canonical printer for the ``.norm`` DSL.

Grammar::

    rulebase   := { statement } ;
    statement  := rule | fact ;
    rule       := "It is" modality "that" clause [ [","] "if" condition ] "." ;
    modality   := "obligatory" | "prohibited" | "permitted" ;
    fact       := "Fact:" clause "." ;
    condition  := conj { "or" conj } ;
    conj       := clause { "and" clause } ;
    clause     := [ "the" ] LEXEME LEXEME [ "the" ] LEXEME ;

Lexemes are stored lowercased. ``//`` starts a comment; two comment forms are
directives: ``// id: <name>`` names the next rule and ``// scope: <name>``
sets the rulebase scope. Unnamed rules get ``r<k>`` where k is the rule's
1-based position.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import NamedTuple

from ..errors import DuplicateRuleId, RuleSyntaxError
from .model import And, Atom, Clause, Condition, DeonticRule, Modality, Or, RuleBase, RulePragmatics

RULE_ID_RE = re.compile(r"[A-Za-z0-9_][A-Za-z0-9_.\-]*\Z")
SCOPE_RE = re.compile(r"[a-z][a-z0-9_]*\Z")
_DIRECTIVE_RE = re.compile(r"//\s*(id|scope)\s*:\s*(\S*)\s*\Z")

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\f\v]+)
  | (?P<nl>\n)
  | (?P<comment>//[^\n]*)
  | (?P<fact>Fact:)
  | (?P<word>[A-Za-z][A-Za-z0-9_]*)
  | (?P<comma>,)
  | (?P<period>\.)
    """,
    re.VERBOSE | re.ASCII,
)

# the article is optional before a lexeme, so it can never be one
RESERVED = frozenset({"the"})


class Token(NamedTuple):
    kind: str  # word | fact | comma | period | directive | eof
    text: str
    line: int
    column: int


def _describe(tok: Token) -> str:
    if tok.kind == "eof":
        return "end of input"
    return repr(tok.text)


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos, line, line_start = 0, 1, 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise RuleSyntaxError(line, col, "token", repr(text[pos]))
        kind = m.lastgroup
        lexeme = m.group()
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "comment":
            d = _DIRECTIVE_RE.match(lexeme)
            if d:
                tokens.append(Token("directive", f"{d.group(1)}:{d.group(2)}", line, col))
        elif kind != "ws":
            tokens.append(Token(kind, lexeme, line, col))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def error(self, expected: str) -> RuleSyntaxError:
        t = self.tok
        return RuleSyntaxError(t.line, t.column, expected, _describe(t))

    def advance(self) -> Token:
        t = self.tokens[self.i]
        if t.kind != "eof":
            self.i += 1
        return t

    def at_word(self, *words: str) -> bool:
        return self.tok.kind == "word" and self.tok.text in words

    def expect_word(self, word: str) -> Token:
        if not self.at_word(word):
            raise self.error(repr(word))
        return self.advance()

    def expect(self, kind: str, expected: str) -> Token:
        if self.tok.kind != kind:
            raise self.error(expected)
        return self.advance()

    def lexeme(self) -> Token:
        t = self.tok
        if t.kind != "word" or t.text.lower() in RESERVED:
            raise self.error("lexeme")
        return self.advance()

    def clause(self) -> Clause:
        parts: list[str] = []
        if self.at_word("the"):
            parts.append(self.advance().text)
        subj = self.lexeme()
        verb = self.lexeme()
        parts += [subj.text, verb.text]
        if self.at_word("the"):
            parts.append(self.advance().text)
        obj = self.lexeme()
        parts.append(obj.text)
        return Clause(subj.text.lower(), verb.text.lower(), obj.text.lower(), display=" ".join(parts))

    def conj(self) -> Atom | And:
        atoms = [Atom(self.clause())]
        while self.at_word("and"):
            self.advance()
            atoms.append(Atom(self.clause()))
        return atoms[0] if len(atoms) == 1 else And(tuple(atoms))

    def condition(self) -> Condition:
        terms = [self.conj()]
        while self.at_word("or"):
            self.advance()
            terms.append(self.conj())
        return terms[0] if len(terms) == 1 else Or(tuple(terms))

    def rule(self, rule_id: str) -> DeonticRule:
        self.expect_word("It")
        self.expect_word("is")
        if self.tok.kind != "word" or self.tok.text not in ("obligatory", "prohibited", "permitted"):
            raise self.error("'obligatory', 'prohibited' or 'permitted'")
        modality = Modality.from_keyword(self.advance().text)
        self.expect_word("that")
        head = self.clause()
        body = None
        if self.tok.kind == "comma":
            self.advance()
            if not self.at_word("if"):
                raise self.error("'if'")
        if self.at_word("if"):
            self.advance()
            body = self.condition()
        self.expect("period", "'.'")
        return DeonticRule(rule_id, modality, head, body, RulePragmatics())

    def rulebase(self, scope_id: str) -> RuleBase:
        rules: list[DeonticRule] = []
        facts: list[Clause] = []
        ids: set[str] = set()
        pending_id: Token | None = None
        while self.tok.kind != "eof":
            t = self.tok
            if t.kind == "directive":
                self.advance()
                name, _, value = t.text.partition(":")
                if name == "id":
                    if not RULE_ID_RE.match(value):
                        raise RuleSyntaxError(t.line, t.column, "rule id", repr(value))
                    pending_id = t._replace(text=value)
                else:
                    if not SCOPE_RE.match(value):
                        raise RuleSyntaxError(t.line, t.column, "scope identifier", repr(value))
                    scope_id = value
                continue
            if t.kind == "fact":
                if pending_id is not None:
                    raise RuleSyntaxError(t.line, t.column, "rule after id directive", "'Fact:'")
                self.advance()
                facts.append(self.clause())
                self.expect("period", "'.'")
                continue
            if self.at_word("It"):
                rid = pending_id.text if pending_id else f"r{len(rules) + 1}"
                where = pending_id or t
                pending_id = None
                rule = self.rule(rid)
                if rid in ids:
                    raise DuplicateRuleId(rid, where.line, where.column)
                ids.add(rid)
                rules.append(rule)
                continue
            raise self.error("'It is' or 'Fact:'")
        if pending_id is not None:
            raise RuleSyntaxError(self.tok.line, self.tok.column, "rule after id directive", "end of input")
        return RuleBase(scope_id, tuple(rules), tuple(facts))


def _decode(data: bytes) -> str:
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        prefix = data[: exc.start]
        line = prefix.count(b"\n") + 1
        col = len(prefix) - (prefix.rfind(b"\n") + 1) + 1
        raise RuleSyntaxError(line, col, "UTF-8 text", f"byte 0x{data[exc.start]:02x}") from None


def parse_rulebase(text: str | bytes, scope_id: str = "") -> RuleBase:
    """Parse DSL text. Raises ``RuleSyntaxError`` or ``DuplicateRuleId``."""
    if isinstance(text, (bytes, bytearray)):
        text = _decode(bytes(text))
    return _Parser(tokenize(text)).rulebase(scope_id)


def parse_facts(text: str | bytes) -> tuple[Clause, ...]:
    """Parse a file that may contain only ``Fact:`` statements."""
    rb = parse_rulebase(text)
    if rb.rules:
        raise RuleSyntaxError(1, 1, "only 'Fact:' statements", f"rule {rb.rules[0].id!r}")
    return rb.facts


# -- printing --------------------------------------------------------------

def _clause_text(c: Clause) -> str:
    if c.display is not None:
        words = [w for w in c.display.split() if w.lower() != "the"]
        if [w.lower() for w in words] == list(c.lexemes()):
            return c.display
    return f"{c.subject} {c.verb} {c.object}"


def condition_text(cond: Condition) -> str:
    if isinstance(cond, Atom):
        return _clause_text(cond.clause)
    if isinstance(cond, And):
        return " and ".join(condition_text(c) for c in cond.children)
    return " or ".join(condition_text(c) for c in cond.children)


def rule_text(rule: DeonticRule) -> str:
    text = f"It is {rule.modality.keyword} that {_clause_text(rule.head)}"
    if rule.body is not None:
        text += f", if {condition_text(rule.body)}"
    return text + "."


def serialize_dsl(rb: RuleBase) -> str:
    """Canonical text: one statement per line, rules first, then facts."""
    lines: list[str] = []
    if rb.scope_id:
        lines.append(f"// scope: {rb.scope_id}")
    for k, rule in enumerate(rb.rules, start=1):
        if rule.id != f"r{k}":
            lines.append(f"// id: {rule.id}")
        lines.append(rule_text(rule))
    for fact in rb.facts:
        lines.append(f"Fact: {_clause_text(fact)}.")
    return "".join(line + "\n" for line in lines)
