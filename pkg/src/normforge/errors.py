"""Exception hierarchy shared by every normforge module."""

from __future__ import annotations


class NormforgeError(Exception):
    """Base class for all errors raised by normforge."""


# -- pragmatics ------------------------------------------------------------

class EmptyInput(NormforgeError, ValueError):
    pass


class DuplicateProposition(NormforgeError, ValueError):
    pass


class DuplicateWhWord(NormforgeError, ValueError):
    pass


class NoSuchQuestion(NormforgeError, KeyError):
    pass


class QuestionNotAccepted(NormforgeError, ValueError):
    pass


class EmptyAnswer(NormforgeError, ValueError):
    pass


class MixedNorms(NormforgeError, ValueError):
    pass


class DuplicateQuestionAnswer(NormforgeError, ValueError):
    pass


class ForeignInterpretation(NormforgeError, ValueError):
    pass


class UnknownDomain(NormforgeError, KeyError):
    pass


# -- vocabulary ------------------------------------------------------------

class DuplicateConcept(NormforgeError, ValueError):
    pass


class MalformedLexeme(NormforgeError, ValueError):
    pass


class UnknownConcept(NormforgeError, KeyError):
    pass


class DuplicateFactType(NormforgeError, ValueError):
    pass


class ParseError(NormforgeError, ValueError):
    """A data file could not be parsed. ``line``/``column`` are 1-based."""

    def __init__(self, message: str, line: int = 0, column: int = 0, path: str | None = None):
        self.line = line
        self.column = column
        self.path = path
        where = f"{path}:" if path else ""
        super().__init__(f"{where}{line}:{column}: {message}")


# -- rule language ---------------------------------------------------------

class RuleSyntaxError(NormforgeError, ValueError):
    """Positioned error from the DSL parser."""

    def __init__(self, line: int, column: int, expected: str, found: str):
        self.line = line
        self.column = column
        self.expected = expected
        self.found = found
        super().__init__(f"{line}:{column}: expected {expected}, found {found}")


class DuplicateRuleId(NormforgeError, ValueError):
    def __init__(self, rule_id: str, line: int = 0, column: int = 0):
        self.rule_id = rule_id
        self.line = line
        self.column = column
        super().__init__(f"{line}:{column}: duplicate rule id {rule_id!r}")


class XmlError(NormforgeError, ValueError):
    def __init__(self, message: str, position: tuple[int, int] = (0, 0)):
        self.position = position
        super().__init__(f"{position[0]}:{position[1]}: {message}")


class SchemaError(NormforgeError, ValueError):
    def __init__(self, element: str, reason: str):
        self.element = element
        self.reason = reason
        super().__init__(f"<{element}>: {reason}")


# -- decision models -------------------------------------------------------

class UnknownNode(NormforgeError, KeyError):
    pass


class IdCollision(NormforgeError, ValueError):
    pass


class ValidationFailed(NormforgeError, ValueError):
    def __init__(self, findings):
        self.findings = list(findings)
        detail = "; ".join(str(f) for f in self.findings) or "invalid model"
        super().__init__(detail)


class MissingAnswer(NormforgeError, KeyError):
    def __init__(self, node: str):
        self.node = node
        super().__init__(f"no answer supplied for decision node {node!r}")

    def __str__(self) -> str:  # KeyError quotes its message otherwise
        return self.args[0]


class NoSuchAnswer(NormforgeError, ValueError):
    def __init__(self, node: str, label: str):
        self.node = node
        self.label = label
        super().__init__(f"decision node {node!r} has no branch labelled {label!r}")


# -- lints -----------------------------------------------------------------

class MissingVocabulary(NormforgeError, LookupError):
    pass
