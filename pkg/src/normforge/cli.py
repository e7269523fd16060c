"""``normforge`` command-line interface.

Exit codes: 0 success/clean, 1 warnings/violations, 2 syntax or content
errors, 3 I/O or missing inputs, 4 missing pragmatics metadata.
Machine output goes to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .decision import (
    integrate_case_model,
    load_model,
    model_to_dict,
    trace_to_dict,
    traverse,
    validate_model,
)
from .errors import (
    DuplicateRuleId,
    MissingAnswer,
    MissingVocabulary,
    NoSuchAnswer,
    NormforgeError,
    ParseError,
    RuleSyntaxError,
    SchemaError,
    UnknownNode,
    ValidationFailed,
    XmlError,
)
from .lints import LintConfig, LintReport, format_report, lint_all
from .pragmatics import bundle_to_dict, consolidate_context, load_pragmatics
from .reasoner import QueryContext, reason, result_to_dict
from .rules import (
    canonicalize_interchange,
    parse_facts,
    parse_rulebase,
    serialize_dsl,
    serialize_interchange,
)
from .vocabulary import load_vocabulary, resolve_term, validate_vocabulary
from .workspace import MissingPragmatics, Workspace, load_metadata, to_document

EXIT_OK, EXIT_FINDINGS, EXIT_SYNTAX, EXIT_IO, EXIT_METADATA = 0, 1, 2, 3, 4

_SYNTAX_ERRORS = (RuleSyntaxError, DuplicateRuleId, XmlError, SchemaError, ParseError)


class _Out:
    def __init__(self, quiet: bool):
        self.quiet = quiet

    def emit(self, text: str) -> None:
        sys.stdout.write(text)

    def emit_json(self, data) -> None:
        sys.stdout.write(json.dumps(data, indent=2, ensure_ascii=False) + "\n")

    def note(self, text: str) -> None:
        if not self.quiet:
            sys.stderr.write(text if text.endswith("\n") else text + "\n")

    def error(self, text: str) -> None:
        sys.stderr.write(f"normforge: {text}\n")


def _workspace(arg: str | None) -> Workspace:
    root = arg or os.environ.get("NORMFORGE_WORKSPACE")
    if not root:
        raise FileNotFoundError("no workspace given and NORMFORGE_WORKSPACE is unset")
    path = Path(root)
    if not path.is_dir():
        raise FileNotFoundError(f"workspace {root!r} is not a directory")
    return Workspace(path)


def _whitelist(value: str | None) -> frozenset[str] | None:
    if value is None:
        return None
    if value.startswith("@"):
        words = Path(value[1:]).read_text(encoding="utf-8").split()
    else:
        words = value.split(",")
    return frozenset(w.strip().lower() for w in words if w.strip())


# -- commands --------------------------------------------------------------

def cmd_parse(args, out: _Out) -> int:
    path = Path(args.file)
    data = path.read_bytes()
    syntax = args.syntax or ("xml" if path.name.endswith(".xml") else "dsl")
    if syntax == "xml":
        out.emit(canonicalize_interchange(data))
    else:
        out.emit(serialize_dsl(parse_rulebase(data)))
    return EXIT_OK


def cmd_lint(args, out: _Out) -> int:
    ws = _workspace(args.workspace)
    vocabs = ws.vocabularies()
    registry = ws.source_registry()
    bases = ws.rulebases()
    scopes = [args.scope] if args.scope else sorted({b.scope_id for b in bases})
    whitelist = _whitelist(args.whitelist)
    findings = []
    for scope in scopes:
        rb = ws.rulebase(scope)
        if args.scope and not any(v.scope_id == scope for v in vocabs):
            raise MissingVocabulary(scope)
        report = lint_all(rb, vocabs, registry, LintConfig(scope, whitelist))
        findings.extend(report.findings)
    report = LintReport(tuple(findings))
    if args.format == "json":
        out.emit_json(report.to_dict())
    else:
        out.note(format_report(report))
    return report.exit_code


def cmd_reason(args, out: _Out) -> int:
    ws = _workspace(args.workspace)
    rb = ws.rulebase()
    facts = ()
    if args.facts:
        facts = parse_facts(Path(args.facts).read_bytes())
    instant = args.at or datetime.now(timezone.utc)
    ctx = QueryContext(args.jurisdiction, instant, args.authority)
    result = reason(rb, ctx, facts)
    out.emit_json(result_to_dict(result))
    if args.format != "json":
        out.note(
            f"{len(result.conclusions)} conclusion(s), {len(result.conflicts)} conflict(s), "
            f"{len(result.compliance.violations)} violation(s)"
        )
    return result.exit_code


def _answers(value: str | None) -> dict[str, str]:
    answers: dict[str, str] = {}
    if not value:
        return answers
    for part in value.split(","):
        if not part.strip():
            continue
        key, sep, label = part.partition("=")
        if not sep:
            raise ValueError(f"answer {part!r} is not of the form node=label")
        answers[key.strip()] = label.strip()
    return answers


def cmd_decide(args, out: _Out) -> int:
    model = load_model(args.model)
    rb = parse_rulebase(Path(args.rules).read_bytes()) if args.rules else None
    for spec in args.case or ():
        case_path, sep, node = spec.rpartition("@")
        if not sep:
            raise ValueError(f"--case expects FILE@NODE, got {spec!r}")
        model = integrate_case_model(model, load_model(case_path), node, rb)
    findings = validate_model(model, rb)
    if findings:
        raise ValidationFailed(findings)
    if args.show_model:
        out.emit_json(model_to_dict(model))
        return EXIT_OK
    trace = traverse(model, _answers(args.answers))
    out.emit_json(trace_to_dict(trace))
    return EXIT_OK


def cmd_transform(args, out: _Out) -> int:
    rb = parse_rulebase(Path(args.file).read_bytes())
    meta = load_metadata(args.pragmatics) if args.pragmatics else {}
    xml = serialize_interchange(to_document(rb, meta))
    if args.output:
        Path(args.output).write_text(xml, encoding="utf-8")
    else:
        out.emit(xml)
    return EXIT_OK


def cmd_vocab(args, out: _Out) -> int:
    vocab = load_vocabulary(args.file)
    if args.action == "check":
        problems = validate_vocabulary(vocab)
        for p in problems:
            out.note(p)
        out.emit_json(
            {
                "scope_id": vocab.scope_id,
                "terms": len(vocab.terms),
                "concepts": len(vocab.concepts),
                "fact_types": len(vocab.fact_types),
                "base_lexicon": len(vocab.base_lexicon),
                "problems": problems,
            }
        )
        return EXIT_SYNTAX if problems else EXIT_OK
    results = []
    for lexeme in args.lexemes:
        res = resolve_term(vocab, lexeme)
        results.append(
            {
                "lexeme": lexeme,
                "kind": res.kind.value,
                "concept": res.concept.id if res.concept else None,
                "shadowing": res.shadowing,
            }
        )
    out.emit_json(results)
    return EXIT_OK


def cmd_context(args, out: _Out) -> int:
    p = load_pragmatics(args.file)
    out.emit_json(bundle_to_dict(consolidate_context(p)))
    return EXIT_OK


# -- wiring ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="normforge", description="Legal norm representation toolkit.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--format", choices=("text", "json"), default="text", help="report format")
    parser.add_argument("--quiet", action="store_true", help="suppress diagnostics on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def fmt(p):
        p.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)

    p = sub.add_parser("parse", help="print the canonical form of a .norm or .kr4ip.xml file")
    p.add_argument("file")
    p.add_argument("--format", dest="syntax", choices=("dsl", "xml"), default=None, help="input syntax")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("lint", help="check rulebases against the four maxims")
    p.add_argument("workspace", nargs="?")
    p.add_argument("--scope")
    p.add_argument("--whitelist", help="comma-separated lexemes, or @file")
    fmt(p)
    p.set_defaults(func=cmd_lint)

    p = sub.add_parser("reason", help="derive deontic conclusions for a query context")
    p.add_argument("workspace", nargs="?")
    p.add_argument("--jurisdiction", required=True)
    p.add_argument("--at", help="ISO-8601 instant (default: now)")
    p.add_argument("--authority")
    p.add_argument("--facts", help="file of 'Fact:' statements")
    fmt(p)
    p.set_defaults(func=cmd_reason)

    p = sub.add_parser("decide", help="walk a decision model")
    p.add_argument("model")
    p.add_argument("--answers", help="node=label,...")
    p.add_argument("--rules", help=".norm file to resolve procedure references against")
    p.add_argument("--case", action="append", help="integrate a case model: FILE@NODE (repeatable)")
    p.add_argument("--show-model", action="store_true", help="print the (integrated) model instead")
    fmt(p)
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("transform", help="emit the XML interchange form of a .norm file")
    p.add_argument("file")
    p.add_argument("--to", choices=("kr4ip",), default="kr4ip")
    p.add_argument("--pragmatics", help="sidecar JSON: rule id -> pragmatics")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("vocab", help="inspect a vocabulary")
    p.add_argument("action", choices=("check", "resolve"))
    p.add_argument("file")
    p.add_argument("lexemes", nargs="*")
    p.set_defaults(func=cmd_vocab)

    p = sub.add_parser("context", help="consolidate a pragmatics corpus file")
    p.add_argument("file")
    p.set_defaults(func=cmd_context)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    out = _Out(args.quiet)
    try:
        return args.func(args, out)
    except MissingPragmatics as exc:
        out.error(str(exc))
        return EXIT_METADATA
    except _SYNTAX_ERRORS as exc:
        out.error(f"syntax error: {exc}")
        return EXIT_SYNTAX
    except (MissingAnswer, NoSuchAnswer, ValidationFailed, UnknownNode) as exc:
        out.error(str(exc))
        return EXIT_SYNTAX
    except MissingVocabulary as exc:
        out.error(f"no vocabulary for scope {exc.args[0]!r}")
        return EXIT_IO
    except OSError as exc:
        out.error(str(exc))
        return EXIT_IO
    except (NormforgeError, ValueError) as exc:
        out.error(str(exc))
        return EXIT_SYNTAX


if __name__ == "__main__":
    sys.exit(main())
