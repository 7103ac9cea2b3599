"""Knowledge base: the argument graph, its file format, and lint checks.

A knowledge base couples two inputs: a line-based graph file declaring
arguments and relations, and a JSON file mapping status arguments to
natural-language paraphrases. Parsed knowledge bases are immutable and
shared freely across sessions.
"""

from __future__ import annotations

import json
import re
import shlex
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import cached_property

ID_RE = re.compile(r"^[A-Za-z0-9_-]+$")


class ArgumentKind(Enum):
    STATUS = "status"
    REPLY = "reply"


@dataclass(frozen=True)
class Argument:
    """One node of the argument graph."""

    id: str
    kind: ArgumentKind
    description: str
    opposite: str | None = None  # status arguments only
    question_text: str | None = None  # yes/no question used to elicit this fact

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind.value,
            "description": self.description,
            "opposite": self.opposite,
            "question_text": self.question_text,
        }


class ErrorCode(Enum):
    SYNTAX = "SyntaxError"
    UNKNOWN_ID = "UnknownId"
    DUPLICATE_ID = "DuplicateId"
    OPPOSITE_ASYMMETRY = "OppositeAsymmetry"
    INVALID_ARGUMENT = "InvalidArgument"
    INVALID_RELATION = "InvalidRelation"
    MALFORMED_JSON = "MalformedJson"
    EMPTY_PARAPHRASE_LIST = "EmptyParaphraseList"


class KbError(Exception):
    """Base class for knowledge-base loading failures."""


class GraphParseError(KbError):
    def __init__(self, code: ErrorCode, message: str, line: int | None = None):
        self.code = code
        self.line = line
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"{code.value}{where}: {message}")


class ParaphraseError(KbError):
    def __init__(self, code: ErrorCode, message: str):
        self.code = code
        super().__init__(f"{code.value}: {message}")


@dataclass(frozen=True, eq=True)
class KnowledgeBase:
    """Immutable argument graph plus paraphrase corpus.

    `arguments` preserves declaration order; the first-declared member of
    an opposite pair is that dimension's primary node. The last entry of
    `reply_priority` is the default reply, delivered when no protection
    survives (it is endorsed implicitly rather than by declared relations).
    """

    arguments: dict[str, Argument]
    attacks: frozenset[tuple[str, str]]
    endorsements: frozenset[tuple[str, str]]
    reply_priority: tuple[str, ...]
    paraphrases: dict[str, tuple[str, ...]] = field(default_factory=dict)

    # -- basic views ----------------------------------------------------

    def status_ids(self) -> tuple[str, ...]:
        return tuple(a.id for a in self.arguments.values() if a.kind is ArgumentKind.STATUS)

    def reply_ids(self) -> tuple[str, ...]:
        return tuple(a.id for a in self.arguments.values() if a.kind is ArgumentKind.REPLY)

    def opposite(self, argument_id: str) -> str | None:
        return self.arguments[argument_id].opposite

    @property
    def default_reply(self) -> str | None:
        return self.reply_priority[-1] if self.reply_priority else None

    # -- derived indexes (computed once; the dataclass stays frozen) ----

    @cached_property
    def dimensions(self) -> tuple[tuple[str, ...], ...]:
        """Status arguments grouped into opposite pairs (or singletons),
        primary member first, in declaration order."""
        seen: set[str] = set()
        dims: list[tuple[str, ...]] = []
        for a in self.arguments.values():
            if a.kind is not ArgumentKind.STATUS or a.id in seen:
                continue
            if a.opposite:
                dims.append((a.id, a.opposite))
                seen.update((a.id, a.opposite))
            else:
                dims.append((a.id,))
                seen.add(a.id)
        return tuple(dims)

    @cached_property
    def dimension_index(self) -> dict[str, tuple[str, ...]]:
        return {m: dim for dim in self.dimensions for m in dim}

    def dimension_of(self, argument_id: str) -> tuple[str, ...]:
        return self.dimension_index[argument_id]

    @cached_property
    def attackers(self) -> dict[str, tuple[str, ...]]:
        """target id -> sorted attacker ids (empty tuple when unattacked)."""
        out: dict[str, list[str]] = {a.id: [] for a in self.arguments.values()}
        for src, tgt in self.attacks:
            out[tgt].append(src)
        return {k: tuple(sorted(v)) for k, v in out.items()}

    @cached_property
    def attack_targets(self) -> dict[str, tuple[str, ...]]:
        """source id -> sorted attacked ids."""
        out: dict[str, list[str]] = {a.id: [] for a in self.arguments.values()}
        for src, tgt in self.attacks:
            out[src].append(tgt)
        return {k: tuple(sorted(v)) for k, v in out.items()}

    @cached_property
    def endorsers(self) -> dict[str, tuple[str, ...]]:
        """reply id -> sorted endorsing status ids."""
        out: dict[str, list[str]] = {r: [] for r in self.reply_ids()}
        for src, tgt in self.endorsements:
            out[tgt].append(src)
        return {k: tuple(sorted(v)) for k, v in out.items()}

    def to_dict(self) -> dict:
        return {
            "arguments": [a.to_dict() for a in self.arguments.values()],
            "attacks": sorted(self.attacks),
            "endorsements": sorted(self.endorsements),
            "reply_priority": list(self.reply_priority),
            "paraphrases": {k: list(v) for k, v in self.paraphrases.items()},
        }


# -- graph parsing ------------------------------------------------------


def _split_line(raw: str, lineno: int) -> list[str]:
    try:
        return shlex.split(raw, comments=True)
    except ValueError as exc:
        raise GraphParseError(ErrorCode.SYNTAX, str(exc), lineno) from exc


def _check_id(token: str, lineno: int) -> str:
    if not ID_RE.match(token):
        raise GraphParseError(ErrorCode.SYNTAX, f"bad identifier {token!r}", lineno)
    return token


def parse_graph(text: str) -> KnowledgeBase:
    """Parse graph-file text into a KnowledgeBase (without paraphrases).

    Declarations are order-insensitive: relations may reference arguments
    declared later. Raises GraphParseError on the first violation found.
    """
    arguments: dict[str, Argument] = {}
    attack_lines: list[tuple[str, str, int]] = []
    endorse_lines: list[tuple[str, str, int]] = []
    priority: tuple[str, ...] | None = None
    priority_line = 0

    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = _split_line(raw, lineno)
        if not tokens:
            continue
        head, rest = tokens[0], tokens[1:]
        if head == "arg":
            if len(rest) < 3:
                raise GraphParseError(ErrorCode.SYNTAX, "arg needs id, kind and description", lineno)
            arg_id = _check_id(rest[0], lineno)
            try:
                kind = ArgumentKind(rest[1])
            except ValueError:
                raise GraphParseError(ErrorCode.SYNTAX, f"unknown argument kind {rest[1]!r}", lineno)
            description = rest[2]
            opposite = question = None
            for extra in rest[3:]:
                key, sep, value = extra.partition("=")
                if not sep or key not in ("opposite", "question"):
                    raise GraphParseError(ErrorCode.SYNTAX, f"unexpected token {extra!r}", lineno)
                if key == "opposite":
                    opposite = _check_id(value, lineno)
                else:
                    question = value
            if arg_id in arguments:
                raise GraphParseError(ErrorCode.DUPLICATE_ID, f"argument {arg_id!r} declared twice", lineno)
            if kind is ArgumentKind.REPLY and (opposite or question):
                raise GraphParseError(
                    ErrorCode.INVALID_ARGUMENT,
                    f"reply argument {arg_id!r} cannot carry opposite= or question=",
                    lineno,
                )
            if opposite == arg_id:
                raise GraphParseError(ErrorCode.INVALID_ARGUMENT, f"{arg_id!r} cannot be its own opposite", lineno)
            arguments[arg_id] = Argument(arg_id, kind, description, opposite, question)
        elif head == "att":
            if len(rest) != 2:
                raise GraphParseError(ErrorCode.SYNTAX, "att needs source and target", lineno)
            attack_lines.append((rest[0], rest[1], lineno))
        elif head == "end":
            if len(rest) != 2:
                raise GraphParseError(ErrorCode.SYNTAX, "end needs source and reply", lineno)
            endorse_lines.append((rest[0], rest[1], lineno))
        elif head == "priority":
            if priority is not None:
                raise GraphParseError(ErrorCode.SYNTAX, "priority declared twice", lineno)
            if not rest:
                raise GraphParseError(ErrorCode.SYNTAX, "priority needs at least one reply id", lineno)
            priority = tuple(_check_id(t, lineno) for t in rest)
            priority_line = lineno
        else:
            raise GraphParseError(ErrorCode.SYNTAX, f"unknown directive {head!r}", lineno)

    # second pass: resolve references now that all declarations are known
    def resolve(token: str, lineno: int) -> Argument:
        if token not in arguments:
            raise GraphParseError(ErrorCode.UNKNOWN_ID, f"unknown argument {token!r}", lineno)
        return arguments[token]

    for a in arguments.values():
        if a.opposite is None:
            continue
        other = arguments.get(a.opposite)
        if other is None:
            raise GraphParseError(ErrorCode.UNKNOWN_ID, f"opposite {a.opposite!r} of {a.id!r} is not declared")
        if other.kind is not ArgumentKind.STATUS:
            raise GraphParseError(ErrorCode.INVALID_ARGUMENT, f"opposite of {a.id!r} must be a status argument")
        if other.opposite != a.id:
            raise GraphParseError(
                ErrorCode.OPPOSITE_ASYMMETRY,
                f"{a.id!r} declares opposite {a.opposite!r} but {a.opposite!r} does not point back",
            )

    attacks: set[tuple[str, str]] = set()
    for src, tgt, lineno in attack_lines:
        source, target = resolve(src, lineno), resolve(tgt, lineno)
        if source.kind is not ArgumentKind.STATUS:
            raise GraphParseError(ErrorCode.INVALID_RELATION, f"attack source {src!r} must be a status argument", lineno)
        if source.id == target.id:
            raise GraphParseError(ErrorCode.INVALID_RELATION, f"{src!r} cannot attack itself", lineno)
        attacks.add((source.id, target.id))

    endorsements: set[tuple[str, str]] = set()
    for src, tgt, lineno in endorse_lines:
        source, target = resolve(src, lineno), resolve(tgt, lineno)
        if source.kind is not ArgumentKind.STATUS:
            raise GraphParseError(ErrorCode.INVALID_RELATION, f"endorsement source {src!r} must be a status argument", lineno)
        if target.kind is not ArgumentKind.REPLY:
            raise GraphParseError(ErrorCode.INVALID_RELATION, f"endorsement target {tgt!r} must be a reply argument", lineno)
        endorsements.add((source.id, target.id))

    if priority is not None:
        for token in priority:
            resolve(token, priority_line)

    return KnowledgeBase(
        arguments=arguments,
        attacks=frozenset(attacks),
        endorsements=frozenset(endorsements),
        reply_priority=priority or (),
    )


# -- paraphrase parsing and assembly -------------------------------------


def parse_paraphrases(text: str) -> dict[str, tuple[str, ...]]:
    """Parse the paraphrase JSON: an object mapping status-argument ids to
    non-empty arrays of non-empty strings. Id existence is checked later,
    at assembly against a graph."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParaphraseError(ErrorCode.MALFORMED_JSON, str(exc)) from exc
    if not isinstance(data, dict):
        raise ParaphraseError(ErrorCode.MALFORMED_JSON, "top level must be a JSON object")
    out: dict[str, tuple[str, ...]] = {}
    for key, value in data.items():
        if not isinstance(key, str) or not ID_RE.match(key):
            raise ParaphraseError(ErrorCode.MALFORMED_JSON, f"bad key {key!r}")
        if not isinstance(value, list) or not value:
            raise ParaphraseError(ErrorCode.EMPTY_PARAPHRASE_LIST, f"{key!r} needs a non-empty array")
        for item in value:
            if not isinstance(item, str) or not item.strip():
                raise ParaphraseError(ErrorCode.EMPTY_PARAPHRASE_LIST, f"{key!r} contains an empty paraphrase")
        out[key] = tuple(value)
    return out


def assemble(graph: KnowledgeBase, paraphrases: dict[str, tuple[str, ...]]) -> KnowledgeBase:
    """Attach a parsed paraphrase corpus to a parsed graph."""
    for key in paraphrases:
        arg = graph.arguments.get(key)
        if arg is None:
            raise ParaphraseError(ErrorCode.UNKNOWN_ID, f"paraphrase key {key!r} is not a declared argument")
        if arg.kind is not ArgumentKind.STATUS:
            raise ParaphraseError(ErrorCode.UNKNOWN_ID, f"paraphrase key {key!r} is not a status argument")
    return replace(graph, paraphrases=dict(paraphrases))


def load_kb(graph_text: str, paraphrase_text: str | None = None) -> KnowledgeBase:
    """Parse and assemble a knowledge base from file contents."""
    graph = parse_graph(graph_text)
    if paraphrase_text is None:
        return graph
    return assemble(graph, parse_paraphrases(paraphrase_text))


# -- serialization -------------------------------------------------------


def _quote(value: str) -> str:
    return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'


def serialize_graph(kb: KnowledgeBase) -> str:
    """Render the graph back to its file format.

    Arguments keep declaration order and relations are emitted sorted, so
    parse(serialize(kb)) reproduces kb exactly.
    """
    lines: list[str] = []
    for a in kb.arguments.values():
        parts = ["arg", a.id, a.kind.value, _quote(a.description)]
        if a.opposite:
            parts.append(f"opposite={a.opposite}")
        if a.question_text:
            parts.append(f"question={_quote(a.question_text)}")
        lines.append(" ".join(parts))
    for src, tgt in sorted(kb.attacks):
        lines.append(f"att {src} {tgt}")
    for src, tgt in sorted(kb.endorsements):
        lines.append(f"end {src} {tgt}")
    if kb.reply_priority:
        lines.append("priority " + " ".join(kb.reply_priority))
    return "\n".join(lines) + "\n"


# -- lint ----------------------------------------------------------------


class Severity(Enum):
    ERROR = "error"
    WARNING = "warning"
    NOTICE = "notice"


class LintCode(Enum):
    OPPOSITE_ASYMMETRY = "OppositeAsymmetry"
    MISSING_MUTUAL_ATTACK = "MissingMutualAttack"
    NO_ENDORSER = "NoEndorser"
    NO_PARAPHRASES = "NoParaphrases"
    DUPLICATE_PARAPHRASE = "DuplicateParaphrase"
    PRIORITY_MISSING_REPLY = "PriorityMissingReply"
    PRIORITY_DUPLICATE = "PriorityDuplicate"
    PRIORITY_NOT_REPLY = "PriorityNotReply"
    UNREACHABLE_REPLY = "UnreachableReply"
    REACHABILITY_SKIPPED = "ReachabilityCheckSkipped"


@dataclass(frozen=True)
class Finding:
    severity: Severity
    code: LintCode
    message: str
    subjects: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "severity": self.severity.value,
            "code": self.code.value,
            "message": self.message,
            "subjects": list(self.subjects),
        }


REACHABILITY_DIMENSION_LIMIT = 16


def lint(kb: KnowledgeBase) -> list[Finding]:
    """Check structural invariants. Deterministic: identical KBs produce
    identical findings in identical order."""
    findings: list[Finding] = []
    default = kb.default_reply

    for a in kb.arguments.values():
        if a.kind is not ArgumentKind.STATUS or a.opposite is None:
            continue
        other = kb.arguments.get(a.opposite)
        if other is None or other.opposite != a.id:
            findings.append(Finding(
                Severity.ERROR, LintCode.OPPOSITE_ASYMMETRY,
                f"{a.id} declares opposite {a.opposite} without a matching back-reference",
                (a.id, a.opposite),
            ))

    for dim in kb.dimensions:
        if len(dim) != 2:
            continue
        a, b = dim
        missing = [(s, t) for s, t in ((a, b), (b, a)) if (s, t) not in kb.attacks]
        if missing:
            directions = ", ".join(f"{s} -> {t}" for s, t in missing)
            findings.append(Finding(
                Severity.ERROR, LintCode.MISSING_MUTUAL_ATTACK,
                f"opposites {a} and {b} must attack each other (missing: {directions})",
                dim,
            ))

    for reply in kb.reply_ids():
        if reply == default:
            continue  # the default reply is endorsed implicitly
        if not kb.endorsers.get(reply):
            findings.append(Finding(
                Severity.ERROR, LintCode.NO_ENDORSER,
                f"reply {reply} has no endorser and can never be delivered",
                (reply,),
            ))

    priority_seen: set[str] = set()
    for entry in kb.reply_priority:
        if kb.arguments[entry].kind is not ArgumentKind.REPLY:
            findings.append(Finding(
                Severity.ERROR, LintCode.PRIORITY_NOT_REPLY,
                f"priority entry {entry} is not a reply argument",
                (entry,),
            ))
        if entry in priority_seen:
            findings.append(Finding(
                Severity.ERROR, LintCode.PRIORITY_DUPLICATE,
                f"priority lists {entry} more than once",
                (entry,),
            ))
        priority_seen.add(entry)
    for reply in kb.reply_ids():
        if reply not in priority_seen:
            findings.append(Finding(
                Severity.ERROR, LintCode.PRIORITY_MISSING_REPLY,
                f"reply {reply} is missing from the priority declaration",
                (reply,),
            ))

    for status in kb.status_ids():
        if not kb.paraphrases.get(status):
            findings.append(Finding(
                Severity.WARNING, LintCode.NO_PARAPHRASES,
                f"status argument {status} has no paraphrases; free-text input cannot reach it",
                (status,),
            ))

    owners: dict[str, str] = {}
    for status in kb.status_ids():
        for sentence in kb.paraphrases.get(status, ()):
            key = sentence.strip().lower()
            if key in owners and owners[key] != status:
                findings.append(Finding(
                    Severity.WARNING, LintCode.DUPLICATE_PARAPHRASE,
                    f"paraphrase {sentence!r} is shared by {owners[key]} and {status}",
                    (owners[key], status),
                ))
            else:
                owners[key] = status

    if len(kb.dimensions) > REACHABILITY_DIMENSION_LIMIT:
        findings.append(Finding(
            Severity.NOTICE, LintCode.REACHABILITY_SKIPPED,
            f"reachability check skipped: more than {REACHABILITY_DIMENSION_LIMIT} status dimensions",
        ))
    else:
        from . import engine  # local import: engine depends on this module

        for reply in kb.reply_ids():
            if reply == default:
                continue
            if engine.consistency_witness(kb, reply) is None:
                findings.append(Finding(
                    Severity.WARNING, LintCode.UNREACHABLE_REPLY,
                    f"no activation set can ever make reply {reply} consistent",
                    (reply,),
                ))

    return findings


def lint_errors(kb: KnowledgeBase) -> list[Finding]:
    return [f for f in lint(kb) if f.severity is Severity.ERROR]


def is_lint_clean(kb: KnowledgeBase) -> bool:
    """True when lint reports zero error-severity findings."""
    return not lint_errors(kb)
