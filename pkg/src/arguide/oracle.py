"""Brute-force reference evaluation of reply standing.

This module exists to check the main engine, so it deliberately shares no
classification logic with it: everything here is re-derived from the raw
attack and endorsement sets by direct scanning. Only the ReplyStatus
vocabulary is imported. Keep it that way; the test suite includes a
mutation check that fails if the two modules ever start agreeing for the
wrong reason.
"""

from __future__ import annotations

from .engine import ReplyStatus
from .kb import ArgumentKind, KnowledgeBase

PAIR_LIMIT = 16


class TooManyPairsError(Exception):
    """The knowledge base is too large for exhaustive evaluation."""


class Evaluator:
    """Per-KB reference evaluator with its own relation tables."""

    def __init__(self, kb: KnowledgeBase):
        if len(kb.dimensions) > PAIR_LIMIT:
            raise TooManyPairsError(
                f"{len(kb.dimensions)} status dimensions exceeds the limit of {PAIR_LIMIT}"
            )
        self._replies = [a.id for a in kb.arguments.values() if a.kind is ArgumentKind.REPLY]
        self._priority = list(kb.reply_priority)
        self._attacked_by: dict[str, list[str]] = {}
        self._attacks_of: dict[str, list[str]] = {}
        for source, target in sorted(kb.attacks):
            self._attacked_by.setdefault(target, []).append(source)
            self._attacks_of.setdefault(source, []).append(target)
        self._endorsed_by: dict[str, list[str]] = {}
        for source, target in sorted(kb.endorsements):
            self._endorsed_by.setdefault(target, []).append(source)

    def reply_status(self, active: frozenset[str] | set[str], reply_id: str) -> ReplyStatus:
        """Classify one reply against an activation set by direct scan."""
        if reply_id not in self._replies:
            raise ValueError(f"{reply_id!r} is not a reply argument")
        attackers = self._attacked_by.get(reply_id, [])
        for attacker in attackers:
            if attacker in active:
                return ReplyStatus.DEFEATED
        for endorser in self._endorsed_by.get(reply_id, []):
            if endorser in active:
                break
        else:
            return ReplyStatus.UNSUPPORTED
        for attacker in attackers:
            countered = False
            for member in active:
                if attacker in self._attacks_of.get(member, []):
                    countered = True
                    break
            if not countered:
                return ReplyStatus.POTENTIALLY_CONSISTENT
        return ReplyStatus.CONSISTENT

    def strongest_consistent_reply(self, active: frozenset[str] | set[str]) -> str:
        """Highest-priority consistent reply, or the default when none is."""
        default = self._priority[-1]
        for reply_id in self._priority:
            if reply_id == default:
                continue
            if self.reply_status(active, reply_id) is ReplyStatus.CONSISTENT:
                return reply_id
        return default


def reply_status(kb: KnowledgeBase, active: frozenset[str] | set[str], reply_id: str) -> ReplyStatus:
    return Evaluator(kb).reply_status(active, reply_id)


def strongest_consistent_reply(kb: KnowledgeBase, active: frozenset[str] | set[str]) -> str:
    return Evaluator(kb).strongest_consistent_reply(active)
