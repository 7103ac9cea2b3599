"""Reasoning over the argument graph.

The engine works on an immutable KnowledgeBase and a frozenset of active
status-argument ids (the facts asserted so far). Every function is pure.
The engine never sees user text; callers hand it argument ids only.

Classification of a reply r under activation set S:

  Defeated              some member of S attacks r
  Unsupported           otherwise, if no member of S endorses r
  Consistent            otherwise, if every attacker of r anywhere in the
                        KB is neutralized (attacked by a member of S)
  PotentiallyConsistent otherwise: endorsed, not attacked by S, but some
                        attack is not yet defended and later facts could
                        still overturn it
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .kb import ArgumentKind, KnowledgeBase


class ReplyStatus(Enum):
    CONSISTENT = "consistent"
    POTENTIALLY_CONSISTENT = "potentially_consistent"
    DEFEATED = "defeated"
    UNSUPPORTED = "unsupported"


class EngineError(Exception):
    """Base class for contract violations on engine calls."""


class UnknownIdError(EngineError):
    pass


class NotAStatusArgumentError(EngineError):
    pass


class NotAReplyArgumentError(EngineError):
    pass


class TargetNotPotentiallyConsistentError(EngineError):
    """Question selection was asked for a settled (consistent or defeated) reply."""


@dataclass(frozen=True)
class Contradiction:
    """Activation was refused: the opposite of `argument_id` is already active."""

    argument_id: str
    existing_id: str


def _status_arg(kb: KnowledgeBase, argument_id: str):
    arg = kb.arguments.get(argument_id)
    if arg is None:
        raise UnknownIdError(f"unknown argument {argument_id!r}")
    if arg.kind is not ArgumentKind.STATUS:
        raise NotAStatusArgumentError(f"{argument_id!r} is a reply argument")
    return arg


def _reply_arg(kb: KnowledgeBase, argument_id: str):
    arg = kb.arguments.get(argument_id)
    if arg is None:
        raise UnknownIdError(f"unknown argument {argument_id!r}")
    if arg.kind is not ArgumentKind.REPLY:
        raise NotAReplyArgumentError(f"{argument_id!r} is a status argument")
    return arg


def activate(kb: KnowledgeBase, active: frozenset[str], argument_id: str) -> frozenset[str] | Contradiction:
    """Add a fact to the activation set.

    Idempotent for facts already present. If the opposite fact is active
    the set is left untouched and a Contradiction is returned so the
    caller can ask the user which statement stands.
    """
    arg = _status_arg(kb, argument_id)
    if argument_id in active:
        return active
    if arg.opposite is not None and arg.opposite in active:
        return Contradiction(argument_id=argument_id, existing_id=arg.opposite)
    return active | {argument_id}


def is_neutralized(kb: KnowledgeBase, active: frozenset[str], attacker_id: str) -> bool:
    """True when some active fact attacks the attacker, disarming its attack."""
    if attacker_id not in kb.arguments:
        raise UnknownIdError(f"unknown argument {attacker_id!r}")
    return any(defender in active for defender in kb.attackers[attacker_id])


def classify_reply(kb: KnowledgeBase, active: frozenset[str], reply_id: str) -> ReplyStatus:
    """Classify one reply under the current activation set."""
    _reply_arg(kb, reply_id)
    attackers = kb.attackers[reply_id]
    if any(a in active for a in attackers):
        return ReplyStatus.DEFEATED
    if not any(e in active for e in kb.endorsers[reply_id]):
        return ReplyStatus.UNSUPPORTED
    if all(is_neutralized(kb, active, a) for a in attackers):
        return ReplyStatus.CONSISTENT
    return ReplyStatus.POTENTIALLY_CONSISTENT


def classify_all(kb: KnowledgeBase, active: frozenset[str]) -> dict[str, ReplyStatus]:
    return {r: classify_reply(kb, active, r) for r in kb.reply_ids()}


@dataclass(frozen=True)
class ReplyTarget:
    reply_id: str
    terminal: bool  # True: deliverable now; False: worth eliciting facts for


def select_reply_target(kb: KnowledgeBase, active: frozenset[str]) -> ReplyTarget | None:
    """Pick the reply the conversation should currently aim at.

    Highest-priority consistent reply first (terminal); otherwise the
    highest-priority potentially consistent one (needs elicitation);
    otherwise None. Exhaustion handling, including falling back to the
    default reply, belongs to the dialogue layer.
    """
    statuses = {r: classify_reply(kb, active, r) for r in kb.reply_priority}
    for reply_id in kb.reply_priority:
        if reply_id != kb.default_reply and statuses[reply_id] is ReplyStatus.CONSISTENT:
            return ReplyTarget(reply_id, terminal=True)
    for reply_id in kb.reply_priority:
        if reply_id != kb.default_reply and statuses[reply_id] is ReplyStatus.POTENTIALLY_CONSISTENT:
            return ReplyTarget(reply_id, terminal=False)
    return None


def unneutralized_attackers(kb: KnowledgeBase, active: frozenset[str], target_id: str) -> tuple[str, ...]:
    return tuple(a for a in kb.attackers[target_id] if not is_neutralized(kb, active, a))


def select_question(
    kb: KnowledgeBase,
    active: frozenset[str],
    asked: set[tuple[str, ...]],
    target_id: str,
) -> str | None:
    """Choose the next fact to ask about while pursuing `target_id`.

    Candidates are status arguments that are undecided (neither they nor
    their opposite is active), whose dimension has not been asked, and
    that either defend the target by attacking an undefended attacker or
    endorse it while it still lacks an active endorser. The candidate
    neutralizing the most remaining attacks wins; ties go to the smallest
    argument id. Returns None when nothing useful can be asked.
    """
    status = classify_reply(kb, active, target_id)
    if status in (ReplyStatus.CONSISTENT, ReplyStatus.DEFEATED):
        raise TargetNotPotentiallyConsistentError(
            f"reply {target_id!r} is already {status.value}; no question can change it"
        )
    open_attacks = unneutralized_attackers(kb, active, target_id)
    needs_endorser = status is ReplyStatus.UNSUPPORTED
    endorsers = set(kb.endorsers[target_id])

    best: str | None = None
    best_score = -1
    for candidate in sorted(kb.status_ids()):
        if candidate in active:
            continue
        arg = kb.arguments[candidate]
        if arg.opposite is not None and arg.opposite in active:
            continue
        if kb.dimension_of(candidate) in asked:
            continue
        covered = sum(1 for a in open_attacks if a in kb.attack_targets[candidate])
        if covered == 0 and not (needs_endorser and candidate in endorsers):
            continue
        if covered > best_score:
            best, best_score = candidate, covered
    return best


# -- explanations ---------------------------------------------------------


class WhyNotReason(Enum):
    ATTACKED_BY = "attacked_by"
    NO_ENDORSER_IN_S = "no_endorser_in_s"
    UNDEFENDED_ATTACK = "undefended_attack"
    LOWER_PRIORITY = "lower_priority"


@dataclass(frozen=True)
class WhyNot:
    reply_id: str
    reason: WhyNotReason
    argument_id: str | None = None  # the attacker, for the attack-based reasons

    def to_dict(self) -> dict:
        return {"reply": self.reply_id, "reason": self.reason.value, "argument": self.argument_id}


@dataclass(frozen=True)
class Explanation:
    """Why the chosen reply stands and why each alternative does not."""

    reply_id: str
    endorsers: tuple[str, ...]
    neutralizations: tuple[tuple[str, str], ...]  # (attacker, active defender)
    why_nots: tuple[WhyNot, ...]

    def to_dict(self) -> dict:
        return {
            "reply": self.reply_id,
            "endorsers": list(self.endorsers),
            "neutralizations": [{"attacker": a, "defender": d} for a, d in self.neutralizations],
            "why_nots": [w.to_dict() for w in self.why_nots],
        }


def _why_not(kb: KnowledgeBase, active: frozenset[str], reply_id: str) -> WhyNot:
    attackers_in_s = sorted(a for a in kb.attackers[reply_id] if a in active)
    if attackers_in_s:
        return WhyNot(reply_id, WhyNotReason.ATTACKED_BY, attackers_in_s[0])
    if reply_id != kb.default_reply and not any(e in active for e in kb.endorsers[reply_id]):
        return WhyNot(reply_id, WhyNotReason.NO_ENDORSER_IN_S)
    open_attacks = unneutralized_attackers(kb, active, reply_id)
    if open_attacks:
        return WhyNot(reply_id, WhyNotReason.UNDEFENDED_ATTACK, open_attacks[0])
    return WhyNot(reply_id, WhyNotReason.LOWER_PRIORITY)


def explain(kb: KnowledgeBase, active: frozenset[str], chosen_id: str) -> Explanation:
    """Build the delivery explanation for `chosen_id` under `active`."""
    _reply_arg(kb, chosen_id)
    endorsers = tuple(sorted(e for e in kb.endorsers[chosen_id] if e in active))
    neutralizations = []
    for attacker in kb.attackers[chosen_id]:
        defenders = sorted(d for d in kb.attackers[attacker] if d in active)
        if defenders:
            neutralizations.append((attacker, defenders[0]))
    why_nots = tuple(
        _why_not(kb, active, r) for r in kb.reply_priority if r != chosen_id
    )
    return Explanation(
        reply_id=chosen_id,
        endorsers=endorsers,
        neutralizations=tuple(neutralizations),
        why_nots=why_nots,
    )


# -- reachability ---------------------------------------------------------


def consistency_witness(kb: KnowledgeBase, reply_id: str) -> frozenset[str] | None:
    """Find an activation set under which `reply_id` is consistent, or None.

    Searches witness shape directly: one endorser plus one defender per
    attacker, keeping the set free of opposite pairs and of attackers of
    the reply itself. Complete because any consistent activation set
    contains such a witness.
    """
    _reply_arg(kb, reply_id)
    reply_attackers = kb.attackers[reply_id]
    forbidden = set(reply_attackers)

    def conflicts(candidate: str, chosen: set[str]) -> bool:
        opposite = kb.arguments[candidate].opposite
        return candidate in forbidden or (opposite is not None and opposite in chosen)

    def defend(chosen: set[str], remaining: tuple[str, ...]) -> frozenset[str] | None:
        if not remaining:
            return frozenset(chosen)
        attacker, rest = remaining[0], remaining[1:]
        if any(d in chosen for d in kb.attackers[attacker]):
            return defend(chosen, rest)
        for defender in kb.attackers[attacker]:
            if defender in chosen or conflicts(defender, chosen):
                continue
            chosen.add(defender)
            found = defend(chosen, rest)
            if found is not None:
                return found
            chosen.discard(defender)
        return None

    for endorser in kb.endorsers[reply_id]:
        if conflicts(endorser, set()):
            continue
        witness = defend({endorser}, reply_attackers)
        if witness is not None:
            return witness
    return None
