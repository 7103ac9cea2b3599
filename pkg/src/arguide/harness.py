"""Simulation harness: seeded personas played against the dialogue.

A profile fixes one polarity per status dimension. The persona opens by
volunteering one paraphrase of a fact it holds, then answers every
question truthfully with yes or no. Each finished dialogue is compared
against the brute-force oracle's verdict on the full profile.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass

from . import oracle
from .dialogue import DialogueConfig, OutcomeKind, SessionManager, TurnOutcome
from .kb import KnowledgeBase
from .nlu import HashingEncoder
from .oracle import TooManyPairsError


@dataclass(frozen=True)
class Profile:
    """One polarity per status dimension. Positive activates the primary
    (first-declared) member, negative the opposite member; negative on an
    unpaired dimension activates nothing."""

    seed: int
    assignment: tuple[tuple[tuple[str, ...], bool], ...]  # (dimension, positive?)

    def active_nodes(self, kb: KnowledgeBase) -> frozenset[str]:
        chosen: set[str] = set()
        for dimension, positive in self.assignment:
            if positive:
                chosen.add(dimension[0])
            elif len(dimension) == 2:
                chosen.add(dimension[1])
        return frozenset(chosen)

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "assignment": {"/".join(dim): positive for dim, positive in self.assignment},
        }


def generate_profile(kb: KnowledgeBase, seed: int) -> Profile:
    """Deterministic uniform profile: same (kb, seed), same assignment."""
    rng = random.Random(seed)
    assignment = tuple((dim, rng.random() < 0.5) for dim in kb.dimensions)
    return Profile(seed=seed, assignment=assignment)


def exhaustive_profiles(kb: KnowledgeBase) -> list[Profile]:
    """Every full assignment over the KB's dimensions."""
    dims = kb.dimensions
    profiles = []
    for index, bits in enumerate(itertools.product((True, False), repeat=len(dims))):
        profiles.append(Profile(seed=-(index + 1), assignment=tuple(zip(dims, bits))))
    return profiles


def persona_answer(kb: KnowledgeBase, profile: Profile, outcome: TurnOutcome) -> str:
    """What the simulated user says next, given the system's last move."""
    if outcome.kind is OutcomeKind.ASK_QUESTION:
        assert outcome.question_id is not None
        return "yes" if outcome.question_id in profile.active_nodes(kb) else "no"
    if outcome.kind is OutcomeKind.GREETING:
        rng = random.Random(f"opening:{profile.seed}")
        facts = [n for n in sorted(profile.active_nodes(kb)) if kb.paraphrases.get(n)]
        if not facts:
            fallback = sorted(profile.active_nodes(kb))
            return kb.arguments[fallback[0]].description if fallback else "hello"
        return kb.paraphrases[rng.choice(facts)][0]
    # clarification prompts: a truthful persona never contradicts itself,
    # so the safe scripted answer is to keep whatever came first
    return "no"


def oracle_reply(kb: KnowledgeBase, profile: Profile) -> str:
    """Reply the oracle picks with the whole profile on the table."""
    return oracle.strongest_consistent_reply(kb, profile.active_nodes(kb))


@dataclass(frozen=True)
class CaseResult:
    seed: int
    final_reply: str | None
    oracle_reply: str
    questions: int
    turns: int
    concluded: bool

    @property
    def agree(self) -> bool:
        return self.concluded and self.final_reply == self.oracle_reply

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "final_reply": self.final_reply,
            "oracle_reply": self.oracle_reply,
            "questions": self.questions,
            "turns": self.turns,
            "concluded": self.concluded,
            "agree": self.agree,
        }


@dataclass(frozen=True)
class SimulationReport:
    cases: tuple[CaseResult, ...]
    dimensions: int

    @property
    def agreement_rate(self) -> float:
        if not self.cases:
            return 1.0
        return sum(1 for c in self.cases if c.agree) / len(self.cases)

    @property
    def max_questions(self) -> int:
        return max((c.questions for c in self.cases), default=0)

    @property
    def all_terminated(self) -> bool:
        return all(c.concluded for c in self.cases)

    def to_dict(self) -> dict:
        return {
            "cases": [c.to_dict() for c in self.cases],
            "dimensions": self.dimensions,
            "agreement_rate": self.agreement_rate,
            "max_questions": self.max_questions,
            "all_terminated": self.all_terminated,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def run_case(manager: SessionManager, profile: Profile) -> CaseResult:
    """Play one persona against a live session until it concludes."""
    kb = manager.kb
    token, outcome = manager.start_session()
    questions = turns = 0
    # a truthful persona answers every question, so turns stay bounded;
    # the cap only exists to surface a non-terminating dialogue as a failure
    cap = 4 * len(kb.dimensions) + 8
    while outcome.kind is not OutcomeKind.FINAL_REPLY and turns < cap:
        answer = persona_answer(kb, profile, outcome)
        outcome = manager.handle_turn(token, answer)
        turns += 1
        if outcome.kind is OutcomeKind.ASK_QUESTION:
            questions += 1
    concluded = outcome.kind is OutcomeKind.FINAL_REPLY
    return CaseResult(
        seed=profile.seed,
        final_reply=outcome.reply_id if concluded else None,
        oracle_reply=oracle_reply(kb, profile),
        questions=questions,
        turns=turns,
        concluded=concluded,
    )


def run_suite(
    kb: KnowledgeBase,
    cases: int = 10,
    base_seed: int = 0,
    exhaustive: bool = False,
    config: DialogueConfig | None = None,
    encoder=None,
    fallback_client=None,
) -> SimulationReport:
    """Run seeded (or exhaustive) personas and compare each outcome with
    the oracle. Deterministic for a given (kb, cases, base_seed)."""
    if len(kb.dimensions) > oracle.PAIR_LIMIT:
        raise TooManyPairsError(
            f"{len(kb.dimensions)} dimensions exceeds the oracle limit of {oracle.PAIR_LIMIT}"
        )
    manager = SessionManager(
        kb,
        config=config,
        encoder=encoder if encoder is not None else HashingEncoder(),
        fallback_client=fallback_client,
    )
    if exhaustive:
        profiles = exhaustive_profiles(kb)
    else:
        profiles = [generate_profile(kb, base_seed + i) for i in range(cases)]
    results = tuple(run_case(manager, p) for p in profiles)
    return SimulationReport(cases=results, dimensions=len(kb.dimensions))
