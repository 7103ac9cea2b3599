"""Dialogue management: sessions, turns, and conversation state.

A session holds the activation set built from one user's statements. Each
user turn is matched to an argument id, activated (or challenged when it
contradicts an earlier fact), and followed by the next engine-chosen
question or a final reply. The dialogue walks the reply priority list
top-down: it settles stronger replies before ever concluding with a
weaker one, and it only delivers a non-default reply once the engine
classifies it consistent.
"""

from __future__ import annotations

import itertools
import json
import logging
import threading
import uuid
from dataclasses import dataclass, field
from enum import Enum
from typing import Protocol

from . import engine, nlu
from .engine import Contradiction, Explanation, ReplyStatus
from .kb import ArgumentKind, KnowledgeBase, lint_errors
from .nlu import Match, Matcher, Polarity

log = logging.getLogger("arguide.dialogue")


class Phase(Enum):
    COLLECTING = "collecting"
    CLARIFYING = "clarifying"
    CONCLUDED = "concluded"


class PanelState(Enum):
    ACTIVE = "active"
    EXCLUDED = "excluded"
    UNKNOWN = "unknown"


class OutcomeKind(Enum):
    GREETING = "greeting"
    ASK_QUESTION = "ask_question"
    ASK_CLARIFICATION = "ask_clarification"
    FINAL_REPLY = "final_reply"
    ACKNOWLEDGED = "acknowledged"


class DialogueError(Exception):
    """Base class for dialogue-level failures."""


class KbNotValidError(DialogueError):
    pass


class SessionConcludedError(DialogueError):
    pass


class NotClarifyingError(DialogueError):
    pass


class UnknownSessionError(DialogueError):
    pass


@dataclass(frozen=True)
class PanelEntry:
    argument_id: str
    description: str
    state: PanelState

    def to_dict(self) -> dict:
        return {
            "argument_id": self.argument_id,
            "description": self.description,
            "state": self.state.value,
        }


@dataclass(frozen=True)
class TurnOutcome:
    """What the system says back after a turn, plus the fact panel."""

    kind: OutcomeKind
    text: str
    status_panel: tuple[PanelEntry, ...]
    phase: Phase
    question_id: str | None = None
    reply_id: str | None = None
    explanation: Explanation | None = None

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "text": self.text,
            "phase": self.phase.value,
            "question_id": self.question_id,
            "reply_id": self.reply_id,
            "explanation": self.explanation.to_dict() if self.explanation else None,
            "status_panel": [e.to_dict() for e in self.status_panel],
        }


@dataclass
class TurnRecord:
    ordinal: int
    role: str  # "user" or "system"
    text: str
    matched: Match | None = None
    outcome_kind: OutcomeKind | None = None

    def to_dict(self) -> dict:
        return {
            "ordinal": self.ordinal,
            "role": self.role,
            "text": self.text,
            "matched": self.matched.to_dict() if self.matched else None,
            "outcome_kind": self.outcome_kind.value if self.outcome_kind else None,
        }


@dataclass
class PendingContradiction:
    new_id: str
    existing_id: str
    reasks: int = 0


@dataclass(frozen=True)
class DialogueConfig:
    threshold: float = nlu.DEFAULT_THRESHOLD
    affirmations: tuple[str, ...] = nlu.DEFAULT_AFFIRMATIONS
    negations: tuple[str, ...] = nlu.DEFAULT_NEGATIONS
    greeting: str = (
        "Hello! Tell me about your situation and I will try to work out "
        "the strongest protection you could apply for."
    )
    clarify_text: str = "Sorry, I could not relate that to anything I know about. Could you rephrase?"
    contradiction_template: str = (
        'Earlier I understood "{existing}", but now I understood "{new}". '
        "Should I go with the new statement? (yes = update, no = keep the earlier one)"
    )
    question_template: str = "{description} - is that your situation? (yes/no)"
    max_reasks: int = 2


@dataclass
class SessionState:
    id: str
    kb: KnowledgeBase
    config: DialogueConfig
    active: frozenset[str] = frozenset()
    asked: set[tuple[str, ...]] = field(default_factory=set)
    pending_question: str | None = None
    pending_contradiction: PendingContradiction | None = None
    phase: Phase = Phase.COLLECTING
    transcript: list[TurnRecord] = field(default_factory=list)
    final_reply: str | None = None
    final_explanation: Explanation | None = None
    _ordinals: itertools.count = field(default_factory=itertools.count)

    def next_ordinal(self) -> int:
        return next(self._ordinals)


class SessionStore(Protocol):
    def put(self, token: str, session: SessionState) -> None: ...

    def get(self, token: str) -> SessionState | None: ...

    def delete(self, token: str) -> None: ...


class InMemorySessionStore:
    """Volatile in-process store; nothing survives a restart by design."""

    def __init__(self):
        self._sessions: dict[str, SessionState] = {}
        self._lock = threading.Lock()

    def put(self, token: str, session: SessionState) -> None:
        with self._lock:
            self._sessions[token] = session

    def get(self, token: str) -> SessionState | None:
        with self._lock:
            return self._sessions.get(token)

    def delete(self, token: str) -> None:
        with self._lock:
            self._sessions.pop(token, None)


def status_panel(kb: KnowledgeBase, active: frozenset[str]) -> tuple[PanelEntry, ...]:
    """Project the activation set onto every status argument, in
    declaration order: active, excluded (opposite active), or unknown."""
    entries = []
    for arg in kb.arguments.values():
        if arg.kind is not ArgumentKind.STATUS:
            continue
        if arg.id in active:
            state = PanelState.ACTIVE
        elif arg.opposite is not None and arg.opposite in active:
            state = PanelState.EXCLUDED
        else:
            state = PanelState.UNKNOWN
        entries.append(PanelEntry(arg.id, arg.description, state))
    return tuple(entries)


def question_text(kb: KnowledgeBase, argument_id: str, config: DialogueConfig) -> str:
    arg = kb.arguments[argument_id]
    if arg.question_text:
        return arg.question_text
    return config.question_template.format(description=arg.description)


class SessionManager:
    """Owns sessions over one shared knowledge base.

    Turn handling is serialized per session; the KB itself is immutable,
    so concurrent sessions never interfere.
    """

    def __init__(
        self,
        kb: KnowledgeBase,
        config: DialogueConfig | None = None,
        encoder=None,
        fallback_client=None,
        store: SessionStore | None = None,
    ):
        errors = lint_errors(kb)
        if errors:
            summary = "; ".join(f.message for f in errors[:5])
            raise KbNotValidError(f"knowledge base failed lint: {summary}")
        self.kb = kb
        self.config = config or DialogueConfig()
        self.matcher = Matcher(
            kb,
            encoder=encoder,
            fallback_client=fallback_client,
            threshold=self.config.threshold,
            affirmations=self.config.affirmations,
            negations=self.config.negations,
        )
        self.store: SessionStore = store if store is not None else InMemorySessionStore()
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    # -- session lifecycle ------------------------------------------------

    def start_session(self) -> tuple[str, TurnOutcome]:
        """Create a session and return its token with the opening prompt."""
        token = uuid.uuid4().hex
        session = SessionState(id=token, kb=self.kb, config=self.config)
        outcome = TurnOutcome(
            kind=OutcomeKind.GREETING,
            text=self.config.greeting,
            status_panel=status_panel(self.kb, session.active),
            phase=session.phase,
        )
        self._record_system(session, outcome)
        self.store.put(token, session)
        log.info("session %s started", token[:8])
        return token, outcome

    def _lock_for(self, token: str) -> threading.Lock:
        with self._locks_guard:
            return self._locks.setdefault(token, threading.Lock())

    def _session(self, token: str) -> SessionState:
        session = self.store.get(token)
        if session is None:
            raise UnknownSessionError(f"no session {token!r}")
        return session

    # -- turns --------------------------------------------------------------

    def handle_turn(self, token: str, text: str) -> TurnOutcome:
        """Process one user message and return the system's next move."""
        with self._lock_for(token):
            session = self._session(token)
            if session.phase is Phase.CONCLUDED:
                raise SessionConcludedError(f"session {token!r} already concluded")
            if session.phase is Phase.CLARIFYING:
                outcome = self._resolve_clarification_locked(session, text)
                self.store.put(token, session)
                return outcome
            outcome = self._collect_turn(session, text)
            self.store.put(token, session)
            return outcome

    def resolve_clarification(self, token: str, text: str) -> TurnOutcome:
        """Answer a pending contradiction prompt."""
        with self._lock_for(token):
            session = self._session(token)
            if session.phase is Phase.CONCLUDED:
                raise SessionConcludedError(f"session {token!r} already concluded")
            if session.phase is not Phase.CLARIFYING:
                raise NotClarifyingError(f"session {token!r} has no contradiction to clarify")
            outcome = self._resolve_clarification_locked(session, text)
            self.store.put(token, session)
            return outcome

    def _collect_turn(self, session: SessionState, text: str) -> TurnOutcome:
        match = self.matcher.match(text, pending_question_id=session.pending_question)
        session.transcript.append(
            TurnRecord(session.next_ordinal(), "user", text, matched=match)
        )
        log.info(
            "session %s: user turn matched %s",
            session.id[:8],
            f"{match.argument_id}/{match.polarity.value} via {match.method.value}" if match else "nothing",
        )
        if match is None:
            return self._emit(
                session,
                TurnOutcome(
                    kind=OutcomeKind.ASK_CLARIFICATION,
                    text=session.config.clarify_text,
                    status_panel=status_panel(self.kb, session.active),
                    phase=session.phase,
                ),
            )

        node = match.argument_id
        if match.polarity is Polarity.NEGATE:
            opposite = self.kb.arguments[node].opposite
            if opposite is None:
                # Denying an unpaired fact asserts nothing; just retire the question.
                session.asked.add(self.kb.dimension_of(node))
                if session.pending_question == node:
                    session.pending_question = None
                return self._advance(session)
            node = opposite

        result = engine.activate(self.kb, session.active, node)
        if isinstance(result, Contradiction):
            session.phase = Phase.CLARIFYING
            session.pending_contradiction = PendingContradiction(
                new_id=result.argument_id, existing_id=result.existing_id
            )
            return self._emit(session, self._contradiction_outcome(session))

        session.active = result
        if session.pending_question is not None:
            if self.kb.dimension_of(node) == self.kb.dimension_of(session.pending_question):
                session.pending_question = None
        return self._advance(session)

    def _resolve_clarification_locked(self, session: SessionState, text: str) -> TurnOutcome:
        pending = session.pending_contradiction
        assert pending is not None
        session.transcript.append(TurnRecord(session.next_ordinal(), "user", text))
        normalized = nlu.normalize_text(text)
        if normalized in session.config.affirmations:
            session.active = (session.active - {pending.existing_id}) | {pending.new_id}
            log.info("session %s: contradiction resolved by replacement", session.id[:8])
        elif normalized in session.config.negations:
            log.info("session %s: contradiction resolved by keeping the earlier fact", session.id[:8])
        else:
            pending.reasks += 1
            if pending.reasks <= session.config.max_reasks:
                return self._emit(session, self._contradiction_outcome(session))
            log.info("session %s: contradiction unresolved, keeping the earlier fact", session.id[:8])
        session.pending_contradiction = None
        session.phase = Phase.COLLECTING
        return self._advance(session)

    def _contradiction_outcome(self, session: SessionState) -> TurnOutcome:
        pending = session.pending_contradiction
        assert pending is not None
        text = session.config.contradiction_template.format(
            existing=self.kb.arguments[pending.existing_id].description,
            new=self.kb.arguments[pending.new_id].description,
        )
        return TurnOutcome(
            kind=OutcomeKind.ASK_CLARIFICATION,
            text=text,
            status_panel=status_panel(self.kb, session.active),
            phase=session.phase,
        )

    # -- the elicitation loop ------------------------------------------------

    def _advance(self, session: SessionState) -> TurnOutcome:
        """Walk the reply priority list and produce the next move.

        Stronger replies are settled first: a consistent one is delivered,
        a defeated one is skipped, and an open one (potentially consistent
        or merely unendorsed) triggers the best available question. Only
        when every reply is settled or out of questions does the default
        reply conclude the session.
        """
        kb = self.kb
        for reply_id in kb.reply_priority:
            if reply_id == kb.default_reply:
                continue
            status = engine.classify_reply(kb, session.active, reply_id)
            if status is ReplyStatus.CONSISTENT:
                return self._conclude(session, reply_id)
            if status is ReplyStatus.DEFEATED:
                continue
            pending = session.pending_question
            if (
                pending is not None
                and self._undecided(session, pending)
                and self._useful_for(session, pending, reply_id, status)
            ):
                return self._ask(session, pending, mark=False)
            question = engine.select_question(kb, session.active, session.asked, reply_id)
            if question is not None:
                return self._ask(session, question, mark=True)
        return self._conclude(session, kb.default_reply)

    def _undecided(self, session: SessionState, argument_id: str) -> bool:
        if argument_id in session.active:
            return False
        opposite = self.kb.arguments[argument_id].opposite
        return opposite is None or opposite not in session.active

    def _useful_for(
        self, session: SessionState, candidate: str, target_id: str, target_status: ReplyStatus
    ) -> bool:
        """Would asking `candidate` still help `target_id`? Mirrors the
        engine's candidate rule so an unanswered question survives a
        volunteered-fact turn instead of burning a second dimension."""
        kb = self.kb
        open_attacks = engine.unneutralized_attackers(kb, session.active, target_id)
        if any(a in kb.attack_targets[candidate] for a in open_attacks):
            return True
        return target_status is ReplyStatus.UNSUPPORTED and target_id in kb.endorsers and candidate in kb.endorsers[target_id]

    def _ask(self, session: SessionState, argument_id: str, mark: bool) -> TurnOutcome:
        if mark:
            session.asked.add(self.kb.dimension_of(argument_id))
        session.pending_question = argument_id
        outcome = TurnOutcome(
            kind=OutcomeKind.ASK_QUESTION,
            text=question_text(self.kb, argument_id, session.config),
            status_panel=status_panel(self.kb, session.active),
            phase=session.phase,
            question_id=argument_id,
        )
        return self._emit(session, outcome)

    def _conclude(self, session: SessionState, reply_id: str) -> TurnOutcome:
        explanation = engine.explain(self.kb, session.active, reply_id)
        session.phase = Phase.CONCLUDED
        session.final_reply = reply_id
        session.final_explanation = explanation
        session.pending_question = None
        outcome = TurnOutcome(
            kind=OutcomeKind.FINAL_REPLY,
            text=self.kb.arguments[reply_id].description,
            status_panel=status_panel(self.kb, session.active),
            phase=session.phase,
            reply_id=reply_id,
            explanation=explanation,
        )
        log.info("session %s: concluded with %s", session.id[:8], reply_id)
        return self._emit(session, outcome)

    def _emit(self, session: SessionState, outcome: TurnOutcome) -> TurnOutcome:
        self._record_system(session, outcome)
        return outcome

    def _record_system(self, session: SessionState, outcome: TurnOutcome) -> None:
        session.transcript.append(
            TurnRecord(
                session.next_ordinal(), "system", outcome.text, outcome_kind=outcome.kind
            )
        )

    # -- inspection ------------------------------------------------------------

    def snapshot(self, token: str) -> dict:
        """Full externally visible session state; enough to rebuild a UI."""
        with self._lock_for(token):
            session = self._session(token)
            return {
                "session_id": session.id,
                "phase": session.phase.value,
                "status_panel": [e.to_dict() for e in status_panel(self.kb, session.active)],
                "pending_question": session.pending_question,
                "transcript": [t.to_dict() for t in session.transcript],
                "final_reply": session.final_reply,
                "explanation": session.final_explanation.to_dict() if session.final_explanation else None,
            }

    def export_transcript(self, token: str) -> str:
        """Transcript as JSON lines, one turn per line."""
        with self._lock_for(token):
            session = self._session(token)
            return "\n".join(json.dumps(t.to_dict()) for t in session.transcript)
