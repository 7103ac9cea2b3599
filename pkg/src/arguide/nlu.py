"""Natural-language understanding: mapping user text to argument ids.

Matching runs as a chain of three stages, cheapest first:

  1. direct    yes/no lexicon against the pending question
  2. similarity cosine over paraphrase embeddings with a fixed threshold
  3. fallback  an external completion-style client given the candidate list

Whatever matched, only an (argument id, polarity) pair travels onward;
raw text never crosses into the reasoning engine.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .kb import ArgumentKind, KnowledgeBase

DEFAULT_THRESHOLD = 0.75
DEFAULT_AFFIRMATIONS = ("yes", "yeah", "yep", "y", "sure", "correct", "right", "that is right", "true")
DEFAULT_NEGATIONS = ("no", "nope", "n", "not really", "incorrect", "wrong", "false")

_TOKEN_RE = re.compile(r"[a-z0-9]+")


class Polarity(Enum):
    AFFIRM = "affirm"
    NEGATE = "negate"


class MatchMethod(Enum):
    DIRECT = "direct"
    SIMILARITY = "similarity"
    FALLBACK = "fallback"


@dataclass(frozen=True)
class Match:
    argument_id: str
    polarity: Polarity
    method: MatchMethod
    score: float | None = None

    def to_dict(self) -> dict:
        return {
            "argument_id": self.argument_id,
            "polarity": self.polarity.value,
            "method": self.method.value,
            "score": self.score,
        }


class EncoderFailure(Exception):
    """The embedding backend could not produce a vector."""


class ClientUnavailable(Exception):
    """The fallback backend could not be reached; treated as no match."""


def normalize_text(text: str) -> str:
    """Lowercase, strip punctuation, collapse whitespace."""
    lowered = text.lower()
    cleaned = re.sub(r"[^a-z0-9\s]", " ", lowered)
    return " ".join(cleaned.split())


def tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


# -- stage 1: direct ------------------------------------------------------


def direct_match(
    text: str,
    pending_question_id: str | None,
    affirmations: tuple[str, ...] = DEFAULT_AFFIRMATIONS,
    negations: tuple[str, ...] = DEFAULT_NEGATIONS,
) -> Match | None:
    """Resolve plain yes/no answers against the question on the table.

    Without a pending question there is nothing a bare yes/no could mean,
    so the stage stays silent. This is the only stage that can produce a
    negating polarity.
    """
    if pending_question_id is None:
        return None
    normalized = normalize_text(text)
    if normalized in affirmations:
        return Match(pending_question_id, Polarity.AFFIRM, MatchMethod.DIRECT)
    if normalized in negations:
        return Match(pending_question_id, Polarity.NEGATE, MatchMethod.DIRECT)
    return None


# -- stage 2: similarity ---------------------------------------------------


class HashingEncoder:
    """Deterministic token-hashing sentence encoder.

    Each token is hashed (sha256) to a signed coordinate of a fixed-size
    vector; the sum is L2-normalized. No model weights, no randomness:
    identical text encodes identically on every platform and run. The
    empty string encodes to the zero vector.
    """

    def __init__(self, dimension: int = 256):
        self.dimension = dimension

    def encode(self, text: str) -> np.ndarray:
        vector = np.zeros(self.dimension, dtype=np.float64)
        for token in tokenize(text):
            digest = hashlib.sha256(token.encode("utf-8")).digest()
            index = int.from_bytes(digest[:4], "big") % self.dimension
            sign = 1.0 if digest[4] & 1 else -1.0
            vector[index] += sign
        norm = float(np.linalg.norm(vector))
        if norm > 0.0:
            vector /= norm
        return vector


class RemoteEncoder:
    """Embedding via an HTTP endpoint: POST {text} -> {vector}."""

    def __init__(self, url: str, dimension: int = 256, timeout: float = 10.0, client=None):
        import httpx

        self.url = url
        self.dimension = dimension
        self._client = client or httpx.Client(timeout=timeout)

    def encode(self, text: str) -> np.ndarray:
        import httpx

        try:
            response = self._client.post(self.url, json={"text": text})
            response.raise_for_status()
            payload = response.json()
        except (httpx.HTTPError, ValueError) as exc:
            raise EncoderFailure(f"remote encoder at {self.url} failed: {exc}") from exc
        vector = np.asarray(payload.get("vector", ()), dtype=np.float64)
        if vector.ndim != 1 or vector.size == 0:
            raise EncoderFailure(f"remote encoder at {self.url} returned no vector")
        norm = float(np.linalg.norm(vector))
        return vector / norm if norm > 0.0 else vector


class ParaphraseIndex:
    """Pre-encoded paraphrase vectors for every status argument."""

    def __init__(self, kb: KnowledgeBase, encoder):
        self.encoder = encoder
        self._owners: list[str] = []
        rows: list[np.ndarray] = []
        for arg in kb.arguments.values():
            if arg.kind is not ArgumentKind.STATUS:
                continue
            for sentence in kb.paraphrases.get(arg.id, ()):
                self._owners.append(arg.id)
                rows.append(encoder.encode(sentence))
        self._matrix = np.vstack(rows) if rows else np.zeros((0, encoder.dimension))

    def best_match(self, text: str) -> tuple[str, float] | None:
        """Highest-scoring status argument for the text, ties broken by
        ascending argument id. None when the index is empty."""
        if not self._owners:
            return None
        vector = self.encoder.encode(text)
        scores = self._matrix @ vector
        best_id: str | None = None
        best_score = -np.inf
        for owner, score in zip(self._owners, scores):
            if score > best_score or (score == best_score and best_id is not None and owner < best_id):
                best_id, best_score = owner, score
        return best_id, float(np.clip(best_score, 0.0, 1.0))


def similarity_match(text: str, index: ParaphraseIndex, threshold: float = DEFAULT_THRESHOLD) -> Match | None:
    """Match the text to the closest paraphrased node, if close enough."""
    best = index.best_match(text)
    if best is None:
        return None
    argument_id, score = best
    if score >= threshold:
        return Match(argument_id, Polarity.AFFIRM, MatchMethod.SIMILARITY, score)
    return None


# -- stage 3: fallback ------------------------------------------------------


def build_fallback_prompt(text: str, candidates: dict[str, str]) -> str:
    lines = [
        "A user said something during an intake conversation.",
        "Pick the single fact below that their statement asserts.",
        "Facts:",
    ]
    for candidate_id, description in candidates.items():
        lines.append(f"  {candidate_id}: {description}")
    lines.append(f"Statement: {text}")
    lines.append("Answer with exactly one fact id from the list, or NONE.")
    return "\n".join(lines)


def parse_fallback_response(response: str, candidates: set[str]) -> str | None:
    """Extract a single candidate id from a free-form response."""
    stripped = response.strip()
    if stripped in candidates:
        return stripped
    if stripped.upper() == "NONE":
        return None
    found = {t for t in re.findall(r"[A-Za-z0-9_-]+", stripped) if t in candidates}
    if len(found) == 1:
        return found.pop()
    return None


class StubFallbackClient:
    """Offline stand-in for a completion backend.

    Matches by explicit keyword rules first, then by token overlap with
    the candidate descriptions. Deterministic, so simulations and tests
    can run without any network.
    """

    def __init__(self, rules: dict[str, str] | None = None, min_overlap: int = 2):
        self.rules = dict(rules or {})
        self.min_overlap = min_overlap

    def resolve(self, text: str, candidates: dict[str, str]) -> str | None:
        tokens = set(tokenize(text))
        for keyword in sorted(self.rules):
            if keyword.lower() in tokens and self.rules[keyword] in candidates:
                return self.rules[keyword]
        best: str | None = None
        best_overlap = self.min_overlap - 1
        tie = False
        for candidate_id in sorted(candidates):
            overlap = len(tokens & set(tokenize(candidates[candidate_id])))
            if overlap > best_overlap:
                best, best_overlap, tie = candidate_id, overlap, False
            elif overlap == best_overlap and best is not None:
                tie = True
        return None if tie else best


class RemoteFallbackClient:
    """Completion over HTTP: POST {prompt} -> {text}."""

    def __init__(self, url: str, timeout: float = 10.0, client=None):
        import httpx

        self.url = url
        self._client = client or httpx.Client(timeout=timeout)

    def resolve(self, text: str, candidates: dict[str, str]) -> str | None:
        import httpx

        prompt = build_fallback_prompt(text, candidates)
        try:
            response = self._client.post(self.url, json={"prompt": prompt})
            response.raise_for_status()
            payload = response.json()
        except (httpx.HTTPError, ValueError) as exc:
            raise ClientUnavailable(f"fallback client at {self.url} failed: {exc}") from exc
        return parse_fallback_response(str(payload.get("text", "")), set(candidates))


def fallback_match(text: str, kb: KnowledgeBase, client) -> Match | None:
    """Query the fallback client and validate its answer.

    Ids outside the candidate list are discarded rather than trusted, and
    an unreachable client counts as no match.
    """
    if client is None:
        return None
    candidates = {
        a.id: a.description for a in kb.arguments.values() if a.kind is ArgumentKind.STATUS
    }
    try:
        answer = client.resolve(text, candidates)
    except ClientUnavailable:
        return None
    if answer is None or answer not in candidates:
        return None
    return Match(answer, Polarity.AFFIRM, MatchMethod.FALLBACK)


# -- the chain --------------------------------------------------------------


class Matcher:
    """The full three-stage matching chain for one knowledge base."""

    def __init__(
        self,
        kb: KnowledgeBase,
        encoder=None,
        fallback_client=None,
        threshold: float = DEFAULT_THRESHOLD,
        affirmations: tuple[str, ...] = DEFAULT_AFFIRMATIONS,
        negations: tuple[str, ...] = DEFAULT_NEGATIONS,
    ):
        self.kb = kb
        self.encoder = encoder or HashingEncoder()
        self.fallback_client = fallback_client
        self.threshold = threshold
        self.affirmations = affirmations
        self.negations = negations
        self.index = ParaphraseIndex(kb, self.encoder)

    def match(self, text: str, pending_question_id: str | None = None) -> Match | None:
        """Run the chain; None means the dialogue should ask the user to rephrase."""
        result = direct_match(text, pending_question_id, self.affirmations, self.negations)
        if result is not None:
            return result
        try:
            result = similarity_match(text, self.index, self.threshold)
        except EncoderFailure:
            if self.fallback_client is None:
                raise
            result = None
        if result is not None:
            return result
        return fallback_match(text, self.kb, self.fallback_client)
