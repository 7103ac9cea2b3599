"""arguide: argumentation-guided dialogue toward the strongest defensible reply."""

from .engine import (
    Contradiction,
    Explanation,
    ReplyStatus,
    activate,
    classify_reply,
    explain,
    is_neutralized,
    select_question,
    select_reply_target,
)
from .kb import Argument, ArgumentKind, KnowledgeBase, lint, load_kb, parse_graph, serialize_graph
from .dialogue import DialogueConfig, OutcomeKind, Phase, SessionManager

__version__ = "0.1.0"

__all__ = [
    "Argument",
    "ArgumentKind",
    "Contradiction",
    "DialogueConfig",
    "Explanation",
    "KnowledgeBase",
    "OutcomeKind",
    "Phase",
    "ReplyStatus",
    "SessionManager",
    "activate",
    "classify_reply",
    "explain",
    "is_neutralized",
    "lint",
    "load_kb",
    "parse_graph",
    "select_question",
    "select_reply_target",
    "serialize_graph",
    "__version__",
]
