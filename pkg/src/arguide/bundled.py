"""Loaders for the knowledge bases shipped with the package."""

from __future__ import annotations

from pathlib import Path

from .kb import KnowledgeBase, load_kb

DATA_DIR = Path(__file__).parent / "data"

EXCERPT_GRAPH = DATA_DIR / "excerpt.graph"
EXCERPT_PARAPHRASES = DATA_DIR / "excerpt_paraphrases.json"
CASE_STUDY_GRAPH = DATA_DIR / "case_study.graph"
CASE_STUDY_PARAPHRASES = DATA_DIR / "case_study_paraphrases.json"


def load_kb_files(graph_path: str | Path, paraphrases_path: str | Path | None = None) -> KnowledgeBase:
    """Load a knowledge base from paths; errors name the offending file."""
    graph_file = Path(graph_path)
    if not graph_file.is_file():
        raise FileNotFoundError(f"graph file not found: {graph_file}")
    graph_text = graph_file.read_text(encoding="utf-8")
    paraphrase_text = None
    if paraphrases_path is not None:
        paraphrase_file = Path(paraphrases_path)
        if not paraphrase_file.is_file():
            raise FileNotFoundError(f"paraphrase file not found: {paraphrase_file}")
        paraphrase_text = paraphrase_file.read_text(encoding="utf-8")
    return load_kb(graph_text, paraphrase_text)


def excerpt_kb() -> KnowledgeBase:
    """The small two-dimension knowledge base."""
    return load_kb_files(EXCERPT_GRAPH, EXCERPT_PARAPHRASES)


def case_study_kb() -> KnowledgeBase:
    """The 13-dimension intake case study."""
    return load_kb_files(CASE_STUDY_GRAPH, CASE_STUDY_PARAPHRASES)
