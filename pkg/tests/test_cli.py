"""Command-line interface tests via click's test runner."""

import json
import socket
from pathlib import Path

import pytest
from click.testing import CliRunner

from arguide.bundled import DATA_DIR
from arguide.cli import main

EXCERPT = [
    "--kb", str(DATA_DIR / "excerpt.graph"),
    "--paraphrases", str(DATA_DIR / "excerpt_paraphrases.json"),
]
CASE_STUDY = [
    "--kb", str(DATA_DIR / "case_study.graph"),
    "--paraphrases", str(DATA_DIR / "case_study_paraphrases.json"),
]


@pytest.fixture()
def runner():
    return CliRunner()


def test_help_lists_commands(runner):
    result = runner.invoke(main, ["--help"])
    assert result.exit_code == 0
    for command in ("serve", "repl", "lint", "simulate"):
        assert command in result.output


# ---------------------------------------------------------------------------
# lint


def test_lint_clean_kb_exits_zero(runner):
    result = runner.invoke(main, ["lint", *EXCERPT])
    assert result.exit_code == 0
    assert "0 error(s)" in result.output


def test_lint_broken_kb_exits_nonzero(runner, tmp_path):
    fixture = Path(__file__).parent / "data" / "lint" / "endorserless_reply.graph"
    paraphrases = tmp_path / "p.json"
    paraphrases.write_text(json.dumps({"a": ["it holds"], "b": ["it does not"]}))
    result = runner.invoke(main, ["lint", "--kb", str(fixture), "--paraphrases", str(paraphrases)])
    assert result.exit_code == 1
    assert "NoEndorser" in result.output
    assert "r2" in result.output


def test_lint_parse_error_names_the_problem(runner, tmp_path):
    fixture = Path(__file__).parent / "data" / "lint" / "dangling_attack.graph"
    paraphrases = tmp_path / "p.json"
    paraphrases.write_text("{}")
    result = runner.invoke(main, ["lint", "--kb", str(fixture), "--paraphrases", str(paraphrases)])
    assert result.exit_code != 0
    assert "UnknownId" in result.output


def test_missing_kb_file_names_the_path(runner, tmp_path):
    missing = tmp_path / "nowhere.graph"
    paraphrases = tmp_path / "p.json"
    paraphrases.write_text("{}")
    result = runner.invoke(
        main, ["lint", "--kb", str(missing), "--paraphrases", str(paraphrases)]
    )
    assert result.exit_code != 0
    assert str(missing) in result.output


# ---------------------------------------------------------------------------
# simulate


def test_simulate_excerpt_exhaustive(runner):
    result = runner.invoke(main, ["simulate", *EXCERPT, "--exhaustive"])
    assert result.exit_code == 0
    assert "agreement 100%" in result.output
    assert "4 case(s)" in result.output


def test_simulate_case_study_ten_cases(runner):
    result = runner.invoke(main, ["simulate", *CASE_STUDY, "--cases", "10"])
    assert result.exit_code == 0
    assert "agreement 100% over 10 case(s)" in result.output


def test_simulate_is_deterministic_per_seed(runner):
    first = runner.invoke(main, ["simulate", *CASE_STUDY, "--cases", "5", "--seed", "3"])
    second = runner.invoke(main, ["simulate", *CASE_STUDY, "--cases", "5", "--seed", "3"])
    assert first.output == second.output
    shifted = runner.invoke(main, ["simulate", *CASE_STUDY, "--cases", "5", "--seed", "4"])
    assert shifted.output != first.output


def test_simulate_writes_json_report(runner, tmp_path):
    report_path = tmp_path / "report.json"
    result = runner.invoke(
        main, ["simulate", *EXCERPT, "--cases", "3", "--json", str(report_path)]
    )
    assert result.exit_code == 0
    payload = json.loads(report_path.read_text())
    assert payload["agreement_rate"] == 1.0
    assert len(payload["cases"]) == 3


def test_simulate_rejects_bad_encoder_spec(runner):
    result = runner.invoke(main, ["simulate", *EXCERPT, "--encoder", "nonsense"])
    assert result.exit_code != 0


# ---------------------------------------------------------------------------
# repl


def test_repl_happy_path(runner):
    result = runner.invoke(main, ["repl", *EXCERPT], input="I am a woman\nyes\n")
    assert result.exit_code == 0
    assert "Do you come from Nigeria?" in result.output
    assert "protection P1, intended for women" in result.output
    assert "supported by: woman" in result.output
    assert "attack from others neutralized by Nigeria" in result.output


def test_repl_panel_deltas(runner):
    result = runner.invoke(main, ["repl", *EXCERPT], input="I am a woman\nyes\n")
    assert "[+] woman" in result.output
    assert "[x] man" in result.output


def test_repl_verbose_explains_the_losers(runner):
    result = runner.invoke(
        main, ["repl", *EXCERPT, "--explain-verbose"], input="I am a woman\nyes\n"
    )
    assert result.exit_code == 0
    assert "not P2: attacked_by (woman)" in result.output
    assert "not NONE: lower_priority" in result.output


def test_repl_survives_unmatched_input(runner):
    result = runner.invoke(main, ["repl", *EXCERPT], input="qwxzy\nI am a woman\nyes\n")
    assert result.exit_code == 0
    assert "could not relate" in result.output.lower()


# ---------------------------------------------------------------------------
# serve


def test_serve_reports_bind_failure(runner):
    blocker = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    blocker.bind(("127.0.0.1", 0))
    port = blocker.getsockname()[1]
    try:
        result = runner.invoke(main, ["serve", *EXCERPT, "--port", str(port)])
        assert result.exit_code != 0
        assert "BindFailure" in result.output
        assert str(port) in result.output
    finally:
        blocker.close()


def test_serve_rejects_missing_kb(runner, tmp_path):
    missing = tmp_path / "gone.graph"
    paraphrases = tmp_path / "p.json"
    paraphrases.write_text("{}")
    result = runner.invoke(
        main, ["serve", "--kb", str(missing), "--paraphrases", str(paraphrases)]
    )
    assert result.exit_code != 0
    assert str(missing) in result.output
