"""Command-line entry points: serve, repl, lint, simulate."""

from __future__ import annotations

import json
import socket
import sys

import click

from .bundled import load_kb_files
from .dialogue import DialogueConfig, OutcomeKind, PanelState, SessionManager
from .harness import run_suite
from .kb import KbError, Severity, lint as lint_kb
from .nlu import DEFAULT_THRESHOLD
from .service import ServiceConfig, build_encoder, build_fallback, create_app_from_config


def kb_options(fn):
    fn = click.option("--kb", "kb_path", required=True, type=click.Path(), help="graph file")(fn)
    fn = click.option(
        "--paraphrases", "paraphrases_path", required=True, type=click.Path(), help="paraphrase JSON file"
    )(fn)
    return fn


def _load(kb_path: str, paraphrases_path: str):
    try:
        return load_kb_files(kb_path, paraphrases_path)
    except (KbError, FileNotFoundError, OSError) as exc:
        raise click.ClickException(str(exc))


@click.group()
def main():
    """Argumentation-guided dialogue over a knowledge base of facts and replies."""


@main.command()
@kb_options
@click.option("--threshold", default=DEFAULT_THRESHOLD, show_default=True, help="similarity threshold")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
@click.option("--encoder", default="builtin", show_default=True, help="builtin or remote=<url>")
@click.option("--fallback", default="disabled", show_default=True, help="disabled, stub or remote=<url>")
@click.option("--static-dir", default=None, type=click.Path(), help="directory with built UI assets")
def serve(kb_path, paraphrases_path, threshold, host, port, encoder, fallback, static_dir):
    """Run the HTTP service."""
    import uvicorn

    config = ServiceConfig(
        kb_path=kb_path,
        paraphrases_path=paraphrases_path,
        threshold=threshold,
        host=host,
        port=port,
        encoder_spec=encoder,
        fallback_spec=fallback,
        static_dir=static_dir,
    )
    try:
        app = create_app_from_config(config)
    except (KbError, FileNotFoundError, ValueError) as exc:
        raise click.ClickException(str(exc))
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.bind((host, port))
    except OSError as exc:
        raise click.ClickException(f"BindFailure: cannot listen on {host}:{port} ({exc})")
    finally:
        probe.close()
    uvicorn.run(app, host=host, port=port, log_level="info")


def _panel_delta(before, after) -> list[str]:
    previous = {e.argument_id: e.state for e in before} if before else {}
    lines = []
    for entry in after:
        if previous.get(entry.argument_id, PanelState.UNKNOWN) is entry.state:
            continue
        if entry.state is PanelState.ACTIVE:
            lines.append(f"  [+] {entry.argument_id}: {entry.description}")
        elif entry.state is PanelState.EXCLUDED:
            lines.append(f"  [x] {entry.argument_id}: ruled out")
    return lines


def _print_explanation(explanation, verbose: bool) -> None:
    if explanation.endorsers:
        click.echo("supported by: " + ", ".join(explanation.endorsers))
    for attacker, defender in explanation.neutralizations:
        click.echo(f"attack from {attacker} neutralized by {defender}")
    if verbose:
        for why in explanation.why_nots:
            detail = f" ({why.argument_id})" if why.argument_id else ""
            click.echo(f"not {why.reply_id}: {why.reason.value}{detail}")


@main.command()
@kb_options
@click.option("--threshold", default=DEFAULT_THRESHOLD, show_default=True)
@click.option("--encoder", default="builtin", show_default=True)
@click.option("--fallback", default="disabled", show_default=True)
@click.option("--explain-verbose", is_flag=True, help="also print why the other replies lost")
def repl(kb_path, paraphrases_path, threshold, encoder, fallback, explain_verbose):
    """Chat on stdin/stdout; exits when the dialogue concludes."""
    kb = _load(kb_path, paraphrases_path)
    try:
        manager = SessionManager(
            kb,
            config=DialogueConfig(threshold=threshold),
            encoder=build_encoder(encoder),
            fallback_client=build_fallback(fallback),
        )
    except Exception as exc:
        raise click.ClickException(str(exc))
    token, outcome = manager.start_session()
    click.echo(outcome.text)
    previous_panel = outcome.status_panel
    for line in sys.stdin:
        text = line.strip()
        if not text:
            continue
        outcome = manager.handle_turn(token, text)
        for delta in _panel_delta(previous_panel, outcome.status_panel):
            click.echo(delta)
        previous_panel = outcome.status_panel
        click.echo(outcome.text)
        if outcome.kind is OutcomeKind.FINAL_REPLY:
            _print_explanation(outcome.explanation, explain_verbose)
            break


@main.command("lint")
@kb_options
def lint_command(kb_path, paraphrases_path):
    """Check a knowledge base; exit nonzero on error findings."""
    kb = _load(kb_path, paraphrases_path)
    findings = lint_kb(kb)
    for finding in findings:
        subjects = f" [{', '.join(finding.subjects)}]" if finding.subjects else ""
        click.echo(f"{finding.severity.value}: {finding.code.value}{subjects}: {finding.message}")
    errors = sum(1 for f in findings if f.severity is Severity.ERROR)
    click.echo(f"{len(findings)} finding(s), {errors} error(s)")
    if errors:
        sys.exit(1)


@main.command()
@kb_options
@click.option("--cases", default=10, show_default=True, help="number of seeded personas")
@click.option("--seed", default=0, show_default=True, help="base seed")
@click.option("--exhaustive", is_flag=True, help="run every full profile instead of seeded ones")
@click.option("--encoder", default="builtin", show_default=True, help="builtin or remote=<url>")
@click.option("--fallback", default="stub", show_default=True, help="disabled, stub or remote=<url>")
@click.option("--json", "json_path", default=None, type=click.Path(), help="write the report as JSON")
def simulate(kb_path, paraphrases_path, cases, seed, exhaustive, encoder, fallback, json_path):
    """Play seeded personas against the dialogue and compare with the oracle."""
    kb = _load(kb_path, paraphrases_path)
    try:
        report = run_suite(
            kb,
            cases=cases,
            base_seed=seed,
            exhaustive=exhaustive,
            encoder=build_encoder(encoder),
            fallback_client=build_fallback(fallback),
        )
    except Exception as exc:
        raise click.ClickException(str(exc))
    click.echo(f"{'seed':>8}  {'questions':>9}  {'dialogue':<20} {'oracle':<20} agree")
    for case in report.cases:
        click.echo(
            f"{case.seed:>8}  {case.questions:>9}  {case.final_reply or '-':<20} "
            f"{case.oracle_reply:<20} {'yes' if case.agree else 'NO'}"
        )
    click.echo(
        f"agreement {report.agreement_rate:.0%} over {len(report.cases)} case(s), "
        f"max questions {report.max_questions} (dimensions: {report.dimensions})"
    )
    if json_path:
        with open(json_path, "w", encoding="utf-8") as fh:
            fh.write(report.to_json())
    if report.agreement_rate < 1.0 or not report.all_terminated:
        sys.exit(1)


if __name__ == "__main__":
    main()
