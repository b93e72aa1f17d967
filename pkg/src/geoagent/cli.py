"""Command-line entry points: ingest, repl, bench, serve."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .app import AppContext
from .bench import (
    load_suite,
    render_report_markdown,
    replays_path,
    run_suite,
)
from .config import load_config
from .gateway import GatewayError


@click.group()
def main():
    """Agentic NL-to-SQL assistant for spatio-temporal check-in data."""


def _context(config_path: str | None) -> AppContext:
    return AppContext(load_config(config_path))


@main.command()
@click.argument("tsv", type=click.Path(exists=True))
@click.option("--table", required=True, help="target table, e.g. checkins_nyc")
@click.option("--limit", type=int, default=None, help="max rows to ingest")
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
def ingest(tsv, table, limit, config_path):
    """Load a check-in TSV into the store, replacing the table's contents."""
    ctx = _context(config_path)
    try:
        inserted = ctx.store.ingest_checkins(tsv, table, limit=limit)
    finally:
        stats = ctx.store.last_ingest
        ctx.close()
    click.echo(
        f"ingested {inserted} rows into {table}"
        + (
            f" (skipped {stats.skipped_invalid} invalid, {stats.unparseable} unparseable)"
            if stats
            else ""
        )
    )


@main.command()
@click.option("--mode", type=click.Choice(["naive", "agentic"]), default="agentic")
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
def repl(mode, config_path):
    """Interactive loop: one question per line, empty line or EOF to quit."""
    ctx = _context(config_path)
    session = ctx.sessions.create(mode)
    click.echo(f"session {session.id} ({mode}); ask away.")
    try:
        for line in sys.stdin:
            text = line.strip()
            if not text:
                break
            try:
                response = ctx.handle_query(session, text)
            except GatewayError as exc:
                click.echo(f"[backend error] {exc}")
                continue
            click.echo(response["answer"])
            for artifact in response["artifacts"]:
                click.echo(f"  artifact [{artifact['kind']}] {artifact['id']}: {artifact['url']}")
            if response.get("trajectory_id"):
                click.echo(f"  trajectory: {response['trajectory_id']}")
    finally:
        ctx.close()


@main.command()
@click.option("--system", type=click.Choice(["naive", "agentic", "both"]), default="both")
@click.option("--replay", "replay_dir", type=click.Path(exists=True), default=None,
              help="directory with replay scripts (defaults to the shipped ones)")
@click.option("--report", "report_path", type=click.Path(), default=None,
              help="write the JSON report here")
@click.option("--markdown", "markdown_path", type=click.Path(), default=None,
              help="write the rendered markdown report here")
@click.option("--subset", default=None, help="comma-separated question ids to run")
@click.option("--check/--no-check", default=False,
              help="exit nonzero unless replayed agentic questions all score correct "
                   "and the naive mean is exactly 1.00")
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
def bench(system, replay_dir, report_path, markdown_path, subset, check, config_path):
    """Run the benchmark suite under replay and score it."""
    ctx = _context(config_path)
    try:
        questions = load_suite(ctx.config.suite_path)
        if subset:
            wanted = {int(s) for s in subset.split(",")}
            questions = [q for q in questions if q.id in wanted]

        systems = ["naive", "agentic"] if system == "both" else [system]
        reports = {}
        failures = []
        for sysname in systems:
            base = Path(replay_dir) if replay_dir else replays_path(sysname)
            if replay_dir and (base / sysname).is_dir():
                base = base / sysname
            report = run_suite(
                sysname,
                questions,
                store=ctx.store,
                knowledge=ctx.knowledge,
                replay_dir=base,
                artifact_root=ctx.config.artifact_root,
                session_prefix="bench",
                budget=ctx.config.budget,
            )
            reports[sysname] = report
            c, t = report.overall
            click.echo(
                f"{sysname}: {c}/{t} correct ({100 * c / t if t else 0:.1f}%), "
                f"mean sql-gen calls {report.mean_sql_gen_calls:.2f}"
            )
            if check:
                if sysname == "agentic":
                    scripted = [
                        v for v in report.verdicts
                        if (base / f"q{v.question_id:02d}.jsonl").exists()
                    ]
                    bad = [v for v in scripted if not v.correct]
                    failures += [
                        f"agentic q{v.question_id}: {v.reason}" for v in bad
                    ]
                    if not scripted:
                        failures.append("agentic: no replay scripts were found to check")
                if sysname == "naive" and report.verdicts:
                    if report.mean_sql_gen_calls != 1.0:
                        failures.append(
                            f"naive mean sql-gen calls {report.mean_sql_gen_calls:.2f} != 1.00"
                        )

        if report_path:
            payload = {name: rep.to_dict() for name, rep in reports.items()}
            Path(report_path).write_text(json.dumps(payload, indent=2) + "\n")
            click.echo(f"report written to {report_path}")
        if markdown_path:
            Path(markdown_path).write_text(render_report_markdown(questions, reports))
            click.echo(f"markdown written to {markdown_path}")

        if check and failures:
            for failure in failures:
                click.echo(f"CHECK FAILED: {failure}", err=True)
            raise SystemExit(1)
        if check:
            click.echo("all checks passed")
    finally:
        ctx.close()


@main.command()
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=8000)
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
def serve(host, port, config_path):
    """Serve the HTTP API (and the browser client's backend)."""
    import uvicorn

    from .service import create_app

    ctx = _context(config_path)
    app = create_app(ctx)
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
