"""Command-line interface: classify, evaluate, export, import, serve."""

from __future__ import annotations

import json
import warnings
from pathlib import Path

import click

from .apparatus_model import parse_document, serialize_document
from .errors import GatewayError, RdgaiError
from .evaluation import render_html_report, render_text_report, review_prompt, run_evaluation
from .llm_gateway import load_config
from .pipeline import RunConfig, classify_document
from .tabular_io import export_table, import_table


def _read_document(path: Path):
    try:
        return parse_document(path.read_text(encoding="utf-8"))
    except RdgaiError as exc:
        raise click.ClickException(str(exc))


@click.group()
@click.version_option(package_name="rdgai")
def main() -> None:
    """Classify transitions between variant readings in a TEI XML critical
    apparatus, by hand or with an LLM."""


@main.command()
@click.argument("in_xml", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.argument("out_xml", type=click.Path(dir_okay=False, path_type=Path))
@click.option("--examples", default=10, show_default=True, help="Examples per category in the prompt.")
@click.option("--model", default=None, help="Model name (overrides RDGAI_MODEL).")
@click.option("--api-base", default=None, help="Endpoint URL (overrides RDGAI_API_BASE).")
@click.option("--temperature", default=None, type=float, help="Sampling temperature.")
@click.option("--units", default=None, help="Comma-separated unit ids to classify.")
@click.option("--concurrency", default=4, show_default=True, help="Concurrent unit requests.")
@click.option("--dry-run", is_flag=True, help="Print the prompts instead of calling the model.")
@click.option("--stats", "stats_path", type=click.Path(dir_okay=False, path_type=Path), default=None, help="Write run statistics to a JSON file.")
def classify(in_xml, out_xml, examples, model, api_base, temperature, units, concurrency, dry_run, stats_path):
    """Classify all unclassified reading pairs of IN_XML into OUT_XML."""
    doc = _read_document(in_xml)
    unit_filter = [u.strip() for u in units.split(",") if u.strip()] if units else None
    config = RunConfig(
        model=load_config(model=model, api_base=api_base, temperature=temperature),
        examples_per_category=examples,
        concurrency=concurrency,
        unit_filter=unit_filter,
        dry_run=dry_run,
    )
    try:
        updated, stats = classify_document(doc, config)
    except (RdgaiError, ValueError) as exc:
        raise click.ClickException(str(exc))
    if dry_run:
        out_xml.write_bytes(in_xml.read_bytes())
    else:
        out_xml.write_text(serialize_document(updated), encoding="utf-8")
        click.echo(
            f"classified {stats.pairs_classified} of {stats.pairs_attempted} pairs"
            f" ({stats.pairs_failed} failed)"
        )
        for failure in stats.errors:
            click.echo(f"  {failure.unit_id}: {failure.message}", err=True)
    if stats_path is not None:
        stats_path.write_text(json.dumps(stats.to_dict(), indent=2) + "\n", encoding="utf-8")


@main.command()
@click.argument("in_xml", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--proportion", default=0.5, show_default=True, type=float, help="Share of manual annotations used as prompt examples.")
@click.option("--seed", default=42, show_default=True, type=int, help="Split seed.")
@click.option("--examples", default=10, show_default=True, help="Examples per category in the prompt.")
@click.option("--model", default=None, help="Model name (overrides RDGAI_MODEL).")
@click.option("--api-base", default=None, help="Endpoint URL (overrides RDGAI_API_BASE).")
@click.option("--concurrency", default=4, show_default=True, help="Concurrent unit requests.")
@click.option("--report", "report_path", required=True, type=click.Path(dir_okay=False, path_type=Path), help="Write the HTML report here.")
@click.option("--text-report", "text_report_path", type=click.Path(dir_okay=False, path_type=Path), default=None, help="Also write a plain-text report.")
@click.option("--suggest", is_flag=True, help="Ask the model to critique the prompt afterwards.")
def evaluate(in_xml, proportion, seed, examples, model, api_base, concurrency, report_path, text_report_path, suggest):
    """Hold out part of the manual annotations and measure the model."""
    doc = _read_document(in_xml)
    model_config = load_config(model=model, api_base=api_base)
    try:
        report = run_evaluation(doc, proportion, seed, model_config, examples, concurrency)
    except (RdgaiError, ValueError) as exc:
        raise click.ClickException(str(exc))
    if suggest:
        try:
            report.suggestions = review_prompt(model_config, render_text_report(report))
        except GatewayError as exc:
            warnings.warn(f"prompt review failed: {exc}", stacklevel=1)
    report_path.write_text(render_html_report(report), encoding="utf-8")
    if text_report_path is not None:
        text_report_path.write_text(render_text_report(report), encoding="utf-8")
    click.echo(f"pairs evaluated {report.matrix.total}")
    click.echo(f"accuracy {report.accuracy:.3f}")
    click.echo(f"macro precision {report.macro_precision:.3f}")
    click.echo(f"macro recall {report.macro_recall:.3f}")
    click.echo(f"macro f1 {report.macro_f1:.3f}")
    click.echo(f"report written to {report_path}")


@main.command()
@click.argument("in_xml", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.argument("out_csv", type=click.Path(dir_okay=False, path_type=Path))
def export(in_xml, out_csv):
    """Export every reading pair and its classification to CSV."""
    doc = _read_document(in_xml)
    with open(out_csv, "w", encoding="utf-8", newline="") as handle:
        handle.write(export_table(doc))
    click.echo(f"exported to {out_csv}")


@main.command(name="import")
@click.argument("in_xml", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.argument("edits_csv", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.argument("out_xml", type=click.Path(dir_okay=False, path_type=Path))
@click.option("--resp", default="import", show_default=True, help="Responsibility recorded for imported edits.")
def import_(in_xml, edits_csv, out_xml, resp):
    """Apply classifications edited in a CSV back onto the document."""
    doc = _read_document(in_xml)
    try:
        updated, summary = import_table(doc, edits_csv.read_text(encoding="utf-8"), resp)
    except RdgaiError as exc:
        raise click.ClickException(str(exc))
    out_xml.write_text(serialize_document(updated), encoding="utf-8")
    click.echo(f"added {summary.added} changed {summary.changed} unchanged {summary.unchanged}")
    for error in summary.errors:
        click.echo(f"  {error}", err=True)


@main.command()
@click.argument("in_xml", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--port", default=8000, show_default=True, type=int)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--resp", default="annotator", show_default=True, help="Responsibility recorded for classifications made in the UI.")
def serve(in_xml, port, host, resp):
    """Serve the classification UI and JSON API for one document."""
    import uvicorn

    from .service import create_app

    app = create_app(in_xml, responsibility=resp)
    uvicorn.run(app, host=host, port=port, log_level="warning")
