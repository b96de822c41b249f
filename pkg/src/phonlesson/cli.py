"""Command-line front end: validate, compile, inspect, preview, serve."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .errors import ValidationFailed
from .project import PREVIEW_FILENAME, Project
from .scheduler import timeline_to_json
from .smilgen import LABEL_NUMBERED, LABEL_TEXT, LayoutConfig
from .timegraph import active_at, parse_smil


def _layout(label_mode: str) -> LayoutConfig:
    return LayoutConfig(label_mode=label_mode)


def _print_diagnostics(diags) -> int:
    errors = 0
    for d in diags:
        click.echo(str(d))
        if d.severity == "error":
            errors += 1
    return errors


@click.group()
def main():
    """Phonetics lesson compiler: .sph source to synchronized SMIL 3.0."""


project_option = click.option(
    "--project",
    type=click.Path(file_okay=False, path_type=Path),
    default=".",
    show_default=True,
    help="Project directory containing lesson.sph.",
)
label_option = click.option(
    "--label-mode",
    type=click.Choice([LABEL_NUMBERED, LABEL_TEXT]),
    default=LABEL_NUMBERED,
    show_default=True,
    help="Index entry labels: numbered ('Rule k') or rule-text prefixes.",
)


@main.command()
@project_option
def validate(project: Path):
    """Check the lesson: schema, characters, audio files, schedule."""
    diags = Project(project).validate()
    errors = _print_diagnostics(diags)
    if errors:
        click.echo(f"{errors} error(s)")
        sys.exit(1)
    click.echo("ok")


@main.command()
@project_option
@label_option
def compile(project: Path, label_mode: str):
    """Compile the lesson to dist/lesson.smil (plus preview and audio)."""
    proj = Project(project)
    layout = _layout(label_mode)
    try:
        result = proj.compile(layout)
    except ValidationFailed as exc:
        _print_diagnostics(exc.diagnostics)
        sys.exit(1)
    out = proj.write_dist(result, layout)
    total_s = result.timeline.total_ms / 1000
    click.echo(f"wrote {out} (total duration {total_s:g}s)")


@main.command()
@project_option
@click.option("--at", type=int, default=None, help="Also report what is active at this time (ms).")
def inspect(project: Path, at: int | None):
    """Print the computed timeline as JSON."""
    proj = Project(project)
    try:
        result = proj.compile()
    except ValidationFailed as exc:
        _print_diagnostics(exc.diagnostics)
        sys.exit(1)
    doc = timeline_to_json(result.timeline)
    if at is not None:
        graph = parse_smil(result.smil)
        active = active_at(graph, at)
        doc["activeAt"] = {
            "tMs": at,
            "regions": active.regions,
            "audio": list(active.audio),
        }
    click.echo(json.dumps(doc, indent=2, ensure_ascii=False))


@main.command()
@project_option
@label_option
def preview(project: Path, label_mode: str):
    """Compile and write the standalone HTML preview to dist/preview.html."""
    proj = Project(project)
    layout = _layout(label_mode)
    try:
        result = proj.compile(layout)
    except ValidationFailed as exc:
        _print_diagnostics(exc.diagnostics)
        sys.exit(1)
    proj.write_dist(result, layout)
    click.echo(f"wrote {proj.dist_dir / PREVIEW_FILENAME}")


@main.command()
@project_option
@click.option("--port", type=int, default=8777, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
def serve(project: Path, port: int, host: str):
    """Run the authoring HTTP API for the web UI."""
    import uvicorn

    from .service import create_app

    app = create_app(project)
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
