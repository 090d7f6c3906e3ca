"""Command line entry points: index building, batch generation, serving.

Exit codes: 0 success, 2 validation error (bad flags or malformed input),
3 pipeline error (no candidates, unplaceable, corrupt corpus).
"""

from __future__ import annotations

import json
import os
import sys
from pathlib import Path

import click

from .errors import EmptySpec, InfoforgeError, MalformedItem, OversizeField
from .geometry import BBox, Canvas
from .layout_rank import PivotPlacement

EXIT_VALIDATION = 2
EXIT_PIPELINE = 3


def _fail(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _parse_canvas(value: str, background: str) -> Canvas:
    try:
        w, _, h = value.lower().partition("x")
        return Canvas(int(w), int(h), background)
    except ValueError as exc:
        raise click.BadParameter(f"canvas must look like 1200x1600 ({exc})")


def _parse_pivot(value: str | None) -> PivotPlacement | None:
    if value is None:
        return None
    file_part, _, box_part = value.partition("@")
    try:
        x, y, w, h = (float(v) for v in box_part.split(","))
        bbox = BBox(x, y, w, h)
    except ValueError as exc:
        raise click.BadParameter(f"pivot must look like [file.svg]@x,y,w,h ({exc})")
    graphic = None
    if file_part:
        path = Path(file_part)
        if not path.exists():
            raise click.BadParameter(f"pivot graphic {file_part!r} not found")
        graphic = path.read_text(encoding="utf-8")
    return PivotPlacement(bbox=bbox, graphic_ref=graphic)


def _parse_sketch(path: str | None, canvas: Canvas):
    if path is None:
        return None
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        points = [(float(x), float(y)) for x, y in data["points"]]
    except (OSError, KeyError, ValueError, TypeError) as exc:
        raise click.BadParameter(f"sketch file unreadable: {exc}")
    if data.get("space", "canvas-px") == "canvas-px":
        points = [(x / canvas.width_px, y / canvas.height_px) for x, y in points]
    return points


@click.group()
def main():
    """Infographic synthesis: rank layouts and designs, assemble SVGs."""


@main.group()
def index():
    """Offline index construction."""


@index.command("build")
@click.option("--corpus", default=lambda: os.environ.get("INFOFORGE_CORPUS", "corpus"), show_default="$INFOFORGE_CORPUS or ./corpus")
@click.option("--k", default=12, show_default=True, help="number of layout clusters")
@click.option("--seed", default=0, show_default=True, type=int)
def index_build(corpus: str, k: int, seed: int):
    """Cluster corpus layouts and write the ranking index files."""
    from .assets import load_corpus
    from .indexing import build_indices, write_indices

    try:
        store = load_corpus(corpus)
        bundle = build_indices(store, k=k, seed=seed)
        written = write_indices(corpus, bundle)
    except InfoforgeError as exc:
        _fail(EXIT_PIPELINE, f"{exc.code}: {exc}")
    for path in written:
        click.echo(str(path))
    diag = bundle.cluster_model.diagnostics
    if diag.get("fallback"):
        click.echo(f"note: {diag['fallback']}", err=True)


@main.command()
@click.option("--input", "input_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--canvas", "canvas_spec", default="1200x1600", show_default=True)
@click.option("--background", default="#ffffff", show_default=True)
@click.option("--pivot", "pivot_spec", default=None, help="[file.svg]@x,y,w,h in canvas fractions")
@click.option("--sketch", "sketch_path", default=None, type=click.Path(exists=True, dir_okay=False))
@click.option("--alpha", default=0.5, show_default=True, type=click.FloatRange(0.0, 1.0))
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--top-k", default=4, show_default=True, type=click.IntRange(1, 16))
@click.option("--corpus", default=lambda: os.environ.get("INFOFORGE_CORPUS", "corpus"), show_default="$INFOFORGE_CORPUS or ./corpus")
@click.option("--out", "out_dir", required=True, type=click.Path(file_okay=False))
def generate(input_path, canvas_spec, background, pivot_spec, sketch_path, alpha, seed, top_k, corpus, out_dir):
    """Generate the top-k assembled infographics for a markdown file."""
    from .pipeline import Engine, parse_inputs, generate_top_k

    canvas = _parse_canvas(canvas_spec, background)
    pivot = _parse_pivot(pivot_spec)
    sketch = _parse_sketch(sketch_path, canvas)
    try:
        markdown = Path(input_path).read_text(encoding="utf-8")
        inputs = parse_inputs(markdown, canvas, pivot=pivot, sketch_points=sketch, alpha=alpha, seed=seed)
    except (EmptySpec, MalformedItem, OversizeField) as exc:
        _fail(EXIT_VALIDATION, f"{exc.code}: {exc}")
    except OSError as exc:
        _fail(EXIT_VALIDATION, str(exc))

    try:
        engine = Engine.open(corpus, seed=seed)
        outputs = generate_top_k(engine, inputs, top_k=top_k)
    except InfoforgeError as exc:
        _fail(EXIT_PIPELINE, f"{exc.code}: {exc}")

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for i, art in enumerate(outputs, start=1):
        svg_path = out / f"infographic_{i:02d}.svg"
        svg_path.write_text(art.svg_doc, encoding="utf-8")
        (out / f"infographic_{i:02d}.provenance.json").write_text(
            json.dumps(art.provenance, sort_keys=True, indent=1) + "\n", encoding="utf-8"
        )
        click.echo(str(svg_path))


@main.command()
@click.option("--corpus", default=lambda: os.environ.get("INFOFORGE_CORPUS", "corpus"), show_default="$INFOFORGE_CORPUS or ./corpus")
@click.option("--addr", default=lambda: os.environ.get("INFOFORGE_ADDR", "127.0.0.1:8765"), show_default="$INFOFORGE_ADDR or 127.0.0.1:8765")
@click.option("--store", default=lambda: os.environ.get("INFOFORGE_STORE", ".infoforge-sessions"), show_default="$INFOFORGE_STORE or .infoforge-sessions")
def serve(corpus: str, addr: str, store: str):
    """Run the HTTP recommendation and assembly service."""
    import uvicorn

    from .service import create_app

    host, _, port = addr.partition(":")
    try:
        app = create_app(corpus, store)
    except InfoforgeError as exc:
        _fail(EXIT_PIPELINE, f"{exc.code}: {exc}")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8765), log_level="warning")


if __name__ == "__main__":
    main()
