#!/usr/bin/env python3
"""Generate the three demo scenarios into out/: content only, content with
a pivot graphic, and content with a pivot plus a hand-drawn flow stroke.

Usage: python scripts/run_use_cases.py [--corpus corpus] [--out out]
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from infoforge.content import parse_markdown  # noqa: E402
from infoforge.geometry import BBox, Canvas  # noqa: E402
from infoforge.layout_rank import PivotPlacement  # noqa: E402
from infoforge.pipeline import Engine, StageInputs, generate_top_k  # noqa: E402

FOUR_STEPS = """# Morning Routine
- title: Wake up
  text: Rise with the sun and stretch a little.
- title: Hydrate
  text: A full glass of water before anything else.
- title: Move
  text: Twenty minutes of light exercise.
- title: Plan
  text: Write down what matters today.
"""

FIVE_STEPS = """# Product Launch
- title: Research
  text: Understand the market and the gap.
  label: 01
- title: Prototype
  text: Build the smallest thing that works.
  label: 02
- title: Test
  text: Put it in front of real users.
  label: 03
- title: Polish
  text: Fix what the tests surfaced.
  label: 04
- title: Launch
  text: Ship it and watch the numbers.
  label: 05
"""


def trace(points, per_seg=30):
    out = []
    for a, b in zip(points, points[1:]):
        out += [(a[0] + (b[0] - a[0]) * i / per_seg, a[1] + (b[1] - a[1]) * i / per_seg) for i in range(per_seg)]
    out.append(points[-1])
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--corpus", default="corpus")
    ap.add_argument("--out", default="out")
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    engine = Engine.open(args.corpus)
    canvas = Canvas(1200, 1600, "#ffffff")
    pivot = PivotPlacement(bbox=BBox(0.42, 0.58, 0.16, 0.12), graphic_ref="pivots/pivot-disc.svg")
    arc = engine.store.layout("vif-arc-05")

    scenarios = {
        "uc1-content-only": StageInputs(spec=parse_markdown(FOUR_STEPS), canvas=canvas, seed=args.seed),
        "uc2-with-pivot": StageInputs(spec=parse_markdown(FIVE_STEPS), canvas=canvas, pivot=pivot, seed=args.seed),
        "uc3-pivot-and-sketch": StageInputs(
            spec=parse_markdown(FIVE_STEPS), canvas=canvas, pivot=pivot,
            sketch=trace(list(arc.points)), seed=args.seed,
        ),
    }
    for name, inputs in scenarios.items():
        out_dir = Path(args.out) / name
        out_dir.mkdir(parents=True, exist_ok=True)
        for i, art in enumerate(generate_top_k(engine, inputs, top_k=4), start=1):
            path = out_dir / f"rank{i}_{art.provenance['layout_id']}.svg"
            path.write_text(art.svg_doc, encoding="utf-8")
            print(path)


if __name__ == "__main__":
    main()
