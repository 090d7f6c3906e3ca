#!/usr/bin/env python3
"""Regenerate the bundled asset corpus under corpus/ (deterministic).

Twelve parametric flow-layout families at several group counts, a set of
hand-parameterized VG card designs, connection decorations per style class,
palettes, and the connection-style membership table. Layout points are
uniformly spaced by arc length along each family curve so a stroke traced
over a layout resamples back onto its own points.

Usage: python scripts/make_sample_pack.py [--root corpus]
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import shutil
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from infoforge.geometry import resample_to_n  # noqa: E402

VG_COUNTS = [3, 4, 5, 6, 7, 8]


def dense(curve, samples=400):
    return [curve(i / (samples - 1)) for i in range(samples)]


def polyline(corners):
    def curve(t):
        total = sum(math.dist(a, b) for a, b in zip(corners, corners[1:]))
        target = t * total
        acc = 0.0
        for a, b in zip(corners, corners[1:]):
            l = math.dist(a, b)
            if acc + l >= target or b is corners[-1]:
                u = 0.0 if l == 0 else min(1.0, (target - acc) / l)
                return (a[0] + (b[0] - a[0]) * u, a[1] + (b[1] - a[1]) * u)
            acc += l
        return corners[-1]

    return curve


# family name -> parametric curve over t in [0, 1]
FAMILIES = {
    "horizontal": polyline([(0.10, 0.50), (0.90, 0.50)]),
    "vertical": polyline([(0.50, 0.10), (0.50, 0.90)]),
    "diagonal": polyline([(0.12, 0.12), (0.88, 0.88)]),
    "serpentine": polyline(
        [(0.12, 0.15), (0.88, 0.15), (0.88, 0.50), (0.12, 0.50), (0.12, 0.85), (0.88, 0.85)]
    ),
    "circular": lambda t: (
        0.5 + 0.34 * math.cos(-math.pi / 2 + t * 2 * math.pi * 5 / 6),
        0.5 + 0.34 * math.sin(-math.pi / 2 + t * 2 * math.pi * 5 / 6),
    ),
    "arc": lambda t: (0.5 - 0.38 * math.cos(t * math.pi), 0.62 - 0.38 * math.sin(t * math.pi)),
    "ushape": polyline([(0.15, 0.12), (0.15, 0.85), (0.85, 0.85), (0.85, 0.12)]),
    "lshape": polyline([(0.15, 0.12), (0.15, 0.85), (0.88, 0.85)]),
    "grid": polyline([(0.15, 0.28), (0.85, 0.28), (0.85, 0.55), (0.15, 0.55), (0.15, 0.82), (0.85, 0.82)]),
    "spiral": lambda t: (
        0.5 + (0.10 + 0.26 * t) * math.cos(t * 2.1 * math.pi),
        0.5 + (0.10 + 0.26 * t) * math.sin(t * 2.1 * math.pi),
    ),
    "vshape": polyline([(0.12, 0.15), (0.50, 0.85), (0.88, 0.15)]),
    "radial": lambda t: (
        0.5 + (0.36 if round(t * 7) % 2 == 0 else 0.16) * math.cos(-math.pi / 2 + t * 1.75 * math.pi),
        0.5 + (0.36 if round(t * 7) % 2 == 0 else 0.16) * math.sin(-math.pi / 2 + t * 1.75 * math.pi),
    ),
}


def make_layouts():
    layouts = []
    for cluster, (family, curve) in enumerate(FAMILIES.items()):
        counts = VG_COUNTS + ([2] if family in ("horizontal", "vertical", "diagonal") else [])
        for n in sorted(counts):
            pts = resample_to_n(dense(curve), n)
            # Iterate to the fixpoint where points are uniformly spaced along
            # their own chord polyline; sketch matching resamples that way.
            for _ in range(400):
                new = resample_to_n(pts, n)
                drift = max(math.dist(a, b) for a, b in zip(pts, new))
                pts = new
                if drift < 1e-9:
                    break
            pts = [(round(x, 4), round(y, 4)) for x, y in pts]
            layouts.append(
                {
                    "id": f"vif-{family}-{n:02d}",
                    "points": pts,
                    "cluster": cluster,
                    "source": "authored",
                }
            )
    return layouts


# -- VG designs ---------------------------------------------------------------

def _rect(rid, x, y, w, h, extra=""):
    return f'<rect id="{rid}" x="{x}" y="{y}" width="{w}" height="{h}" fill="none"{extra}/>'


def vg_svg(kind, slots, w, h):
    """Compose a small themed card; slot rects double as the placeholder map."""
    body = []
    rects = {}
    if kind == "card":
        body.append(
            f'<rect data-fill="series" x="4" y="4" width="{w-8}" height="{h-8}" rx="14" fill="#9aa3ad"/>'
        )
        body.append(
            f'<rect data-fill="muted" x="12" y="12" width="{w-24}" height="{h-24}" rx="10" fill="#e6e9ec"/>'
        )
        y = 24
        if "image" in slots:
            rects["image"] = (24, y, w - 48, 72)
            y += 84
        if "title" in slots:
            rects["title"] = (24, y, w - 48, 30)
            y += 38
        if "text" in slots:
            bottom = h - 24 - (34 if "label" in slots else 0)
            rects["text"] = (24, y, w - 48, max(30, bottom - y))
            y = bottom + 6
        if "label" in slots:
            rects["label"] = (24, h - 52, w - 48, 28)
    elif kind == "badge":
        r = min(w, h) / 2 - 6
        body.append(f'<circle data-fill="series" cx="{w/2}" cy="{h/2}" r="{r}" fill="#9aa3ad"/>')
        body.append(f'<circle data-fill="muted" cx="{w/2}" cy="{h/2}" r="{r-10}" fill="#e6e9ec"/>')
        mid = h / 2
        if "label" in slots:
            rects["label"] = (w * 0.25, mid - 34, w * 0.5, 30)
        if "title" in slots:
            rects["title"] = (w * 0.2, mid - (0 if "label" in slots else 16), w * 0.6, 26)
        if "text" in slots:
            rects["text"] = (w * 0.2, mid + 28, w * 0.6, r - 44)
        if "image" in slots:
            rects["image"] = (w * 0.35, mid - r + 14, w * 0.3, 34)
    elif kind == "banner":
        body.append(
            f'<rect data-fill="series" x="4" y="{h*0.2}" width="{w-8}" height="{h*0.6}" rx="8" fill="#9aa3ad"/>'
        )
        body.append(
            f'<polygon data-fill="series" points="{w/2-14},{h*0.8} {w/2+14},{h*0.8} {w/2},{h*0.94}" fill="#9aa3ad"/>'
        )
        split = w * 0.34
        if "label" in slots:
            rects["label"] = (14, h * 0.32, split - 22, h * 0.36)
        if "title" in slots:
            rects["title"] = (split + 6, h * 0.26, w - split - 22, 26)
        if "text" in slots:
            rects["text"] = (split + 6, h * 0.26 + 30, w - split - 22, h * 0.34 - 6)
        if "image" in slots:
            rects["image"] = (14, h * 0.3, split - 22, h * 0.4)
    elif kind == "hex":
        pts = []
        for i in range(6):
            a = math.pi / 6 + i * math.pi / 3
            pts.append(f"{w/2 + (w/2-5)*math.cos(a):.1f},{h/2 + (h/2-5)*math.sin(a):.1f}")
        body.append(f'<polygon data-fill="series" points="{" ".join(pts)}" fill="#9aa3ad"/>')
        y = h * 0.24
        if "image" in slots:
            rects["image"] = (w * 0.3, y, w * 0.4, h * 0.2)
            y += h * 0.24
        if "title" in slots:
            rects["title"] = (w * 0.24, y, w * 0.52, 26)
            y += 32
        if "label" in slots:
            rects["label"] = (w * 0.3, y, w * 0.4, 24)
            y += 30
        if "text" in slots:
            rects["text"] = (w * 0.26, y, w * 0.48, h * 0.76 - y)
    else:
        raise ValueError(kind)

    for slot, (x, y, rw, rh) in rects.items():
        body.append(_rect(f"ph-{slot}", round(x, 1), round(y, 1), round(rw, 1), round(rh, 1)))
    svg = (
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {w} {h}">' + "".join(body) + "</svg>"
    )
    return svg, {s: [round(v, 1) for v in r] for s, r in rects.items()}


# (name, kind, slots, clusters) -- cluster sets vary in rarity on purpose so
# the frequency-weighted ranking has something to separate.
VG_SPECS = [
    ("vg-card-full-a", "card", ["title", "text", "label", "image"], [0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11]),
    ("vg-card-full-b", "card", ["title", "text", "label", "image"], [0, 2, 3, 6, 8]),
    ("vg-hex-full", "hex", ["title", "text", "label", "image"], [4, 9, 11]),
    ("vg-card-tt-a", "card", ["title", "text"], [0, 1, 2, 3, 8]),
    ("vg-card-tt-b", "card", ["title", "text"], [3, 6, 7]),
    ("vg-card-tt-c", "card", ["title", "text"], [2]),
    ("vg-banner-tt", "banner", ["title", "text"], [0, 1, 8]),
    ("vg-card-ttl-a", "card", ["title", "text", "label"], [0, 1, 2, 3, 4, 5, 8]),
    ("vg-card-ttl-b", "card", ["title", "text", "label"], [4, 5, 9]),
    ("vg-banner-ttl", "banner", ["title", "text", "label"], [6, 7, 10]),
    ("vg-hex-ttl", "hex", ["title", "text", "label"], [9, 11]),
    ("vg-badge-lt", "badge", ["label", "title"], [4, 5, 9, 11]),
    ("vg-badge-l", "badge", ["label"], [4, 11]),
    ("vg-badge-ltx", "badge", ["label", "title", "text"], [4, 5]),
    ("vg-card-ti", "card", ["title", "image"], [0, 1, 2, 6]),
    ("vg-card-txi", "card", ["text", "image"], [1, 2, 7]),
    ("vg-card-tti", "card", ["title", "text", "image"], [0, 3, 6, 8, 10]),
    ("vg-hex-ti", "hex", ["title", "image"], [9, 10, 11]),
    ("vg-card-t", "card", ["title"], [0, 1, 2, 3]),
    ("vg-card-tx", "card", ["text"], [0, 5, 7, 8]),
    ("vg-banner-ltx", "banner", ["label", "text"], [6, 7]),
    ("vg-card-lt", "card", ["label", "text"], [1, 3, 5]),
    ("vg-badge-lti", "badge", ["label", "title", "image"], [4, 10, 11]),
    ("vg-banner-full", "banner", ["title", "text", "label", "image"], [1, 5, 7, 10]),
    ("vg-hex-tt", "hex", ["title", "text"], [9, 10]),
    ("vg-card-li", "card", ["label", "image"], [2, 4, 8]),
]

KIND_SIZE = {"card": (200, 240), "badge": (200, 200), "banner": (240, 150), "hex": (210, 230)}


def make_vgs(root: Path):
    for name, kind, slots, clusters in VG_SPECS:
        w, h = KIND_SIZE[kind]
        svg, rects = vg_svg(kind, slots, w, h)
        (root / "vgs" / f"{name}.svg").write_text(svg + "\n", encoding="utf-8")
        meta = {
            "id": name,
            "placeholders": rects,
            "anchor": [w / 2, h / 2],
            "native_size": [w, h],
            "clusters": clusters,
        }
        (root / "vgs" / f"{name}.meta.json").write_text(
            json.dumps(meta, indent=1, sort_keys=True) + "\n", encoding="utf-8"
        )


# -- connection designs -------------------------------------------------------

def conn_svg(body, w=100, h=20):
    return f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {w} {h}">{body}</svg>\n'


CONN_SPECS = [
    ("conn-arrow", "Regular", '<path data-fill="series" d="M0,8 H80 V4 L100,10 L80,16 V12 H0 Z" fill="#888888"/>'),
    ("conn-line", "Regular", '<rect data-fill="series" x="0" y="8" width="100" height="4" rx="2" fill="#888888"/>'),
    (
        "conn-dashes",
        "Regular",
        '<g data-fill="series" fill="#888888"><rect x="0" y="8" width="24" height="4" rx="2"/>'
        '<rect x="38" y="8" width="24" height="4" rx="2"/><rect x="76" y="8" width="24" height="4" rx="2"/></g>',
    ),
    (
        "conn-rail",
        "Regular",
        '<g data-fill="series" fill="#888888"><rect x="0" y="5" width="100" height="3"/>'
        '<rect x="0" y="12" width="100" height="3"/></g>',
    ),
    (
        "conn-dots",
        "Alternate",
        '<g data-fill="series" fill="#888888"><circle cx="10" cy="10" r="5"/>'
        '<circle cx="50" cy="10" r="5"/><circle cx="90" cy="10" r="5"/></g>',
    ),
    (
        "conn-chevrons",
        "Alternate",
        '<g data-fill="series" fill="#888888"><path d="M10,2 L30,10 L10,18 L18,10 Z"/>'
        '<path d="M55,2 L75,10 L55,18 L63,10 Z"/></g>',
    ),
    ("conn-wave", "Alternate", '<path data-fill="series" d="M0,10 Q25,0 50,10 T100,10" stroke="#888888" stroke-width="4" fill="none"/>'),
    ("conn-swoosh", "FlowShape", '<path data-fill="series" d="M0,16 Q50,-6 100,12 Q55,4 2,19 Z" fill="#888888"/>'),
    ("conn-ribbon", "FlowShape", '<path data-fill="series" d="M0,6 L88,2 L100,10 L88,18 L0,14 Q10,10 0,6 Z" fill="#888888"/>'),
    ("conn-leaf", "FlowShape", '<path data-fill="series" d="M0,10 Q50,-8 100,10 Q50,28 0,10 Z" fill="#888888"/>'),
    ("conn-ray", "Pivot", '<polygon data-fill="series" points="0,9 100,2 100,18 0,11" fill="#888888"/>'),
    ("conn-beam", "Pivot", '<polygon data-fill="series" points="0,7 100,0 100,20 0,13" fill="#888888"/>'),
    (
        "conn-dotline",
        "Pivot",
        '<g data-fill="series" fill="#888888"><circle cx="8" cy="10" r="3"/><circle cx="31" cy="10" r="3"/>'
        '<circle cx="54" cy="10" r="3"/><circle cx="77" cy="10" r="3"/><circle cx="97" cy="10" r="3"/></g>',
    ),
    ("conn-spoke", "Pivot", '<path data-fill="series" d="M0,10 H92 M92,4 L100,10 L92,16" stroke="#888888" stroke-width="3" fill="none"/>'),
]


def make_connections(root: Path):
    for name, style, body in CONN_SPECS:
        (root / "connections" / f"{name}.svg").write_text(conn_svg(body), encoding="utf-8")
        meta = {"id": name, "style_class": style, "native_length_axis": "x", "native_size": [100, 20]}
        (root / "connections" / f"{name}.meta.json").write_text(
            json.dumps(meta, indent=1, sort_keys=True) + "\n", encoding="utf-8"
        )


PALETTES = [
    {
        "id": "pal-ink",
        "background": "#ffffff",
        "series": ["#1f3a5f", "#58355e", "#0f6e5c", "#8c3b2e", "#34506d", "#6e4b17"],
        "text_color": "#14181d",
    },
    {
        "id": "pal-noir",
        "background": "#14181d",
        "series": ["#8fd3f4", "#f4a9c4", "#b5e8a3", "#ffd37a", "#c0b7f9", "#90e8d8"],
        "text_color": "#f2f4f6",
    },
    {
        "id": "pal-pastel",
        "background": "#fdfdfd",
        "series": ["#f9d5e5", "#d5f0f9", "#e1f9d5", "#f9f3d5", "#e8d5f9", "#d5e0f9"],
        "text_color": "#6a6f75",
    },
    {
        "id": "pal-earth",
        "background": "#f4ead8",
        "series": ["#6b4226", "#5a6b26", "#26566b", "#8a5a2a", "#44552e", "#7a3b3b"],
        "text_color": "#2e2418",
    },
    {
        "id": "pal-ocean",
        "background": "#eef6f9",
        "series": ["#0b4f6c", "#145c53", "#3a3f7a", "#0e6678", "#284b63", "#54457f"],
        "text_color": "#11222b",
    },
    {
        "id": "pal-candy",
        "background": "#1d1030",
        "series": ["#ff7eb9", "#7afcff", "#feff9c", "#9dff8a", "#ffb86b", "#c792ea"],
        "text_color": "#f6ecff",
    },
]

# Connection-style class -> layout families the style was observed with.
# "circular" and "radial" flows carry pivot-anchored decorations; snaking and
# linear flows carry along-the-line ones.
C_VIF = {
    "FlowShape": [5, 9, 10],          # arc, spiral, vshape
    "Regular": [0, 1, 2, 3, 7, 8],    # linear and snaking families
    "Alternate": [3, 6, 8],           # serpentine, ushape, grid
    "Pivot": [4, 11],                 # circular, radial
    "None": [0, 1, 8],                # plain lists often run bare
}

PIVOTS = {
    "pivot-disc": '<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 100 100">'
    '<circle cx="50" cy="50" r="46" fill="#d8dee6"/><circle cx="50" cy="50" r="30" fill="#aab6c4"/></svg>\n',
    "pivot-ring": '<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 100 100">'
    '<circle cx="50" cy="50" r="44" fill="none" stroke="#aab6c4" stroke-width="12"/></svg>\n',
    "pivot-shield": '<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 100 100">'
    '<path d="M50,4 L92,20 V52 Q92,82 50,97 Q8,82 8,52 V20 Z" fill="#c8d2dc"/></svg>\n',
}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--root", default="corpus")
    args = ap.parse_args()
    root = Path(args.root)
    if root.exists():
        shutil.rmtree(root)
    for sub in ("layouts", "vgs", "connections", "pivots"):
        (root / sub).mkdir(parents=True)

    for layout in make_layouts():
        (root / "layouts" / f"{layout['id']}.json").write_text(
            json.dumps(layout, sort_keys=True) + "\n", encoding="utf-8"
        )
    make_vgs(root)
    make_connections(root)
    (root / "palettes.json").write_text(json.dumps(PALETTES, indent=1, sort_keys=True) + "\n", encoding="utf-8")
    (root / "c_vif.json").write_text(json.dumps(C_VIF, indent=1, sort_keys=True) + "\n", encoding="utf-8")
    for name, svg in PIVOTS.items():
        (root / "pivots" / f"{name}.svg").write_text(svg, encoding="utf-8")

    checksums = {}
    for path in sorted(root.rglob("*")):
        if path.is_file() and path.name != "manifest.json":
            checksums[str(path.relative_to(root))] = hashlib.sha256(path.read_bytes()).hexdigest()
    manifest = {
        "format_version": 1,
        "counts": {
            "layouts": len(list((root / "layouts").glob("*.json"))),
            "vgs": len(list((root / "vgs").glob("*.svg"))),
            "connections": len(list((root / "connections").glob("*.svg"))),
            "palettes": len(PALETTES),
            "pivots": len(PIVOTS),
        },
        "checksums": checksums,
    }
    (root / "manifest.json").write_text(json.dumps(manifest, indent=1, sort_keys=True) + "\n", encoding="utf-8")
    print(f"wrote corpus to {root}: {manifest['counts']}")


if __name__ == "__main__":
    main()
