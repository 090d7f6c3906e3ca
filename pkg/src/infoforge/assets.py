"""Design-asset corpus: flow layouts, VG design SVGs, connection SVGs, palettes.

On-disk layout under a corpus root::

    manifest.json               format version, per-kind counts, checksums
    layouts/*.json              {id, points: [[x,y],...], cluster, source}
    vgs/*.svg + *.meta.json     design + {placeholders, anchor, native_size, clusters}
    connections/*.svg + *.meta.json
    pivots/*.svg                optional stock pivot graphics
    palettes.json
    c_vif.json                  connection-style class -> cluster ids

A loaded store is immutable; reloading builds a fresh instance. Placeholder
slots declared in a design's metadata must exist in its SVG as elements with
ids ``ph-title`` / ``ph-text`` / ``ph-label`` / ``ph-image``.
"""

from __future__ import annotations

import hashlib
import json
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from pathlib import Path

from .content import ComponentSignature
from .errors import CorruptAsset, MissingManifest, VersionMismatch
from .geometry import Point

FORMAT_VERSION = 1
NUM_VIF_CLASSES = 12
SLOTS = ("title", "text", "label", "image")
CONNECTION_STYLES = ("FlowShape", "Regular", "Alternate", "Pivot", "None")

_HEX_COLOR = re.compile(r"^#[0-9a-fA-F]{6}$")


@dataclass(frozen=True)
class VifLayout:
    id: str
    points: tuple[Point, ...]
    cluster_id: int | None = None
    source: str = "authored"

    def __post_init__(self):
        if len(self.points) < 2:
            raise ValueError(f"layout {self.id}: needs >= 2 points")
        for x, y in self.points:
            if not (0 <= x <= 1 and 0 <= y <= 1):
                raise ValueError(f"layout {self.id}: point ({x}, {y}) outside unit canvas")
        if self.cluster_id is not None and not (0 <= self.cluster_id < NUM_VIF_CLASSES):
            raise ValueError(f"layout {self.id}: cluster {self.cluster_id} out of range")


@dataclass(frozen=True)
class VgDesign:
    id: str
    svg_doc: str
    placeholders: dict[str, tuple[float, float, float, float]]
    anchor: Point
    native_size: tuple[float, float]
    clusters: tuple[int, ...]

    @property
    def signature(self) -> ComponentSignature:
        return ComponentSignature(
            has_title="title" in self.placeholders,
            has_text="text" in self.placeholders,
            has_label="label" in self.placeholders,
            has_image="image" in self.placeholders,
        )


@dataclass(frozen=True)
class ConnectionDesign:
    id: str
    svg_doc: str
    style_class: str
    native_length_axis: str
    native_size: tuple[float, float]


@dataclass(frozen=True)
class Palette:
    id: str
    background: str
    series: tuple[str, ...]
    text_color: str

    def __post_init__(self):
        if len(self.series) < 6:
            raise ValueError(f"palette {self.id}: needs >= 6 series colors")
        for c in (self.background, self.text_color, *self.series):
            if not _HEX_COLOR.match(c):
                raise ValueError(f"palette {self.id}: bad color {c!r}")


@dataclass(frozen=True)
class AssetManifest:
    root: str
    counts: dict[str, int]
    format_version: int


@dataclass(frozen=True)
class AssetStore:
    manifest: AssetManifest
    layouts: tuple[VifLayout, ...]
    vgs: tuple[VgDesign, ...]
    connections: tuple[ConnectionDesign, ...]
    palettes: tuple[Palette, ...]
    c_vif_documents: dict[str, tuple[int, ...]]
    pivots: dict[str, str] = field(default_factory=dict)  # id -> svg text

    def layout(self, layout_id: str) -> VifLayout | None:
        return self._layout_index.get(layout_id)

    def vg(self, design_id: str) -> VgDesign | None:
        return self._vg_index.get(design_id)

    def connection(self, design_id: str) -> ConnectionDesign | None:
        return self._conn_index.get(design_id)

    def palette(self, palette_id: str) -> Palette | None:
        return self._palette_index.get(palette_id)

    @property
    def root(self) -> Path:
        return Path(self.manifest.root)

    def __post_init__(self):
        object.__setattr__(self, "_layout_index", {l.id: l for l in self.layouts})
        object.__setattr__(self, "_vg_index", {d.id: d for d in self.vgs})
        object.__setattr__(self, "_conn_index", {c.id: c for c in self.connections})
        object.__setattr__(self, "_palette_index", {p.id: p for p in self.palettes})


def _read_json(path: Path):
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise CorruptAsset(str(path.name), f"unreadable JSON: {exc}") from exc


def _element_ids(svg_text: str, file: str) -> set[str]:
    try:
        root = ET.fromstring(svg_text)
    except ET.ParseError as exc:
        raise CorruptAsset(file, f"not well-formed XML: {exc}") from exc
    return {el.get("id") for el in root.iter() if el.get("id")}


def _load_layout(path: Path) -> VifLayout:
    data = _read_json(path)
    try:
        return VifLayout(
            id=data["id"],
            points=tuple((float(x), float(y)) for x, y in data["points"]),
            cluster_id=data.get("cluster"),
            source=data.get("source", "authored"),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptAsset(path.name, str(exc)) from exc


def _load_vg(svg_path: Path) -> VgDesign:
    meta_path = svg_path.parent / (svg_path.stem + ".meta.json")
    if not meta_path.exists():
        raise CorruptAsset(svg_path.name, "missing .meta.json sidecar")
    meta = _read_json(meta_path)
    svg_text = svg_path.read_text(encoding="utf-8")
    ids = _element_ids(svg_text, svg_path.name)
    try:
        placeholders = {
            slot: tuple(float(v) for v in rect) for slot, rect in meta["placeholders"].items()
        }
        design = VgDesign(
            id=meta["id"],
            svg_doc=svg_text,
            placeholders=placeholders,
            anchor=tuple(meta["anchor"]) if "anchor" in meta else (meta["native_size"][0] / 2.0, float(meta["native_size"][1])),
            native_size=tuple(float(v) for v in meta["native_size"]),
            clusters=tuple(int(c) for c in meta["clusters"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptAsset(meta_path.name, str(exc)) from exc
    for slot in design.placeholders:
        if slot not in SLOTS:
            raise CorruptAsset(meta_path.name, f"unknown placeholder slot {slot!r}")
        if f"ph-{slot}" not in ids:
            raise CorruptAsset(svg_path.name, f"declared slot {slot!r} has no ph-{slot} element")
    if not design.placeholders:
        raise CorruptAsset(meta_path.name, "design declares no placeholders")
    if not design.clusters:
        raise CorruptAsset(meta_path.name, "design belongs to no clusters")
    for c in design.clusters:
        if not (0 <= c < NUM_VIF_CLASSES):
            raise CorruptAsset(meta_path.name, f"cluster id {c} out of range")
    return design


def _load_connection(svg_path: Path) -> ConnectionDesign:
    meta_path = svg_path.parent / (svg_path.stem + ".meta.json")
    if not meta_path.exists():
        raise CorruptAsset(svg_path.name, "missing .meta.json sidecar")
    meta = _read_json(meta_path)
    svg_text = svg_path.read_text(encoding="utf-8")
    _element_ids(svg_text, svg_path.name)  # well-formedness check
    try:
        design = ConnectionDesign(
            id=meta["id"],
            svg_doc=svg_text,
            style_class=meta["style_class"],
            native_length_axis=meta.get("native_length_axis", "x"),
            native_size=tuple(float(v) for v in meta["native_size"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptAsset(meta_path.name, str(exc)) from exc
    if design.style_class not in CONNECTION_STYLES or design.style_class == "None":
        raise CorruptAsset(meta_path.name, f"bad style_class {design.style_class!r}")
    if design.native_length_axis not in ("x", "y"):
        raise CorruptAsset(meta_path.name, f"bad native_length_axis {design.native_length_axis!r}")
    return design


def load_corpus(root: str | Path) -> AssetStore:
    """Load and validate every asset under ``root``; raises on the first bad file."""
    root = Path(root)
    manifest_path = root / "manifest.json"
    if not manifest_path.exists():
        raise MissingManifest(f"no manifest.json under {root}")
    manifest_data = _read_json(manifest_path)
    version = manifest_data.get("format_version")
    if version != FORMAT_VERSION:
        raise VersionMismatch(f"corpus format {version}, supported {FORMAT_VERSION}")

    layouts = tuple(sorted((_load_layout(p) for p in sorted((root / "layouts").glob("*.json"))), key=lambda l: l.id))
    vgs = tuple(sorted((_load_vg(p) for p in sorted((root / "vgs").glob("*.svg"))), key=lambda d: d.id))
    connections = tuple(
        sorted((_load_connection(p) for p in sorted((root / "connections").glob("*.svg"))), key=lambda c: c.id)
    )

    palettes_path = root / "palettes.json"
    if not palettes_path.exists():
        raise CorruptAsset("palettes.json", "missing")
    try:
        palettes = tuple(
            sorted(
                (
                    Palette(
                        id=p["id"],
                        background=p["background"],
                        series=tuple(p["series"]),
                        text_color=p["text_color"],
                    )
                    for p in _read_json(palettes_path)
                ),
                key=lambda p: p.id,
            )
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptAsset("palettes.json", str(exc)) from exc

    c_vif_path = root / "c_vif.json"
    c_vif: dict[str, tuple[int, ...]] = {}
    if c_vif_path.exists():
        raw = _read_json(c_vif_path)
        for style, clusters in raw.items():
            if style not in CONNECTION_STYLES:
                raise CorruptAsset("c_vif.json", f"unknown style {style!r}")
            c_vif[style] = tuple(int(c) for c in clusters)

    pivots: dict[str, str] = {}
    for path in sorted((root / "pivots").glob("*.svg")):
        text = path.read_text(encoding="utf-8")
        _element_ids(text, path.name)  # well-formedness check
        pivots[path.stem] = text

    for kind, found in (
        ("layouts", len(layouts)),
        ("vgs", len(vgs)),
        ("connections", len(connections)),
        ("palettes", len(palettes)),
        ("pivots", len(pivots)),
    ):
        declared = manifest_data.get("counts", {}).get(kind)
        if declared is not None and declared != found:
            raise CorruptAsset("manifest.json", f"declares {declared} {kind}, found {found}")

    for rel, digest in manifest_data.get("checksums", {}).items():
        target = root / rel
        if not target.exists():
            raise CorruptAsset(rel, "listed in manifest but missing on disk")
        actual = hashlib.sha256(target.read_bytes()).hexdigest()
        if actual != digest:
            raise CorruptAsset(rel, "checksum mismatch")

    seen: set[str] = set()
    for item in (*layouts, *vgs, *connections, *palettes):
        if item.id in seen:
            raise CorruptAsset(item.id, "duplicate asset id")
        seen.add(item.id)

    manifest = AssetManifest(
        root=str(root),
        counts={
            "layouts": len(layouts),
            "vgs": len(vgs),
            "connections": len(connections),
            "palettes": len(palettes),
            "pivots": len(pivots),
        },
        format_version=version,
    )
    return AssetStore(
        manifest=manifest,
        layouts=layouts,
        vgs=vgs,
        connections=connections,
        palettes=palettes,
        c_vif_documents=c_vif,
        pivots=pivots,
    )


def layouts_with_count(store: AssetStore, n: int) -> list[VifLayout]:
    """All layouts with exactly n points, in id order."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return [l for l in store.layouts if len(l.points) == n]


def vgs_matching(store: AssetStore, sig: ComponentSignature) -> list[VgDesign]:
    """Designs whose slot set covers every component the content needs."""
    return [d for d in store.vgs if d.signature.is_superset_of(sig)]


def connections_of_style(store: AssetStore, style: str) -> list[ConnectionDesign]:
    return [c for c in store.connections if c.style_class == style]
