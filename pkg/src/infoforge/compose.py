"""Stage 3: place and rotate groups on the layout, pour in content, draw
connections, and emit the final SVG document.

Placement maps each design's anchor onto its layout vertex. With a pivot
every group rotates so the design's canonical "up" vector faces the pivot
center; the content inside counter-rotates about the group center so text
and images always render upright. One uniform scale is chosen for all
groups by bisection: the largest footprint that keeps every group inside
the canvas, off the pivot box, and free of pairwise overlap.

Rendering is deterministic: identical inputs and seed produce identical
bytes, and the embedded provenance block is sufficient to reproduce the
document.
"""

from __future__ import annotations

import base64
import json
import math
import re
import warnings
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from pathlib import Path

from .assets import AssetStore, ConnectionDesign, Palette, VgDesign, VifLayout
from .color import tint
from .content import VgContent, signature_of
from .errors import PivotRequired, Unplaceable, ZeroLengthSegmentWarning
from .geometry import Canvas, Point, dist
from .layout_rank import EnergyWeights, PivotPlacement, pivot_center
from .textfit import LINE_HEIGHT, fit_text

# Footprint budget: at scale 1.0 a group's longer side takes this fraction
# of the smaller canvas dimension.
FOOTPRINT_FRAC = 0.22
SCALE_MIN, SCALE_MAX = 0.25, 1.0
CONNECTION_LENGTH_FACTOR = 0.8
FLOWSHAPE_OFFSET = 0.35  # along each segment, from the center side
CONNECTION_THICKNESS_FRAC = 0.035  # thickness cap vs min canvas dimension

_FONT_FAMILY = "Helvetica, Arial, sans-serif"
_NS_RE = re.compile(r"\{[^}]*\}")


@dataclass(frozen=True)
class VgTransform:
    item_index: int
    position: Point       # canvas-fraction target for the design anchor
    rotation_deg: float   # clockwise, y-down; 0 keeps the design upright
    scale: float          # uniform, relative to the nominal footprint

    def as_dict(self) -> dict:
        return {
            "item_index": self.item_index,
            "position": list(self.position),
            "rotation_deg": self.rotation_deg,
            "scale": self.scale,
        }


@dataclass(frozen=True)
class ConnectionInstance:
    design_id: str | None
    style: str
    placement: Point
    angle_deg: float
    length: float         # canvas-fraction length after the length factor
    p0: Point             # decorated span endpoints, canvas fractions
    p1: Point


@dataclass(frozen=True)
class AssembledInfographic:
    svg_doc: str
    provenance: dict
    transforms: tuple[VgTransform, ...]


def facing_rotation_deg(position: Point, center: Point) -> float:
    """Clockwise degrees rotating the canonical up vector (0,-1) onto the
    direction from position to center."""
    vx, vy = center[0] - position[0], center[1] - position[1]
    if vx == 0 and vy == 0:
        return 0.0
    return math.degrees(math.atan2(vx, -vy)) % 360.0


def _design_bbox_px(
    design: VgDesign,
    position: Point,
    rotation_deg: float,
    scale: float,
    canvas: Canvas,
) -> tuple[float, float, float, float]:
    """Axis-aligned pixel bounds of the placed design rectangle."""
    w, h = design.native_size
    ax, ay = design.anchor
    f = scale * FOOTPRINT_FRAC * min(canvas.width_px, canvas.height_px) / max(w, h)
    px, py = position[0] * canvas.width_px, position[1] * canvas.height_px
    theta = math.radians(rotation_deg)
    cos_t, sin_t = math.cos(theta), math.sin(theta)
    xs, ys = [], []
    for cx, cy in ((0, 0), (w, 0), (w, h), (0, h)):
        lx, ly = (cx - ax) * f, (cy - ay) * f
        xs.append(px + lx * cos_t - ly * sin_t)
        ys.append(py + lx * sin_t + ly * cos_t)
    return min(xs), min(ys), max(xs), max(ys)


def _boxes_overlap(a, b) -> bool:
    return a[0] < b[2] and b[0] < a[2] and a[1] < b[3] and b[1] < a[3]


def compute_transforms(
    layout: VifLayout,
    canvas: Canvas,
    design: VgDesign,
    n: int,
    pivot: PivotPlacement | None = None,
) -> list[VgTransform]:
    """Anchor positions, facing rotations, and one shared scale for n groups."""
    if len(layout.points) != n:
        raise ValueError(f"layout has {len(layout.points)} vertices, content has {n} items")
    center = pivot_center(pivot.bbox) if pivot else None
    rotations = [
        facing_rotation_deg(p, center) if center is not None else 0.0 for p in layout.points
    ]

    pivot_px = None
    if pivot is not None:
        b = pivot.bbox
        pivot_px = (
            b.x * canvas.width_px,
            b.y * canvas.height_px,
            (b.x + b.w) * canvas.width_px,
            (b.y + b.h) * canvas.height_px,
        )

    def feasible(s: float) -> bool:
        boxes = [
            _design_bbox_px(design, p, r, s, canvas)
            for p, r in zip(layout.points, rotations)
        ]
        for box in boxes:
            if box[0] < 0 or box[1] < 0 or box[2] > canvas.width_px or box[3] > canvas.height_px:
                return False
            if pivot_px is not None and _boxes_overlap(box, pivot_px):
                return False
        for i in range(len(boxes)):
            for j in range(i + 1, len(boxes)):
                if _boxes_overlap(boxes[i], boxes[j]):
                    return False
        return True

    if not feasible(SCALE_MIN):
        raise Unplaceable(f"groups cannot be placed without overlap at scale {SCALE_MIN}")
    if feasible(SCALE_MAX):
        scale = SCALE_MAX
    else:
        lo, hi = SCALE_MIN, SCALE_MAX
        for _ in range(48):
            mid = (lo + hi) / 2.0
            if feasible(mid):
                lo = mid
            else:
                hi = mid
        scale = lo
    return [
        VgTransform(item_index=i, position=p, rotation_deg=r, scale=scale)
        for i, (p, r) in enumerate(zip(layout.points, rotations))
    ]


# -- svg helpers ------------------------------------------------------------------

def _fmt(x: float) -> str:
    s = f"{x:.2f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _strip_ns(el: ET.Element) -> ET.Element:
    for node in el.iter():
        node.tag = _NS_RE.sub("", node.tag)
        node.attrib = {_NS_RE.sub("", k): v for k, v in node.attrib.items()}
    return el


def _parse_svg(svg_text: str) -> ET.Element:
    return _strip_ns(ET.fromstring(svg_text))


def _view_box(svg_root: ET.Element) -> tuple[float, float, float, float]:
    vb = svg_root.get("viewBox")
    if vb:
        x, y, w, h = (float(v) for v in vb.replace(",", " ").split())
        return x, y, w, h
    return 0.0, 0.0, float(svg_root.get("width", 100)), float(svg_root.get("height", 100))


def _apply_theme(el: ET.Element, series_color: str, muted_color: str):
    for node in el.iter():
        role = node.get("data-fill")
        if role == "series":
            node.set("fill", series_color)
            del node.attrib["data-fill"]
            if node.get("stroke") not in (None, "none"):
                node.set("stroke", series_color)
        elif role == "muted":
            node.set("fill", muted_color)
            del node.attrib["data-fill"]


def _text_block(
    content: str,
    rect: tuple[float, float, float, float],
    color: str,
    weight: str = "400",
    min_font: float = 6.0,
) -> ET.Element:
    x, y, w, h = rect
    size, lines, _ = fit_text(content, w, h, min_font=min_font)
    group = ET.Element("g")
    block_h = len(lines) * size * LINE_HEIGHT
    top = y + (h - block_h) / 2.0
    for i, line in enumerate(lines):
        text = ET.SubElement(
            group,
            "text",
            {
                "x": _fmt(x + w / 2.0),
                "y": _fmt(top + (i + 0.8) * size * LINE_HEIGHT),
                "font-family": _FONT_FAMILY,
                "font-size": _fmt(size),
                "font-weight": weight,
                "fill": color,
                "text-anchor": "middle",
            },
        )
        text.text = line
    return group


_MIME = {".png": "image/png", ".jpg": "image/jpeg", ".jpeg": "image/jpeg", ".gif": "image/gif"}


def _image_element(ref: str, rect, root: Path | None) -> ET.Element | None:
    """Embedded image fitted into rect, or None when the ref cannot be read."""
    x, y, w, h = rect
    href = None
    if ref.startswith("data:"):
        href = ref
    elif root is not None and not ref.startswith(("http:", "https:")):
        path = (root / ref).resolve()
        try:
            path.relative_to(root.resolve())
        except ValueError:
            return None
        if path.exists():
            if path.suffix == ".svg":
                inner = _parse_svg(path.read_text(encoding="utf-8"))
                vx, vy, vw, vh = _view_box(inner)
                s = min(w / vw, h / vh)
                g = ET.Element(
                    "g",
                    {
                        "transform": f"translate({_fmt(x + (w - vw * s) / 2)},{_fmt(y + (h - vh * s) / 2)}) "
                        f"scale({_fmt_scale(s)}) translate({_fmt(-vx)},{_fmt(-vy)})"
                    },
                )
                g.extend(list(inner))
                return g
            mime = _MIME.get(path.suffix.lower())
            if mime:
                href = f"data:{mime};base64,{base64.b64encode(path.read_bytes()).decode('ascii')}"
    if href is None:
        return None
    return ET.Element(
        "image",
        {
            "x": _fmt(x),
            "y": _fmt(y),
            "width": _fmt(w),
            "height": _fmt(h),
            "preserveAspectRatio": "xMidYMid meet",
            "href": href,
        },
    )


def _placeholder_glyph(rect) -> ET.Element:
    x, y, w, h = rect
    g = ET.Element("g")
    ET.SubElement(g, "rect", {
        "x": _fmt(x), "y": _fmt(y), "width": _fmt(w), "height": _fmt(h),
        "fill": "#d0d4d9", "rx": _fmt(min(w, h) * 0.08),
    })
    ET.SubElement(g, "circle", {
        "cx": _fmt(x + w * 0.35), "cy": _fmt(y + h * 0.35), "r": _fmt(min(w, h) * 0.12),
        "fill": "#f2f3f5",
    })
    ET.SubElement(g, "path", {
        "d": f"M{_fmt(x + w * 0.12)},{_fmt(y + h * 0.85)} L{_fmt(x + w * 0.45)},{_fmt(y + h * 0.5)} "
        f"L{_fmt(x + w * 0.68)},{_fmt(y + h * 0.72)} L{_fmt(x + w * 0.88)},{_fmt(y + h * 0.52)} "
        f"V{_fmt(y + h * 0.85)} Z",
        "fill": "#f2f3f5",
    })
    return g


def _fmt_scale(s: float) -> str:
    out = f"{s:.5f}".rstrip("0").rstrip(".")
    return out if out else "0"


def embed_content(
    design: VgDesign,
    item: VgContent,
    transform: VgTransform,
    canvas: Canvas,
    series_color: str,
    text_color: str,
    assets_root: Path | None = None,
) -> ET.Element:
    """One placed group: themed decoration plus upright fitted content.

    Placeholder rects declared by the design are consumed: slots the item
    fills receive fitted text or an image, unused slots are removed. The
    content sub-group carries the inverse rotation about the design center
    so it renders axis-aligned regardless of facing.
    """
    if not design.signature.is_superset_of(signature_of(item)):
        raise ValueError(f"design {design.id} lacks slots for item {transform.item_index}")
    w, h = design.native_size
    ax, ay = design.anchor
    f = transform.scale * FOOTPRINT_FRAC * min(canvas.width_px, canvas.height_px) / max(w, h)
    px = transform.position[0] * canvas.width_px
    py = transform.position[1] * canvas.height_px

    root = _parse_svg(design.svg_doc)
    _apply_theme(root, series_color, tint(series_color, 0.85))

    group = ET.Element(
        "g",
        {
            "id": f"vg-{transform.item_index}",
            "transform": (
                f"translate({_fmt(px)},{_fmt(py)}) rotate({_fmt(transform.rotation_deg)}) "
                f"scale({_fmt_scale(f)}) translate({_fmt(-ax)},{_fmt(-ay)})"
            ),
        },
    )
    content = ET.Element("g")
    if transform.rotation_deg != 0.0:
        content.set(
            "transform",
            f"rotate({_fmt(-transform.rotation_deg)} {_fmt(w / 2)} {_fmt(h / 2)})",
        )

    values = {
        "title": item.title,
        "text": item.text,
        "label": item.label,
        "image": item.image_ref,
    }
    weights = {"title": "700", "text": "400", "label": "700"}
    for slot, rect in design.placeholders.items():
        value = values.get(slot)
        if value is None:
            continue
        if slot == "image":
            el = _image_element(value, rect, assets_root) or _placeholder_glyph(rect)
        else:
            el = _text_block(value, rect, text_color, weight=weights[slot])
        content.append(el)

    # move decoration in, drop every placeholder element
    for child in list(root):
        group.append(child)
    for parent in group.iter():
        for child in [c for c in list(parent) if (c.get("id") or "").startswith("ph-")]:
            parent.remove(child)
    group.append(content)
    return group


# -- connections ----------------------------------------------------------------------

def _segment_instances(segments, style, design_id):
    out = []
    for p0, p1 in segments:
        length = dist(p0, p1)
        if length == 0.0:
            warnings.warn("skipped connection over coincident points", ZeroLengthSegmentWarning, stacklevel=3)
            continue
        mid = ((p0[0] + p1[0]) / 2.0, (p0[1] + p1[1]) / 2.0)
        angle = math.degrees(math.atan2(p1[1] - p0[1], p1[0] - p0[0]))
        out.append(
            ConnectionInstance(
                design_id=design_id,
                style=style,
                placement=mid,
                angle_deg=angle,
                length=length * CONNECTION_LENGTH_FACTOR,
                p0=p0,
                p1=p1,
            )
        )
    return out


def generate_connections(
    style: str,
    design: ConnectionDesign | None,
    layout: VifLayout,
    pivot: PivotPlacement | None,
    transforms: list[VgTransform],
) -> list[ConnectionInstance]:
    """Connection geometry per style; see the style taxonomy in the README.

    Regular decorates every flow segment at its midpoint, Alternate every
    other segment, Pivot joins the pivot center to every group, FlowShape
    sits at 35% along each segment from whichever end is nearer the pivot
    (or canvas) center.
    """
    if style == "None":
        raise ValueError("style 'None' draws no connections")
    design_id = design.id if design else None
    points = [t.position for t in transforms] if transforms else list(layout.points)
    segments = list(zip(points, points[1:]))

    if style == "Regular":
        return _segment_instances(segments, style, design_id)
    if style == "Alternate":
        return _segment_instances(segments[::2], style, design_id)
    if style == "Pivot":
        if pivot is None:
            raise PivotRequired("pivot connections need a pivot placement")
        center = pivot_center(pivot.bbox)
        out = []
        for p in points:
            length = dist(center, p)
            if length == 0.0:
                warnings.warn("skipped connection over coincident points", ZeroLengthSegmentWarning, stacklevel=2)
                continue
            mid = ((center[0] + p[0]) / 2.0, (center[1] + p[1]) / 2.0)
            angle = math.degrees(math.atan2(p[1] - center[1], p[0] - center[0]))
            out.append(
                ConnectionInstance(
                    design_id=design_id,
                    style=style,
                    placement=mid,
                    angle_deg=angle,
                    length=length * CONNECTION_LENGTH_FACTOR,
                    p0=center,
                    p1=p,
                )
            )
        return out
    if style == "FlowShape":
        center = pivot_center(pivot.bbox) if pivot else (0.5, 0.5)
        out = []
        for p0, p1 in segments:
            length = dist(p0, p1)
            if length == 0.0:
                warnings.warn("skipped connection over coincident points", ZeroLengthSegmentWarning, stacklevel=2)
                continue
            near, far = (p0, p1) if dist(p0, center) <= dist(p1, center) else (p1, p0)
            spot = (
                near[0] + (far[0] - near[0]) * FLOWSHAPE_OFFSET,
                near[1] + (far[1] - near[1]) * FLOWSHAPE_OFFSET,
            )
            angle = math.degrees(math.atan2(p1[1] - p0[1], p1[0] - p0[0]))
            out.append(
                ConnectionInstance(
                    design_id=design_id,
                    style=style,
                    placement=spot,
                    angle_deg=angle,
                    length=length * CONNECTION_LENGTH_FACTOR,
                    p0=p0,
                    p1=p1,
                )
            )
        return out
    raise ValueError(f"unknown connection style {style!r}")


def _render_connection(
    instance: ConnectionInstance,
    design: ConnectionDesign,
    canvas: Canvas,
    color: str,
) -> ET.Element:
    px = instance.placement[0] * canvas.width_px
    py = instance.placement[1] * canvas.height_px
    dx = (instance.p1[0] - instance.p0[0]) * canvas.width_px
    dy = (instance.p1[1] - instance.p0[1]) * canvas.height_px
    angle_px = math.degrees(math.atan2(dy, dx))
    length_px = math.hypot(dx, dy) * CONNECTION_LENGTH_FACTOR
    nw, nh = design.native_size
    if design.native_length_axis == "y":
        nw, nh = nh, nw
        angle_px -= 90.0
    sx = length_px / nw
    thickness = min(nh * sx, CONNECTION_THICKNESS_FRAC * min(canvas.width_px, canvas.height_px))
    sy = thickness / nh
    inner = _parse_svg(design.svg_doc)
    _apply_theme(inner, color, tint(color, 0.85))
    g = ET.Element(
        "g",
        {
            "transform": (
                f"translate({_fmt(px)},{_fmt(py)}) rotate({_fmt(angle_px)}) "
                f"translate({_fmt(-length_px / 2)},{_fmt(-thickness / 2)}) "
                f"scale({_fmt_scale(sx)} {_fmt_scale(sy)})"
            )
        },
    )
    g.extend(list(inner))
    return g


def _render_pivot(pivot: PivotPlacement, canvas: Canvas, store: AssetStore | None) -> ET.Element:
    b = pivot.bbox
    x, y = b.x * canvas.width_px, b.y * canvas.height_px
    w, h = b.w * canvas.width_px, b.h * canvas.height_px
    layer = ET.Element("g", {"id": "pivot-layer"})
    inner = None
    ref = pivot.graphic_ref
    if ref:
        if ref.lstrip().startswith("<svg"):
            inner = _parse_svg(ref)
        elif store is not None:
            path = (store.root / ref).resolve()
            try:
                path.relative_to(store.root.resolve())
            except ValueError:
                path = None
            if path and path.exists():
                inner = _parse_svg(path.read_text(encoding="utf-8"))
    if inner is not None:
        vx, vy, vw, vh = _view_box(inner)
        g = ET.SubElement(
            layer,
            "g",
            {
                "transform": f"translate({_fmt(x)},{_fmt(y)}) scale({_fmt_scale(w / vw)} {_fmt_scale(h / vh)}) "
                f"translate({_fmt(-vx)},{_fmt(-vy)})"
            },
        )
        g.extend(list(inner))
    else:
        ET.SubElement(layer, "ellipse", {
            "cx": _fmt(x + w / 2), "cy": _fmt(y + h / 2),
            "rx": _fmt(w / 2), "ry": _fmt(h / 2),
            "fill": "#c9ced6", "fill-opacity": "0.85",
        })
    return layer


def assemble(
    store: AssetStore,
    canvas: Canvas,
    layout: VifLayout,
    design: VgDesign,
    items: list[VgContent],
    palette: Palette,
    pivot: PivotPlacement | None = None,
    connection_style: str = "None",
    connection_design_id: str | None = None,
    infographic_title: str | None = None,
    weights: EnergyWeights = EnergyWeights(),
    seed: int = 0,
) -> AssembledInfographic:
    """Compose the final document; layering is background, pivot,
    connections, groups in flow order, then the title."""
    if len(items) != len(layout.points):
        raise ValueError(f"{len(items)} items vs {len(layout.points)} layout vertices")
    transforms = compute_transforms(layout, canvas, design, len(items), pivot)

    svg = ET.Element(
        "svg",
        {
            "xmlns": "http://www.w3.org/2000/svg",
            "viewBox": f"0 0 {canvas.width_px} {canvas.height_px}",
            "width": str(canvas.width_px),
            "height": str(canvas.height_px),
        },
    )
    provenance = {
        "layout_id": layout.id,
        "vg_design_id": design.id,
        "connection_style": connection_style,
        "connection_design_id": connection_design_id,
        "palette_id": palette.id,
        "alpha": weights.alpha,
        "seed": seed,
        "canvas": {"width_px": canvas.width_px, "height_px": canvas.height_px, "background": canvas.background},
        "pivot": None
        if pivot is None
        else {
            "bbox": [pivot.bbox.x, pivot.bbox.y, pivot.bbox.w, pivot.bbox.h],
            "graphic_ref": pivot.graphic_ref,
        },
        "infographic_title": infographic_title,
        "items": [
            {"title": i.title, "text": i.text, "label": i.label, "image": i.image_ref} for i in items
        ],
    }
    svg.append(ET.Comment("infoforge:provenance " + json.dumps(provenance, sort_keys=True)))

    ET.SubElement(svg, "rect", {
        "x": "0", "y": "0",
        "width": str(canvas.width_px), "height": str(canvas.height_px),
        "fill": canvas.background,
    })
    if pivot is not None:
        svg.append(_render_pivot(pivot, canvas, store))

    conn_layer = ET.SubElement(svg, "g", {"id": "connections"})
    if connection_style != "None":
        conn_design = store.connection(connection_design_id) if connection_design_id else None
        instances = generate_connections(connection_style, conn_design, layout, pivot, transforms)
        if conn_design is not None:
            conn_color = tint(palette.text_color, 0.35)
            for instance in instances:
                conn_layer.append(_render_connection(instance, conn_design, canvas, conn_color))

    vg_layer = ET.SubElement(svg, "g", {"id": "groups"})
    for i, (item, transform) in enumerate(zip(items, transforms)):
        vg_layer.append(
            embed_content(
                design,
                item,
                transform,
                canvas,
                series_color=palette.series[i % len(palette.series)],
                text_color=palette.text_color,
                assets_root=store.root if store.manifest.root else None,
            )
        )

    if infographic_title:
        title_rect = (
            canvas.width_px * 0.08,
            canvas.height_px * 0.015,
            canvas.width_px * 0.84,
            canvas.height_px * 0.055,
        )
        title_block = _text_block(infographic_title, title_rect, palette.text_color, weight="700", min_font=10.0)
        title_block.set("id", "infographic-title")
        svg.append(title_block)

    doc = '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(svg, encoding="unicode") + "\n"
    return AssembledInfographic(svg_doc=doc, provenance=provenance, transforms=tuple(transforms))
