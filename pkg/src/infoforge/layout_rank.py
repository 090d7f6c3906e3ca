"""Stage 1: rank corpus flow layouts against the canvas and pivot constraints.

A layout's score combines three terms: an overlap gate that zeroes anything
whose vertices touch the pivot box, a coverage term from the convex hull of
the vertex footprints, and a uniformity term from the spread of
vertex-to-center distances. Retrieval over the corpus replaces de-novo
layout optimization; a freehand stroke can substitute for the energy path
entirely, ranking layouts by distance to the stroke's resampled dominant
points instead.

All math runs in normalized canvas fractions, so rankings are independent
of the output's pixel dimensions.
"""

from __future__ import annotations

from dataclasses import dataclass

from .assets import AssetStore, VifLayout, layouts_with_count
from .errors import NoCandidates
from .geometry import (
    BBox,
    Point,
    convex_hull,
    dist,
    dominant_points,
    normalize_unit_box,
    polygon_area,
    resample_to_n,
)

# Nominal footprint (canvas fraction) a group occupies around its vertex;
# used by the padded coverage mode so straight-line layouts score nonzero.
VG_FOOTPRINT_SIDE = 0.1
CANVAS_CENTER: Point = (0.5, 0.5)
_DIAGONAL = 2.0 ** 0.5


@dataclass(frozen=True)
class EnergyWeights:
    """alpha weights coverage; 1 - alpha weights uniformity."""

    alpha: float = 0.5

    def __post_init__(self):
        if not (0.0 <= self.alpha <= 1.0):
            raise ValueError(f"alpha must be in [0, 1], got {self.alpha}")


@dataclass(frozen=True)
class PivotPlacement:
    bbox: BBox
    graphic_ref: str | None = None


@dataclass(frozen=True)
class LayoutScore:
    layout_id: str
    e_o: int
    e_c: float
    e_u_raw: float
    uniformity: float
    mean_distance: float
    vg_count: int
    e_l: float
    truncated: bool = False

    def as_dict(self) -> dict:
        return {
            "layout_id": self.layout_id,
            "e_o": self.e_o,
            "e_c": self.e_c,
            "e_u_raw": self.e_u_raw,
            "uniformity": self.uniformity,
            "mean_distance": self.mean_distance,
            "vg_count": self.vg_count,
            "e_l": self.e_l,
            "truncated": self.truncated,
        }


def pivot_center(bbox: BBox) -> Point:
    return bbox.center


def energy_overlap(layout: VifLayout, pivot: PivotPlacement | None) -> int:
    """1 when no vertex lies inside or on the pivot box (or there is none)."""
    if pivot is None:
        return 1
    return 0 if any(pivot.bbox.contains(p) for p in layout.points) else 1


def energy_coverage(layout: VifLayout, padded: bool = False) -> float:
    """Hull area over canvas area (canvas area is 1 in normalized space).

    Padded mode expands each vertex to its nominal footprint square before
    taking the hull, so collinear layouts keep a nonzero score; the result
    is clamped to [0, 1].
    """
    if padded:
        half = VG_FOOTPRINT_SIDE / 2.0
        pts = [
            (x + dx, y + dy)
            for x, y in layout.points
            for dx, dy in ((-half, -half), (half, -half), (half, half), (-half, half))
        ]
    else:
        pts = list(layout.points)
    return min(1.0, polygon_area(convex_hull(pts)))


def energy_uniformity(layout: VifLayout, center: Point) -> tuple[float, float, float]:
    """(raw variance, bounded uniformity, mean distance) of vertex spread.

    Distances to the center are normalized by the canvas diagonal; the raw
    term is their population variance (lower is better), mapped onto
    [0, 1] as uniformity = 1 - min(1, 4 * variance) so it can be combined
    with coverage where higher is better.
    """
    ds = [dist(p, center) / _DIAGONAL for p in layout.points]
    mean = sum(ds) / len(ds)
    var = sum((d - mean) ** 2 for d in ds) / len(ds)
    return var, 1.0 - min(1.0, 4.0 * var), mean


def energy_total(e_o: int, e_c: float, uniformity: float, alpha: float) -> float:
    return e_o * (alpha * e_c + (1.0 - alpha) * uniformity)


def score_layout(
    layout: VifLayout,
    pivot: PivotPlacement | None = None,
    weights: EnergyWeights = EnergyWeights(),
) -> LayoutScore:
    """Full energy decomposition for one layout.

    Scoring uses padded coverage and the bounded uniformity; without a pivot
    the canvas center anchors the uniformity term and the overlap gate is
    open.
    """
    center = pivot_center(pivot.bbox) if pivot else CANVAS_CENTER
    e_o = energy_overlap(layout, pivot)
    e_c = energy_coverage(layout, padded=True)
    e_u_raw, uniformity, mean_distance = energy_uniformity(layout, center)
    return LayoutScore(
        layout_id=layout.id,
        e_o=e_o,
        e_c=e_c,
        e_u_raw=e_u_raw,
        uniformity=uniformity,
        mean_distance=mean_distance,
        vg_count=len(layout.points),
        e_l=energy_total(e_o, e_c, uniformity, weights.alpha),
    )


def truncate_layout(layout: VifLayout, n: int) -> VifLayout:
    return VifLayout(
        id=layout.id,
        points=layout.points[:n],
        cluster_id=layout.cluster_id,
        source=layout.source,
    )


def rank_layouts(
    store: AssetStore,
    n_vgs: int,
    pivot: PivotPlacement | None = None,
    weights: EnergyWeights = EnergyWeights(),
    top_k: int = 4,
    allow_truncation: bool = False,
) -> list[LayoutScore]:
    """Energy-ranked candidates with exactly n_vgs vertices.

    With ``allow_truncation`` an empty candidate pool falls back to longer
    layouts cut to their first n_vgs vertices, flagged on the result.
    """
    if n_vgs < 1 or top_k < 1:
        raise ValueError("n_vgs and top_k must be >= 1")
    candidates = [(l, False) for l in layouts_with_count(store, n_vgs)]
    if not candidates and allow_truncation:
        candidates = [
            (truncate_layout(l, n_vgs), True) for l in store.layouts if len(l.points) > n_vgs
        ]
    if not candidates:
        raise NoCandidates(f"no layouts with {n_vgs} vertices")
    scored = []
    for layout, truncated in candidates:
        s = score_layout(layout, pivot, weights)
        if truncated:
            s = LayoutScore(**{**s.as_dict(), "truncated": True})
        scored.append(s)
    scored.sort(key=lambda s: (-s.e_l, s.layout_id))
    return scored[:top_k]


def _mean_pointwise_distance(a: list[Point], b: list[Point]) -> float:
    return sum(dist(p, q) for p, q in zip(a, b)) / len(a)


def match_sketch(
    store: AssetStore,
    stroke: list[Point],
    n_vgs: int,
    top_k: int = 4,
) -> list[tuple[str, float]]:
    """Nearest corpus layouts to a freehand stroke, closest first.

    The stroke is fit to the unit box preserving aspect, reduced to its
    dominant points, and resampled to n_vgs estimated vertex positions.
    Every candidate layout is canonicalized the same way; the distance is
    the mean pointwise gap, taken over both drawing directions so
    right-to-left strokes still find left-to-right layouts.
    """
    if n_vgs < 2:
        raise ValueError("sketch matching needs n_vgs >= 2")
    candidates = layouts_with_count(store, n_vgs)
    if not candidates:
        raise NoCandidates(f"no layouts with {n_vgs} vertices")
    probe = resample_to_n(dominant_points(normalize_unit_box(stroke)), n_vgs)
    results = []
    for layout in candidates:
        ref = normalize_unit_box(list(layout.points))
        d = min(
            _mean_pointwise_distance(probe, ref),
            _mean_pointwise_distance(probe, ref[::-1]),
        )
        results.append((layout.id, d))
    results.sort(key=lambda pair: (pair[1], pair[0]))
    return results[:top_k]
