"""Planar primitives behind layout scoring, sketch matching, and placement.

Canvas coordinates are normalized fractions in [0, 1] with the origin at the
top-left corner and y growing downward (the SVG convention). Raw sketch
strokes may arrive in pixel space; ``normalize_unit_box`` brings any point
sequence into the canonical frame.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import StrokeTooShort

Point = tuple[float, float]

# Minimum turn (degrees) for a stroke vertex to count as a corner, the
# moving-average window that suppresses pen jitter before detection, and the
# minimum perpendicular offset (as a fraction of the stroke's bbox diagonal)
# separating a corner from jitter-scale bumps. Support radii are capped at a
# tenth of the stroke so one vertex cannot swallow its neighbors. Detection
# errs toward sensitivity: an extra corner sitting on the path is harmless
# downstream, a missed one flattens the path.
CORNER_MIN_TURN_DEG = 12.0
STROKE_SMOOTH_WINDOW = 5
CORNER_MIN_OFFSET_FRAC = 0.012
SUPPORT_CAP_FRAC = 0.1


@dataclass(frozen=True)
class BBox:
    """Axis-aligned box in canvas fractions; top-left anchored."""

    x: float
    y: float
    w: float
    h: float

    def __post_init__(self):
        if self.w <= 0 or self.h <= 0:
            raise ValueError(f"bbox sides must be positive, got {self.w}x{self.h}")
        if not (0 <= self.x and 0 <= self.y and self.x + self.w <= 1 + 1e-9 and self.y + self.h <= 1 + 1e-9):
            raise ValueError("bbox must lie inside the unit canvas")

    @property
    def center(self) -> Point:
        return (self.x + self.w / 2.0, self.y + self.h / 2.0)

    def contains(self, p: Point) -> bool:
        # Boundary counts as inside.
        return self.x <= p[0] <= self.x + self.w and self.y <= p[1] <= self.y + self.h

    def intersects(self, other: "BBox") -> bool:
        return not (
            self.x + self.w <= other.x
            or other.x + other.w <= self.x
            or self.y + self.h <= other.y
            or other.y + other.h <= self.y
        )


@dataclass(frozen=True)
class Canvas:
    width_px: int
    height_px: int
    background: str = "#ffffff"

    def __post_init__(self):
        if self.width_px < 64 or self.height_px < 64:
            raise ValueError("canvas must be at least 64x64 px")


def dist(a: Point, b: Point) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def dedupe_consecutive(points: list[Point]) -> list[Point]:
    """Drop consecutive duplicates; the polyline invariant."""
    out: list[Point] = []
    for p in points:
        if not out or p != out[-1]:
            out.append(p)
    return out


def cross(o: Point, a: Point, b: Point) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points: list[Point]) -> list[Point]:
    """Hull vertices in counter-clockwise order (monotone chain).

    Counter-clockwise is meant in the mathematical sense on raw coordinates;
    under the y-down canvas convention it renders clockwise. Degenerate
    inputs return the degenerate hull: a single point or the two extreme
    endpoints of a collinear set.
    """
    if not points:
        raise ValueError("convex_hull needs at least one point")
    pts = sorted(set(points))
    if len(pts) == 1:
        return [pts[0]]

    def half(seq):
        chain: list[Point] = []
        for p in seq:
            while len(chain) >= 2 and cross(chain[-2], chain[-1], p) <= 0:
                chain.pop()
            chain.append(p)
        return chain

    lower = half(pts)
    upper = half(reversed(pts))
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 2:  # all points collinear; keep the extreme endpoints
        return [pts[0], pts[-1]]
    return hull


def polygon_area(polygon: list[Point]) -> float:
    """Shoelace area; 0 for degenerate hulls (points and segments)."""
    if len(polygon) < 3:
        return 0.0
    s = 0.0
    for i, (x0, y0) in enumerate(polygon):
        x1, y1 = polygon[(i + 1) % len(polygon)]
        s += x0 * y1 - x1 * y0
    return abs(s) / 2.0


def point_in_hull(p: Point, hull: list[Point], tol: float = 1e-9) -> bool:
    if len(hull) == 1:
        return dist(p, hull[0]) <= tol
    if len(hull) == 2:
        a, b = hull
        if abs(cross(a, b, p)) > tol:
            return False
        lo = min(a[0], b[0]) - tol, min(a[1], b[1]) - tol
        hi = max(a[0], b[0]) + tol, max(a[1], b[1]) + tol
        return lo[0] <= p[0] <= hi[0] and lo[1] <= p[1] <= hi[1]
    return all(cross(hull[i], hull[(i + 1) % len(hull)], p) >= -tol for i in range(len(hull)))


def arc_lengths(points: list[Point]) -> list[float]:
    """Cumulative arc length along the polyline, starting at 0."""
    acc = [0.0]
    for a, b in zip(points, points[1:]):
        acc.append(acc[-1] + dist(a, b))
    return acc


def resample_to_n(points: list[Point], n: int) -> list[Point]:
    """n points equally spaced by arc length; endpoints preserved exactly."""
    if len(points) < 2:
        raise ValueError("resample_to_n needs at least 2 input points")
    if n < 2:
        raise ValueError("resample_to_n needs n >= 2")
    acc = arc_lengths(points)
    total = acc[-1]
    if total == 0.0:
        return [points[0]] * n
    out: list[Point] = [points[0]]
    seg = 0
    for i in range(1, n - 1):
        target = total * i / (n - 1)
        while acc[seg + 1] < target:
            seg += 1
        span = acc[seg + 1] - acc[seg]
        t = 0.0 if span == 0 else (target - acc[seg]) / span
        a, b = points[seg], points[seg + 1]
        out.append((a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t))
    out.append(points[-1])
    return out


def normalize_unit_box(points: list[Point]) -> list[Point]:
    """Fit points into [0,1]^2 with uniform scale, centered on the short axis."""
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    minx, maxx = min(xs), max(xs)
    miny, maxy = min(ys), max(ys)
    w, h = maxx - minx, maxy - miny
    span = max(w, h)
    if span == 0.0:
        return [(0.5, 0.5)] * len(points)
    s = 1.0 / span
    ox = (1.0 - w * s) / 2.0
    oy = (1.0 - h * s) / 2.0
    return [((x - minx) * s + ox, (y - miny) * s + oy) for x, y in points]


def smooth_polyline(points: list[Point], window: int = STROKE_SMOOTH_WINDOW) -> list[Point]:
    """Moving average with the window clipped at the ends; endpoints kept."""
    n = len(points)
    if n <= 2 or window <= 1:
        return list(points)
    half_w = window // 2
    out: list[Point] = [points[0]]
    for i in range(1, n - 1):
        lo = max(0, i - half_w)
        hi = min(n, i + half_w + 1)
        k = hi - lo
        out.append((
            sum(p[0] for p in points[lo:hi]) / k,
            sum(p[1] for p in points[lo:hi]) / k,
        ))
    out.append(points[-1])
    return out


def _perp_distance(p: Point, a: Point, b: Point) -> float:
    l = dist(a, b)
    if l == 0.0:
        return dist(p, a)
    return abs(cross(a, b, p)) / l


def dominant_points(
    stroke: list[Point],
    min_turn_deg: float = CORNER_MIN_TURN_DEG,
    smooth_window: int = STROKE_SMOOTH_WINDOW,
    min_offset_frac: float = CORNER_MIN_OFFSET_FRAC,
) -> list[Point]:
    """Corner and endpoint extraction for freehand strokes.

    Region-of-support detection: each interior vertex grows a symmetric
    support window while the chord through it keeps lengthening and the
    perpendicular-offset ratio keeps rising; the turn magnitude over that
    support is then scored and non-maxima inside the support are suppressed.
    Detection runs on a smoothed copy but the returned points are the
    original stroke samples, so corner positions stay unbiased. Endpoints
    are always returned. Vertices turning less than ``min_turn_deg``, or
    offset from their support chord by less than ``min_offset_frac`` of the
    stroke's bbox diagonal, are treated as drawing noise.
    """
    raw = dedupe_consecutive(list(stroke))
    if len(raw) < 2:
        raise StrokeTooShort(f"stroke has {len(raw)} distinct points, need >= 2")
    pts = smooth_polyline(raw, smooth_window)
    n = len(pts)
    if n <= 2:
        return [raw[0], raw[-1]]

    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    diag = math.hypot(max(xs) - min(xs), max(ys) - min(ys))
    min_offset = min_offset_frac * diag

    # Region of support per interior vertex: grow the window while the
    # chord through it keeps lengthening (pen noise cannot sustain chord
    # growth, real legs can), up to the global cap.
    support = [0] * n
    offset = [0.0] * n
    cap = max(1, int(n * SUPPORT_CAP_FRAC))
    for i in range(1, n - 1):
        kmax = min(i, n - 1 - i, cap)
        best_k = 1
        prev_l = dist(pts[i - 1], pts[i + 1])
        best_d = _perp_distance(pts[i], pts[i - 1], pts[i + 1])
        for k in range(2, kmax + 1):
            l = dist(pts[i - k], pts[i + k])
            if l < prev_l:
                break
            best_k, prev_l = k, l
            best_d = _perp_distance(pts[i], pts[i - k], pts[i + k])
        support[i] = best_k
        offset[i] = best_d

    # Turn angle over the support window: pi minus the angle between the
    # incoming and outgoing chords. Straight sections score ~0.
    turn = [0.0] * n
    for i in range(1, n - 1):
        k = support[i]
        ax, ay = pts[i - k][0] - pts[i][0], pts[i - k][1] - pts[i][1]
        bx, by = pts[i + k][0] - pts[i][0], pts[i + k][1] - pts[i][1]
        na, nb = math.hypot(ax, ay), math.hypot(bx, by)
        if na == 0 or nb == 0:
            continue
        c = max(-1.0, min(1.0, (ax * bx + ay * by) / (na * nb)))
        turn[i] = math.pi - math.acos(c)

    # Greedy non-maxima suppression: sharper corners claim their support
    # window first, so a shoulder point straddling a sharp corner cannot
    # suppress a genuine shallow vertex further away.
    min_turn = math.radians(min_turn_deg)
    candidates = [i for i in range(1, n - 1) if turn[i] >= min_turn and offset[i] >= min_offset]
    candidates.sort(key=lambda i: (-turn[i], i))
    keep: list[int] = []
    for i in candidates:
        if all(abs(i - j) > max(support[i], support[j]) for j in keep):
            keep.append(i)
    keep.sort()

    # Collapse corner clusters that survived suppression closer than the
    # smoothing scale; keep the sharper one.
    merged: list[int] = []
    for i in keep:
        if merged and i - merged[-1] <= smooth_window:
            if turn[i] > turn[merged[-1]]:
                merged[-1] = i
        else:
            merged.append(i)

    # Refine with leg windows clamped at neighboring corners.
    out: list[Point] = [raw[0]]
    bounds = [0] + merged + [n - 1]
    for j, i in enumerate(merged, start=1):
        w = min(cap, i - bounds[j - 1], bounds[j + 1] - i)
        out.append(_refine_corner(raw, i, max(w, support[i])))
    out.append(raw[-1])
    return out


def _fit_line(points: list[Point]):
    """Total-least-squares line through points: (centroid, unit direction)."""
    k = len(points)
    mx = sum(p[0] for p in points) / k
    my = sum(p[1] for p in points) / k
    sxx = sum((p[0] - mx) ** 2 for p in points)
    syy = sum((p[1] - my) ** 2 for p in points)
    sxy = sum((p[0] - mx) * (p[1] - my) for p in points)
    # Principal eigenvector of the 2x2 scatter matrix.
    theta = 0.5 * math.atan2(2 * sxy, sxx - syy)
    return (mx, my), (math.cos(theta), math.sin(theta))


def _refine_corner(raw: list[Point], i: int, k: int) -> Point:
    """Intersect line fits of the two legs around a detected corner index.

    Sample quantization puts the argmax a step or two off the true corner;
    the leg intersection is unbiased. Falls back to the raw sample when the
    legs are too short or near-parallel.
    """
    tip_gap = 2  # skip the rounded tip samples nearest the corner
    lo = max(0, i - k)
    hi = min(len(raw), i + k + 1)
    left = raw[lo : i - tip_gap + 1]
    right = raw[i + tip_gap : hi]
    if len(left) < 3 or len(right) < 3:
        return raw[i]
    (ax, ay), (ux, uy) = _fit_line(left)
    (bx, by), (vx, vy) = _fit_line(right)
    denom = ux * vy - uy * vx
    if abs(denom) < 1e-6:
        return raw[i]
    t = ((bx - ax) * vy - (by - ay) * vx) / denom
    cand = (ax + t * ux, ay + t * uy)
    # Reject wild intersections from noisy near-parallel legs.
    spacing = dist(raw[lo], raw[i]) / max(1, i - lo)
    if dist(cand, raw[i]) > 6.0 * spacing:
        return raw[i]
    return cand
