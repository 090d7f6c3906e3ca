import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.spatial import ConvexHull, QhullError

from infoforge.assets import AssetManifest, AssetStore, VifLayout, load_corpus
from infoforge.errors import NoCandidates
from infoforge.geometry import BBox
from infoforge.layout_rank import (
    EnergyWeights,
    PivotPlacement,
    energy_coverage,
    energy_overlap,
    energy_total,
    energy_uniformity,
    match_sketch,
    pivot_center,
    rank_layouts,
    score_layout,
)


def make_store(layouts):
    return AssetStore(
        manifest=AssetManifest(root="", counts={}, format_version=1),
        layouts=tuple(sorted(layouts, key=lambda l: l.id)),
        vgs=(),
        connections=(),
        palettes=(),
        c_vif_documents={},
    )


# -- independent scorer (different libraries, different code path) ---------------

def oracle_score(points, pivot_box, alpha):
    """Re-derivation of the layout energy used to cross-check rankings."""
    pts = np.asarray(points, dtype=float)
    if pivot_box is not None:
        px, py, pw, ph = pivot_box
        inside = (pts[:, 0] >= px) & (pts[:, 0] <= px + pw) & (pts[:, 1] >= py) & (pts[:, 1] <= py + ph)
        e_o = 0.0 if inside.any() else 1.0
        center = np.array([px + pw / 2, py + ph / 2])
    else:
        e_o = 1.0
        center = np.array([0.5, 0.5])
    corners = np.concatenate(
        [pts + np.array(d) for d in ((-0.05, -0.05), (0.05, -0.05), (0.05, 0.05), (-0.05, 0.05))]
    )
    try:
        area = ConvexHull(corners).volume  # 2-d "volume" is the area
    except QhullError:
        area = 0.0
    e_c = min(1.0, area)
    d = np.linalg.norm(pts - center, axis=1) / math.sqrt(2)
    uniform = 1.0 - min(1.0, 4.0 * float(np.var(d)))
    return e_o * (alpha * e_c + (1 - alpha) * uniform)


# -- pivot center ------------------------------------------------------------------

@pytest.mark.parametrize(
    "box,expected",
    [
        ((0.4, 0.4, 0.2, 0.2), (0.5, 0.5)),
        ((0.0, 0.0, 1.0, 1.0), (0.5, 0.5)),
        ((0.1, 0.2, 0.3, 0.4), (0.25, 0.4)),
    ],
)
def test_pivot_center(box, expected):
    assert pivot_center(BBox(*box)) == pytest.approx(expected)


# -- overlap gate ---------------------------------------------------------------------

def _layout(points, lid="t"):
    return VifLayout(id=lid, points=tuple(points))


def test_overlap_no_pivot():
    assert energy_overlap(_layout([(0.5, 0.5), (0.6, 0.6)]), None) == 1


def test_overlap_point_at_pivot_center():
    pivot = PivotPlacement(bbox=BBox(0.4, 0.4, 0.2, 0.2))
    assert energy_overlap(_layout([(0.5, 0.5), (0.9, 0.9)]), pivot) == 0


def test_overlap_all_points_outside():
    pivot = PivotPlacement(bbox=BBox(0.4, 0.4, 0.2, 0.2))
    assert energy_overlap(_layout([(0.1, 0.1), (0.9, 0.9)]), pivot) == 1


def test_overlap_boundary_counts_as_overlap():
    pivot = PivotPlacement(bbox=BBox(0.4, 0.4, 0.2, 0.2))
    assert energy_overlap(_layout([(0.4, 0.5), (0.9, 0.9)]), pivot) == 0


# -- coverage -----------------------------------------------------------------------

def test_coverage_raw_corners():
    layout = _layout([(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)])
    assert energy_coverage(layout) == pytest.approx(1.0)


def test_coverage_raw_quarter():
    layout = _layout([(0.25, 0.25), (0.75, 0.25), (0.75, 0.75), (0.25, 0.75)])
    assert energy_coverage(layout) == pytest.approx(0.25)


def test_coverage_raw_collinear_zero():
    assert energy_coverage(_layout([(0.1, 0.5), (0.5, 0.5), (0.9, 0.5)])) == 0.0


def test_coverage_padded_collinear_nonzero():
    layout = _layout([(0.1, 0.5), (0.5, 0.5), (0.9, 0.5)])
    assert energy_coverage(layout, padded=True) == pytest.approx(0.8 * 0.1 + 0.01, abs=1e-9)


def test_coverage_monotone_outward():
    rng = random.Random(17)
    for _ in range(40):
        pts = [(rng.uniform(0.3, 0.7), rng.uniform(0.3, 0.7)) for _ in range(6)]
        base = energy_coverage(_layout(pts))
        cx = sum(p[0] for p in pts) / len(pts)
        cy = sum(p[1] for p in pts) / len(pts)
        i = rng.randrange(len(pts))
        x, y = pts[i]
        moved = (x + (x - cx) * 0.5, y + (y - cy) * 0.5)
        if not (0 <= moved[0] <= 1 and 0 <= moved[1] <= 1):
            continue
        pts[i] = moved
        assert energy_coverage(_layout(pts)) >= base - 1e-12


# -- uniformity ------------------------------------------------------------------------

def test_uniformity_equidistant_points():
    layout = _layout([(0.5, 0.2), (0.8, 0.5), (0.5, 0.8), (0.2, 0.5)])
    raw, uniform, mean = energy_uniformity(layout, (0.5, 0.5))
    assert raw == pytest.approx(0.0, abs=1e-12)
    assert uniform == pytest.approx(1.0)
    assert mean == pytest.approx(0.3 / math.sqrt(2))


def test_uniformity_hand_variance():
    # normalized distances 0.2 and 0.4 -> variance 0.01, uniformity 0.96
    root2 = math.sqrt(2)
    layout = _layout([(0.1 + 0.2 * root2, 0.1), (0.1 + 0.4 * root2, 0.1)])
    raw, uniform, mean = energy_uniformity(layout, (0.1, 0.1))
    assert raw == pytest.approx(0.01, abs=1e-12)
    assert uniform == pytest.approx(0.96, abs=1e-12)
    assert mean == pytest.approx(0.3, abs=1e-12)


def test_uniformity_single_point():
    raw, uniform, _ = energy_uniformity(VifLayout(id="s", points=((0.3, 0.3), (0.3, 0.3))), (0.9, 0.9))
    assert raw == 0.0 and uniform == 1.0


# -- combination --------------------------------------------------------------------

def test_energy_total_hand_value():
    assert energy_total(1, 0.6, 0.8, 0.5) == pytest.approx(0.7)


def test_energy_total_alpha_one_ignores_uniformity():
    assert energy_total(1, 0.6, 0.123, 1.0) == pytest.approx(0.6)


def test_energy_total_gate_dominates():
    assert energy_total(0, 1.0, 1.0, 0.5) == 0.0


@given(
    st.floats(min_value=0, max_value=1),
    st.floats(min_value=0, max_value=1),
    st.floats(min_value=0, max_value=1),
    st.sampled_from([0, 1]),
)
def test_energy_total_range(e_c, uniform, alpha, e_o):
    val = energy_total(e_o, e_c, uniform, alpha)
    assert 0.0 <= val <= 1.0
    if e_o == 0:
        assert val == 0.0


def test_score_layout_gated_by_pivot():
    pivot = PivotPlacement(bbox=BBox(0.4, 0.4, 0.2, 0.2))
    s = score_layout(_layout([(0.5, 0.5), (0.9, 0.9)]), pivot)
    assert s.e_o == 0 and s.e_l == 0.0


def test_score_layout_invariant_holds():
    rng = random.Random(3)
    for _ in range(60):
        pts = [(rng.random(), rng.random()) for _ in range(rng.randint(2, 8))]
        alpha = rng.random()
        pivot = PivotPlacement(bbox=BBox(0.4, 0.45, 0.15, 0.12)) if rng.random() < 0.5 else None
        s = score_layout(_layout(pts), pivot, EnergyWeights(alpha=alpha))
        assert s.e_l == pytest.approx(s.e_o * (alpha * s.e_c + (1 - alpha) * s.uniformity))
        assert 0.0 <= s.e_c <= 1.0 and 0.0 <= s.uniformity <= 1.0


# -- ranking ----------------------------------------------------------------------------

def test_rank_prefers_non_overlapping():
    pivot = PivotPlacement(bbox=BBox(0.4, 0.4, 0.2, 0.2))
    overlapping = VifLayout(id="a-hits", points=((0.5, 0.5), (0.1, 0.1), (0.9, 0.1), (0.9, 0.9)))
    clear = VifLayout(id="b-clear", points=((0.1, 0.1), (0.9, 0.1), (0.9, 0.9), (0.1, 0.9)))
    ranked = rank_layouts(make_store([overlapping, clear]), 4, pivot=pivot, top_k=2)
    assert [s.layout_id for s in ranked] == ["b-clear", "a-hits"]
    assert ranked[1].e_l == 0.0


def test_rank_tie_breaks_by_id():
    pts = ((0.1, 0.1), (0.9, 0.1), (0.9, 0.9), (0.1, 0.9))
    ranked = rank_layouts(make_store([VifLayout(id="z", points=pts), VifLayout(id="a", points=pts)]), 4, top_k=2)
    assert [s.layout_id for s in ranked] == ["a", "z"]


def test_rank_matches_independent_oracle():
    rng = random.Random(2024)
    layouts = []
    for i in range(20):
        pts = tuple((round(rng.uniform(0.05, 0.95), 3), round(rng.uniform(0.05, 0.95), 3)) for _ in range(5))
        layouts.append(VifLayout(id=f"syn-{i:02d}", points=pts))
    store = make_store(layouts)
    pivot = PivotPlacement(bbox=BBox(0.42, 0.42, 0.16, 0.16))
    for alpha in (0.0, 0.3, 0.5, 1.0):
        ranked = rank_layouts(store, 5, pivot=pivot, weights=EnergyWeights(alpha=alpha), top_k=20)
        oracle = sorted(
            layouts,
            key=lambda l: (-oracle_score(l.points, (0.42, 0.42, 0.16, 0.16), alpha), l.id),
        )
        assert [s.layout_id for s in ranked] == [l.id for l in oracle]
        for s in ranked:
            layout = next(l for l in layouts if l.id == s.layout_id)
            assert s.e_l == pytest.approx(oracle_score(layout.points, (0.42, 0.42, 0.16, 0.16), alpha), abs=1e-9)


def test_rank_alpha_boundaries():
    rng = random.Random(77)
    layouts = [
        VifLayout(id=f"b-{i}", points=tuple((rng.uniform(0.05, 0.95), rng.uniform(0.05, 0.95)) for _ in range(4)))
        for i in range(10)
    ]
    store = make_store(layouts)
    at_one = rank_layouts(store, 4, weights=EnergyWeights(alpha=1.0), top_k=10)
    by_coverage = sorted(at_one, key=lambda s: (-s.e_o * s.e_c, s.layout_id))
    assert [s.layout_id for s in at_one] == [s.layout_id for s in by_coverage]
    at_zero = rank_layouts(store, 4, weights=EnergyWeights(alpha=0.0), top_k=10)
    by_uniformity = sorted(at_zero, key=lambda s: (-s.e_o * s.uniformity, s.layout_id))
    assert [s.layout_id for s in at_zero] == [s.layout_id for s in by_uniformity]


def test_rank_no_candidates():
    store = make_store([VifLayout(id="x", points=((0.1, 0.1), (0.9, 0.9)))])
    with pytest.raises(NoCandidates):
        rank_layouts(store, 7)


def test_rank_truncation_fallback_flagged():
    store = make_store([VifLayout(id="x", points=((0.1, 0.1), (0.5, 0.5), (0.9, 0.9)))])
    ranked = rank_layouts(store, 2, allow_truncation=True)
    assert ranked[0].truncated and ranked[0].vg_count == 2


# -- sketch matching -----------------------------------------------------------------------

def _trace(points, per_seg=30):
    out = []
    for a, b in zip(points, points[1:]):
        for i in range(per_seg):
            t = i / per_seg
            out.append((a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t))
    out.append(points[-1])
    return out


@pytest.fixture(scope="module")
def pack(corpus_root):
    return load_corpus(corpus_root)


def test_sketch_identity_trace_rank_one(pack):
    for layout in pack.layouts[::7]:
        got = match_sketch(pack, _trace(list(layout.points)), len(layout.points), top_k=1)
        assert got[0][0] == layout.id
        assert got[0][1] < 0.02


def test_sketch_horizontal_prefers_linear(pack):
    stroke = [(x / 99, 0.5) for x in range(100)]
    ranked = match_sketch(pack, stroke, 5, top_k=len(pack.layouts))
    ids = [lid for lid, _ in ranked]
    assert ids[0] == "vif-horizontal-05"
    assert ids.index("vif-horizontal-05") < ids.index("vif-circular-05")


def test_sketch_direction_invariant(pack):
    layout = next(l for l in pack.layouts if l.id == "vif-diagonal-05")
    forward = match_sketch(pack, _trace(list(layout.points)), 5, top_k=1)
    backward = match_sketch(pack, _trace(list(layout.points))[::-1], 5, top_k=1)
    assert forward[0][0] == backward[0][0] == layout.id


def test_sketch_no_candidates(pack):
    with pytest.raises(NoCandidates):
        match_sketch(pack, [(0.0, 0.0), (1.0, 1.0)], 30)
