"""End-to-end orchestration shared by the CLI and the HTTP service.

Everything here is a pure function of (engine, inputs), so the two entry
points produce identical documents for identical parameters. The engine
owns the loaded corpus and the prebuilt (or on-demand) indices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .assets import AssetStore, VifLayout, load_corpus
from .color import rank_palettes, select_palette
from .compose import AssembledInfographic, assemble
from .content import ContentSpec, parse_markdown, union_signature
from .errors import NoCandidates, NotFound, SelectionIncomplete
from .geometry import Canvas, Point
from .indexing import IndexBundle, assign_cluster, ensure_indices
from .layout_rank import (
    EnergyWeights,
    LayoutScore,
    PivotPlacement,
    match_sketch,
    rank_layouts,
    score_layout,
)
from .vg_rank import ConnectionStyleRanking, VgRanking, rank_connection_styles, rank_vgs, sample_connection_designs

# Panel size: large enough that a gated layout stays visible at score 0
# instead of silently dropping out of the list.
DEFAULT_TOP_K = 16
CONNECTION_SAMPLES = 3


@dataclass
class Engine:
    store: AssetStore
    indices: IndexBundle

    @classmethod
    def open(cls, corpus_root: str | Path, seed: int = 0) -> "Engine":
        store = load_corpus(corpus_root)
        return cls(store=store, indices=ensure_indices(store, seed=seed))

    def cluster_of(self, layout: VifLayout) -> int:
        return assign_cluster(self.indices.cluster_model, layout)


@dataclass
class StageInputs:
    spec: ContentSpec
    canvas: Canvas
    pivot: PivotPlacement | None = None
    sketch: list[Point] | None = None  # canvas fractions
    weights: EnergyWeights = field(default_factory=EnergyWeights)
    seed: int = 0

    @property
    def n_vgs(self) -> int:
        return len(self.spec.items)


@dataclass
class LayoutStage:
    scores: list[LayoutScore]
    distances: dict[str, float]      # sketch path only
    gated_out: list[str]             # sketch hits rejected by the pivot gate
    used_sketch: bool


def layout_stage(engine: Engine, inputs: StageInputs, top_k: int = DEFAULT_TOP_K) -> LayoutStage:
    """Energy ranking, or the sketch's nearest neighbors when one is drawn.

    On the sketch path the pivot overlap gate applies as a post-filter:
    overlapping layouts are reported separately instead of ranked.
    """
    if inputs.sketch is not None:
        matches = match_sketch(engine.store, inputs.sketch, inputs.n_vgs, top_k=len(engine.store.layouts))
        scores, distances, gated = [], {}, []
        for layout_id, d in matches:
            layout = engine.store.layout(layout_id)
            s = score_layout(layout, inputs.pivot, inputs.weights)
            if inputs.pivot is not None and s.e_o == 0:
                gated.append(layout_id)
                continue
            scores.append(s)
            distances[layout_id] = d
            if len(scores) >= top_k:
                break
        return LayoutStage(scores=scores, distances=distances, gated_out=gated, used_sketch=True)
    scores = rank_layouts(
        engine.store, inputs.n_vgs, pivot=inputs.pivot, weights=inputs.weights, top_k=top_k
    )
    return LayoutStage(scores=scores, distances={}, gated_out=[], used_sketch=False)


def vg_stage(engine: Engine, inputs: StageInputs, layout_id: str, top_k: int = DEFAULT_TOP_K) -> VgRanking:
    layout = engine.store.layout(layout_id)
    if layout is None:
        raise NotFound(f"unknown layout {layout_id!r}")
    cluster = engine.cluster_of(layout)
    return rank_vgs(engine.indices.vg_index, engine.store, cluster, union_signature(inputs.spec.items), top_k=top_k)


def connection_stage(
    engine: Engine,
    inputs: StageInputs,
    layout_id: str,
    k: int = CONNECTION_SAMPLES,
    style: str | None = None,
) -> tuple[ConnectionStyleRanking, list[str]]:
    """Style ranking for the layout's cluster plus k sampled design ids for
    the leading (or requested) drawable style."""
    layout = engine.store.layout(layout_id)
    if layout is None:
        raise NotFound(f"unknown layout {layout_id!r}")
    cluster = engine.cluster_of(layout)
    ranking = rank_connection_styles(engine.indices.c_vif_index, cluster, has_pivot=inputs.pivot is not None)
    chosen = style or next((s for s, _ in ranking.entries if s != "None"), None)
    samples: list[str] = []
    if chosen and chosen != "None":
        samples = [d.id for d in sample_connection_designs(engine.store, chosen, seed=inputs.seed, k=k)]
    return ranking, samples


def recommendation_bundle(
    engine: Engine,
    inputs: StageInputs,
    selections: dict | None = None,
    top_k: int = DEFAULT_TOP_K,
) -> dict:
    """The three stage panels plus palette ordering, as one JSON-ready dict."""
    selections = selections or {}
    stage1 = layout_stage(engine, inputs, top_k=top_k)
    layouts = [
        {**s.as_dict(), **({"distance": stage1.distances[s.layout_id]} if s.layout_id in stage1.distances else {})}
        for s in stage1.scores
    ]
    bundle: dict = {
        "layouts": layouts,
        "sketch_used": stage1.used_sketch,
        "gated_out": stage1.gated_out,
        "vgs": None,
        "connections": None,
        "palettes": [pid for pid, _ in rank_palettes(engine.store.palettes, inputs.canvas.background)],
    }
    effective_layout = selections.get("layout_id") or (layouts[0]["layout_id"] if layouts else None)
    if effective_layout is not None:
        bundle["vgs"] = vg_stage(engine, inputs, effective_layout, top_k=top_k).as_dict()
        ranking, samples = connection_stage(
            engine, inputs, effective_layout, style=selections.get("connection_style")
        )
        bundle["connections"] = {**ranking.as_dict(), "sampled_designs": samples}
    return bundle


def assemble_from_selection(engine: Engine, inputs: StageInputs, selections: dict) -> AssembledInfographic:
    """Compose with fully resolved selections; incomplete ones are an error."""
    missing = [
        key
        for key in ("layout_id", "vg_design_id", "connection_style", "palette_id")
        if not selections.get(key)
    ]
    if missing:
        raise SelectionIncomplete(f"missing selections: {', '.join(missing)}")
    layout = engine.store.layout(selections["layout_id"])
    design = engine.store.vg(selections["vg_design_id"])
    palette = engine.store.palette(selections["palette_id"])
    if layout is None or design is None or palette is None:
        raise NotFound("selection references an unknown asset")
    style = selections["connection_style"]
    design_id = selections.get("connection_design_id")
    if style != "None" and design_id and engine.store.connection(design_id) is None:
        raise NotFound(f"unknown connection design {design_id!r}")
    return assemble(
        engine.store,
        inputs.canvas,
        layout,
        design,
        list(inputs.spec.items),
        palette,
        pivot=inputs.pivot,
        connection_style=style,
        connection_design_id=design_id if style != "None" else None,
        infographic_title=inputs.spec.infographic_title,
        weights=inputs.weights,
        seed=inputs.seed,
    )


def generate_top_k(engine: Engine, inputs: StageInputs, top_k: int = 4) -> list[AssembledInfographic]:
    """Batch path: one finished document per top-ranked layout, each with the
    best-fitting design, style, and palette for that layout.

    Layouts whose groups cannot be placed around the pivot without overlap
    are skipped and the next rank backfills, so asking for k visuals
    yields k whenever the corpus allows it.
    """
    from .errors import Unplaceable

    stage1 = layout_stage(engine, inputs, top_k=max(top_k * 3, DEFAULT_TOP_K))
    if not stage1.scores:
        raise NoCandidates("no layout candidates for this content")
    sig = union_signature(inputs.spec.items)
    outputs: list[AssembledInfographic] = []
    for rank_index, score in enumerate(stage1.scores):
        if len(outputs) >= top_k:
            break
        layout = engine.store.layout(score.layout_id)
        cluster = engine.cluster_of(layout)
        vg_ranking = rank_vgs(engine.indices.vg_index, engine.store, cluster, sig, top_k=1)
        if not vg_ranking.entries:
            raise NoCandidates("no group design matches the content components")
        style_ranking = rank_connection_styles(
            engine.indices.c_vif_index, cluster, has_pivot=inputs.pivot is not None
        )
        style = style_ranking.entries[0][0]
        design_id = None
        if style != "None":
            design_id = sample_connection_designs(
                engine.store, style, seed=inputs.seed + rank_index, k=1
            )[0].id
        palette, _ = select_palette(engine.store.palettes, inputs.canvas.background)
        try:
            outputs.append(
                assemble(
                    engine.store,
                    inputs.canvas,
                    layout,
                    engine.store.vg(vg_ranking.entries[0][0]),
                    list(inputs.spec.items),
                    palette,
                    pivot=inputs.pivot,
                    connection_style=style,
                    connection_design_id=design_id,
                    infographic_title=inputs.spec.infographic_title,
                    weights=inputs.weights,
                    seed=inputs.seed,
                )
            )
        except Unplaceable:
            continue
    if not outputs:
        raise NoCandidates("no layout candidate could be composed for this content")
    return outputs


def assemble_from_provenance(engine: Engine, provenance: dict) -> AssembledInfographic:
    """Reproduce a document from its recorded parameters alone."""
    from .content import VgContent

    spec = ContentSpec(
        items=tuple(
            VgContent(
                title=i.get("title"),
                text=i.get("text"),
                label=i.get("label"),
                image_ref=i.get("image"),
            )
            for i in provenance["items"]
        ),
        infographic_title=provenance.get("infographic_title"),
    )
    c = provenance["canvas"]
    canvas = Canvas(c["width_px"], c["height_px"], c.get("background", "#ffffff"))
    pivot = None
    if provenance.get("pivot"):
        from .geometry import BBox

        p = provenance["pivot"]
        pivot = PivotPlacement(bbox=BBox(*p["bbox"]), graphic_ref=p.get("graphic_ref"))
    inputs = StageInputs(
        spec=spec,
        canvas=canvas,
        pivot=pivot,
        weights=EnergyWeights(alpha=provenance.get("alpha", 0.5)),
        seed=provenance.get("seed", 0),
    )
    return assemble_from_selection(
        engine,
        inputs,
        {
            "layout_id": provenance["layout_id"],
            "vg_design_id": provenance["vg_design_id"],
            "connection_style": provenance.get("connection_style", "None"),
            "connection_design_id": provenance.get("connection_design_id"),
            "palette_id": provenance["palette_id"],
        },
    )


def parse_inputs(
    markdown: str,
    canvas: Canvas,
    pivot: PivotPlacement | None = None,
    sketch_points: list[Point] | None = None,
    alpha: float = 0.5,
    seed: int = 0,
) -> StageInputs:
    return StageInputs(
        spec=parse_markdown(markdown),
        canvas=canvas,
        pivot=pivot,
        sketch=sketch_points,
        weights=EnergyWeights(alpha=alpha),
        seed=seed,
    )
