"""HTTP recommendation and assembly service.

Sessions hold the user's content, canvas, design feedback (pivot, sketch),
and staged selections; every mutation recomputes the downstream
recommendation bundle eagerly. Stateless /recommend/* endpoints expose the
individual stages directly. Errors carry machine-readable codes: malformed
input is 400, unknown resources 404, pipeline failures 422.
"""

from __future__ import annotations

import base64
import json
import mimetypes
import os
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .assets import CONNECTION_STYLES
from .content import ComponentSignature, parse_markdown, union_signature, validate_markdown
from .errors import (
    EmptySpec,
    InfoforgeError,
    MalformedItem,
    NotFound,
    OversizeField,
)
from .geometry import BBox, Canvas
from .indexing import assign_cluster
from .layout_rank import EnergyWeights, PivotPlacement
from .pipeline import (
    Engine,
    StageInputs,
    assemble_from_selection,
    connection_stage,
    layout_stage,
    recommendation_bundle,
    vg_stage,
)
from .session import Selections, Session, SessionStore, new_ulid
from .vg_rank import rank_connection_styles, rank_vgs, sample_connection_designs

DEFAULT_CORPUS = os.environ.get("INFOFORGE_CORPUS", "corpus")
DEFAULT_STORE = os.environ.get("INFOFORGE_STORE", ".infoforge-sessions")


class CanvasIn(BaseModel):
    width_px: int = Field(ge=64)
    height_px: int = Field(ge=64)
    background: str = "#ffffff"


class PivotIn(BaseModel):
    bbox: tuple[float, float, float, float]
    svg: str | None = None
    graphic_ref: str | None = None


class SketchIn(BaseModel):
    points: list[tuple[float, float]]
    space: str = "canvas-px"


class SelectionsIn(BaseModel):
    layout_id: str | None = None
    vg_design_id: str | None = None
    connection_style: str | None = None
    connection_design_id: str | None = None
    palette_id: str | None = None


class SessionCreate(BaseModel):
    markdown: str
    canvas: CanvasIn
    alpha: float = Field(default=0.5, ge=0.0, le=1.0)
    seed: int = 0


class SessionPatch(BaseModel):
    markdown: str | None = None
    canvas: CanvasIn | None = None
    pivot: PivotIn | None = None
    sketch: SketchIn | None = None
    alpha: float | None = Field(default=None, ge=0.0, le=1.0)
    seed: int | None = None
    selections: SelectionsIn | None = None


class RecommendLayoutsIn(BaseModel):
    n_vgs: int = Field(ge=1)
    canvas: CanvasIn
    pivot: PivotIn | None = None
    sketch: SketchIn | None = None
    alpha: float = Field(default=0.5, ge=0.0, le=1.0)
    top_k: int = Field(default=8, ge=1)


class RecommendVgsIn(BaseModel):
    layout_id: str | None = None
    cluster_id: int | None = None
    signature: dict[str, bool] = Field(default_factory=dict)
    top_k: int = Field(default=8, ge=1)


class RecommendConnectionsIn(BaseModel):
    cluster_id: int = Field(ge=0)
    has_pivot: bool = True
    seed: int = 0
    k: int = Field(default=3, ge=1)


def _pivot_from(data: dict | None) -> PivotPlacement | None:
    if not data:
        return None
    x, y, w, h = data["bbox"]
    return PivotPlacement(bbox=BBox(x, y, w, h), graphic_ref=data.get("svg") or data.get("graphic_ref"))


def _sketch_points(data: dict | None, canvas: Canvas):
    if not data or not data.get("points"):
        return None
    pts = [(float(x), float(y)) for x, y in data["points"]]
    if data.get("space", "canvas-px") == "canvas-px":
        pts = [(x / canvas.width_px, y / canvas.height_px) for x, y in pts]
    return pts


def _session_inputs(session: Session) -> StageInputs:
    canvas = Canvas(
        session.canvas["width_px"], session.canvas["height_px"], session.canvas.get("background", "#ffffff")
    )
    return StageInputs(
        spec=parse_markdown(session.markdown),
        canvas=canvas,
        pivot=_pivot_from(session.pivot),
        sketch=_sketch_points(session.sketch, canvas),
        weights=EnergyWeights(alpha=session.alpha),
        seed=session.seed,
    )


def _session_payload(engine: Engine, session: Session) -> dict:
    inputs = _session_inputs(session)
    issues = validate_markdown(session.markdown)[1]
    return {
        "session": session.as_dict(),
        "issues": [i.as_dict() for i in issues],
        "bundle": recommendation_bundle(engine, inputs, selections=session.as_dict()["selections"]),
    }


def _apply_patch(engine: Engine, session: Session, patch: SessionPatch):
    fields = patch.model_fields_set
    if "markdown" in fields and patch.markdown is not None:
        parse_markdown(patch.markdown)  # malformed -> 400 before anything mutates
        session.markdown = patch.markdown
    if "canvas" in fields and patch.canvas is not None:
        session.canvas = patch.canvas.model_dump()
    if "pivot" in fields:
        session.pivot = patch.pivot.model_dump() if patch.pivot is not None else None
    if "sketch" in fields:
        session.sketch = patch.sketch.model_dump() if patch.sketch is not None else None
    if "alpha" in fields and patch.alpha is not None:
        session.alpha = patch.alpha
    if "seed" in fields and patch.seed is not None:
        session.seed = patch.seed
    if patch.selections is not None:
        incoming = patch.selections.model_dump(exclude_unset=True)
        current = session.selections
        for key, value in incoming.items():
            setattr(current, key, value)
        _validate_selections(engine, session)

    # drop selections invalidated by upstream edits
    spec = parse_markdown(session.markdown)
    if session.selections.layout_id:
        layout = engine.store.layout(session.selections.layout_id)
        if layout is None or len(layout.points) != len(spec.items):
            session.selections.layout_id = None
    if session.selections.vg_design_id:
        design = engine.store.vg(session.selections.vg_design_id)
        if design is None or not design.signature.is_superset_of(union_signature(spec.items)):
            session.selections.vg_design_id = None
    if session.pivot is None and session.selections.connection_style == "Pivot":
        session.selections.connection_style = None
        session.selections.connection_design_id = None


def _validate_selections(engine: Engine, session: Session):
    s = session.selections
    if s.layout_id and engine.store.layout(s.layout_id) is None:
        raise NotFound(f"unknown layout {s.layout_id!r}")
    if s.vg_design_id and engine.store.vg(s.vg_design_id) is None:
        raise NotFound(f"unknown design {s.vg_design_id!r}")
    if s.palette_id and engine.store.palette(s.palette_id) is None:
        raise NotFound(f"unknown palette {s.palette_id!r}")
    if s.connection_style and s.connection_style not in CONNECTION_STYLES:
        raise InfoforgeError(f"unknown connection style {s.connection_style!r}")
    if s.connection_design_id and engine.store.connection(s.connection_design_id) is None:
        raise NotFound(f"unknown connection design {s.connection_design_id!r}")


def create_app(
    corpus_root: str | Path = DEFAULT_CORPUS,
    store_dir: str | Path = DEFAULT_STORE,
    seed: int = 0,
    engine: Engine | None = None,
) -> FastAPI:
    app = FastAPI(title="infoforge", version="0.1.0")
    # the studio front end runs on a different origin during development
    from fastapi.middleware.cors import CORSMiddleware

    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
        expose_headers=["X-Infoforge-Provenance"],
    )
    engine = engine or Engine.open(corpus_root, seed=seed)
    sessions = SessionStore(store_dir)
    app.state.engine = engine
    app.state.sessions = sessions

    @app.exception_handler(InfoforgeError)
    async def _infoforge_error(_: Request, exc: InfoforgeError):
        status = 422
        if isinstance(exc, NotFound):
            status = 404
        elif isinstance(exc, (EmptySpec, MalformedItem, OversizeField)):
            status = 400
        return JSONResponse(status_code=status, content={"code": exc.code, "message": str(exc)})

    @app.exception_handler(RequestValidationError)
    async def _validation_error(_: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"code": "MALFORMED_REQUEST", "message": str(exc.errors()[:3])})

    @app.get("/healthz")
    def healthz():
        return {"status": "ok", "layouts": len(engine.store.layouts)}

    @app.post("/sessions", status_code=201)
    def create_session(body: SessionCreate):
        parse_markdown(body.markdown)  # reject malformed content up front
        session = Session(
            id=new_ulid(),
            markdown=body.markdown,
            canvas=body.canvas.model_dump(),
            alpha=body.alpha,
            seed=body.seed,
        )
        sessions.create(session)
        return _session_payload(engine, session)

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        return _session_payload(engine, sessions.load(session_id))

    @app.patch("/sessions/{session_id}")
    def patch_session(session_id: str, body: SessionPatch):
        session = sessions.update(session_id, lambda s: _apply_patch(engine, s, body))
        return _session_payload(engine, session)

    @app.get("/sessions/{session_id}/recommendations")
    def get_recommendations(session_id: str, stage: str = "layout"):
        payload = _session_payload(engine, sessions.load(session_id))
        bundle = payload["bundle"]
        slices = {
            "layout": {"layouts": bundle["layouts"], "sketch_used": bundle["sketch_used"], "gated_out": bundle["gated_out"]},
            "vg": {"vgs": bundle["vgs"]},
            "connection": {"connections": bundle["connections"]},
            "palette": {"palettes": bundle["palettes"]},
        }
        if stage not in slices:
            raise InfoforgeError(f"unknown stage {stage!r}")
        return slices[stage]

    @app.post("/sessions/{session_id}/assemble")
    def assemble_session(session_id: str):
        session = sessions.load(session_id)
        inputs = _session_inputs(session)
        art = assemble_from_selection(engine, inputs, session.as_dict()["selections"])
        header = base64.b64encode(json.dumps(art.provenance, sort_keys=True).encode()).decode()
        return Response(
            content=art.svg_doc,
            media_type="image/svg+xml",
            headers={"X-Infoforge-Provenance": header},
        )

    @app.post("/recommend/layouts")
    def recommend_layouts(body: RecommendLayoutsIn):
        canvas = Canvas(body.canvas.width_px, body.canvas.height_px, body.canvas.background)
        sketch = _sketch_points(body.sketch.model_dump() if body.sketch else None, canvas)
        from .content import ContentSpec, VgContent

        spec = ContentSpec(items=tuple(VgContent(title=f"item {i}") for i in range(body.n_vgs)))
        inputs = StageInputs(
            spec=spec,
            canvas=canvas,
            pivot=_pivot_from(body.pivot.model_dump() if body.pivot else None),
            sketch=sketch,
            weights=EnergyWeights(alpha=body.alpha),
        )
        stage = layout_stage(engine, inputs, top_k=body.top_k)
        return {
            "layouts": [
                {**s.as_dict(), **({"distance": stage.distances[s.layout_id]} if s.layout_id in stage.distances else {})}
                for s in stage.scores
            ],
            "sketch_used": stage.used_sketch,
            "gated_out": stage.gated_out,
        }

    @app.post("/recommend/vgs")
    def recommend_vgs(body: RecommendVgsIn):
        if body.cluster_id is not None:
            cluster = body.cluster_id
        elif body.layout_id is not None:
            layout = engine.store.layout(body.layout_id)
            if layout is None:
                raise NotFound(f"unknown layout {body.layout_id!r}")
            cluster = assign_cluster(engine.indices.cluster_model, layout)
        else:
            raise InfoforgeError("provide layout_id or cluster_id")
        sig = ComponentSignature(
            has_title=body.signature.get("title", False),
            has_text=body.signature.get("text", False),
            has_label=body.signature.get("label", False),
            has_image=body.signature.get("image", False),
        )
        return rank_vgs(engine.indices.vg_index, engine.store, cluster, sig, top_k=body.top_k).as_dict()

    @app.post("/recommend/connections")
    def recommend_connections(body: RecommendConnectionsIn):
        ranking = rank_connection_styles(engine.indices.c_vif_index, body.cluster_id, body.has_pivot)
        top = next((s for s, _ in ranking.entries if s != "None"), None)
        samples = []
        if top:
            samples = [d.id for d in sample_connection_designs(engine.store, top, seed=body.seed, k=body.k)]
        return {**ranking.as_dict(), "sampled_designs": samples}

    @app.get("/assets/{asset_path:path}")
    def get_asset(asset_path: str):
        root = engine.store.root.resolve()
        target = (root / asset_path).resolve()
        try:
            target.relative_to(root)
        except ValueError:
            raise NotFound("asset outside corpus")
        if not target.is_file():
            raise NotFound(f"no asset {asset_path!r}")
        mime = mimetypes.guess_type(target.name)[0] or "application/octet-stream"
        if target.suffix == ".svg":
            mime = "image/svg+xml"
        return Response(content=target.read_bytes(), media_type=mime)

    return app


def main():  # pragma: no cover - thin launcher
    import uvicorn

    addr = os.environ.get("INFOFORGE_ADDR", "127.0.0.1:8765")
    host, _, port = addr.partition(":")
    uvicorn.run(create_app(), host=host or "127.0.0.1", port=int(port or 8765))


if __name__ == "__main__":  # pragma: no cover
    main()
