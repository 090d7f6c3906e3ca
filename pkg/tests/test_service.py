import base64
import json

import pytest
from fastapi.testclient import TestClient

from infoforge.service import create_app

UC1_MD = (
    "# Morning Routine\n"
    "- title: Wake up\n  text: Rise with the sun and stretch a little.\n"
    "- title: Hydrate\n  text: A full glass of water before anything else.\n"
    "- title: Move\n  text: Twenty minutes of light exercise.\n"
    "- title: Plan\n  text: Write down what matters today.\n"
)
CANVAS = {"width_px": 1200, "height_px": 1600}


@pytest.fixture(scope="module")
def client(engine, tmp_path_factory):
    app = create_app(store_dir=tmp_path_factory.mktemp("sessions"), engine=engine)
    return TestClient(app)


def _create(client, markdown=UC1_MD, canvas=CANVAS, **extra):
    r = client.post("/sessions", json={"markdown": markdown, "canvas": canvas, **extra})
    assert r.status_code == 201
    return r.json()


def test_create_session_runs_stage_one(client):
    payload = _create(client)
    assert len(payload["bundle"]["layouts"]) >= 4
    assert all(s["vg_count"] == 4 for s in payload["bundle"]["layouts"])
    assert payload["session"]["id"]
    assert payload["bundle"]["vgs"]["entries"]
    assert payload["bundle"]["palettes"]


def test_malformed_markdown_is_400(client):
    r = client.post("/sessions", json={"markdown": "- title: ok\n  bogus: key\n", "canvas": CANVAS})
    assert r.status_code == 400
    assert r.json()["code"] == "MALFORMED_ITEM"


def test_empty_markdown_is_400(client):
    r = client.post("/sessions", json={"markdown": "# nothing\n", "canvas": CANVAS})
    assert r.status_code == 400
    assert r.json()["code"] == "EMPTY_SPEC"


def test_unknown_session_404(client):
    assert client.get("/sessions/NOPE").status_code == 404
    assert client.post("/sessions/NOPE/assemble").status_code == 404


def test_patch_pivot_gates_layouts(client):
    payload = _create(client)
    sid = payload["session"]["id"]
    target = payload["bundle"]["layouts"][0]
    layout_points = None
    # place the pivot right on the top layout's first vertex
    r = client.get(f"/assets/layouts/{target['layout_id']}.json")
    assert r.status_code == 200
    layout_points = json.loads(r.content)["points"]
    x, y = layout_points[0]
    bbox = [max(0.0, x - 0.05), max(0.0, y - 0.05), 0.1, 0.1]
    r2 = client.patch(f"/sessions/{sid}", json={"pivot": {"bbox": bbox}})
    assert r2.status_code == 200
    refreshed = {s["layout_id"]: s for s in r2.json()["bundle"]["layouts"]}
    assert refreshed[target["layout_id"]]["e_l"] == 0.0
    assert refreshed[target["layout_id"]]["e_o"] == 0


def test_patch_sketch_switches_to_distance_ranking(client, engine):
    payload = _create(client)
    sid = payload["session"]["id"]
    layout = engine.store.layout("vif-serpentine-04")
    points = []
    for a, b in zip(layout.points, layout.points[1:]):
        points += [
            [(a[0] + (b[0] - a[0]) * t / 25) * 1200, (a[1] + (b[1] - a[1]) * t / 25) * 1600]
            for t in range(25)
        ]
    points.append([layout.points[-1][0] * 1200, layout.points[-1][1] * 1600])
    r = client.patch(f"/sessions/{sid}", json={"sketch": {"points": points, "space": "canvas-px"}})
    assert r.status_code == 200
    bundle = r.json()["bundle"]
    assert bundle["sketch_used"]
    assert bundle["layouts"][0]["layout_id"] == "vif-serpentine-04"
    assert "distance" in bundle["layouts"][0]
    # clearing the sketch returns to energy ranking
    r2 = client.patch(f"/sessions/{sid}", json={"sketch": None})
    assert not r2.json()["bundle"]["sketch_used"]


def test_stage_slices(client):
    sid = _create(client)["session"]["id"]
    for stage, key in (("layout", "layouts"), ("vg", "vgs"), ("connection", "connections"), ("palette", "palettes")):
        r = client.get(f"/sessions/{sid}/recommendations", params={"stage": stage})
        assert r.status_code == 200
        assert key in r.json()
    assert client.get(f"/sessions/{sid}/recommendations", params={"stage": "bogus"}).status_code == 422


def test_assemble_requires_selection(client):
    sid = _create(client)["session"]["id"]
    r = client.post(f"/sessions/{sid}/assemble")
    assert r.status_code == 422
    assert r.json()["code"] == "SELECTION_INCOMPLETE"


def _select_all(client, payload):
    sid = payload["session"]["id"]
    b = payload["bundle"]
    sel = {
        "layout_id": b["layouts"][0]["layout_id"],
        "vg_design_id": b["vgs"]["entries"][0]["design_id"],
        "connection_style": b["connections"]["entries"][0]["style"],
        "palette_id": b["palettes"][0],
    }
    if sel["connection_style"] != "None":
        sel["connection_design_id"] = b["connections"]["sampled_designs"][0]
    r = client.patch(f"/sessions/{sid}", json={"selections": sel})
    assert r.status_code == 200
    return sid, sel


def test_assemble_svg_with_provenance_header(client):
    sid, sel = _select_all(client, _create(client))
    r = client.post(f"/sessions/{sid}/assemble")
    assert r.status_code == 200
    assert r.headers["content-type"].startswith("image/svg+xml")
    provenance = json.loads(base64.b64decode(r.headers["x-infoforge-provenance"]))
    assert provenance["layout_id"] == sel["layout_id"]
    assert provenance["vg_design_id"] == sel["vg_design_id"]
    assert r.content.startswith(b'<?xml version="1.0"')
    # repeatable byte for byte
    assert client.post(f"/sessions/{sid}/assemble").content == r.content


def test_stage2_selection_does_not_alter_stage1(client):
    payload = _create(client)
    sid = payload["session"]["id"]
    before = [s["layout_id"] for s in payload["bundle"]["layouts"]]
    vg = payload["bundle"]["vgs"]["entries"][-1]["design_id"]
    r = client.patch(f"/sessions/{sid}", json={"selections": {"vg_design_id": vg}})
    after = [s["layout_id"] for s in r.json()["bundle"]["layouts"]]
    assert before == after


def test_selection_of_unknown_asset_404(client):
    sid = _create(client)["session"]["id"]
    r = client.patch(f"/sessions/{sid}", json={"selections": {"layout_id": "vif-not-real-99"}})
    assert r.status_code == 404


def test_markdown_edit_drops_incompatible_layout_selection(client):
    payload = _create(client)
    sid, sel = _select_all(client, payload)
    five_items = UC1_MD + "- title: Reflect\n  text: End the day with notes.\n"
    r = client.patch(f"/sessions/{sid}", json={"markdown": five_items})
    assert r.status_code == 200
    session = r.json()["session"]
    assert session["selections"]["layout_id"] is None
    assert all(s["vg_count"] == 5 for s in r.json()["bundle"]["layouts"])


def test_removing_pivot_drops_pivot_connection(client, engine):
    payload = _create(client)
    sid = payload["session"]["id"]
    client.patch(f"/sessions/{sid}", json={"pivot": {"bbox": [0.42, 0.42, 0.16, 0.12]}})
    r = client.patch(
        f"/sessions/{sid}",
        json={"selections": {"connection_style": "Pivot", "connection_design_id": "conn-ray"}},
    )
    assert r.status_code == 200
    r2 = client.patch(f"/sessions/{sid}", json={"pivot": None})
    assert r2.json()["session"]["selections"]["connection_style"] is None
    # and the Pivot style disappears from the refreshed ranking
    styles = [e["style"] for e in r2.json()["bundle"]["connections"]["entries"]]
    assert "Pivot" not in styles


def test_recommend_layouts_stateless(client):
    r = client.post("/recommend/layouts", json={"n_vgs": 5, "canvas": CANVAS, "top_k": 6})
    assert r.status_code == 200
    out = r.json()
    assert len(out["layouts"]) == 6
    assert all(s["vg_count"] == 5 for s in out["layouts"])
    scores = [s["e_l"] for s in out["layouts"]]
    assert scores == sorted(scores, reverse=True)


def test_recommend_vgs_stateless(client):
    r = client.post(
        "/recommend/vgs",
        json={"layout_id": "vif-circular-05", "signature": {"title": True, "text": True}, "top_k": 5},
    )
    assert r.status_code == 200
    assert r.json()["entries"]
    r2 = client.post("/recommend/vgs", json={"cluster_id": 3, "signature": {"label": True}})
    assert r2.status_code == 200


def test_recommend_connections_stateless(client):
    r = client.post("/recommend/connections", json={"cluster_id": 4, "has_pivot": True, "seed": 7, "k": 2})
    assert r.status_code == 200
    body = r.json()
    assert len(body["entries"]) == 5
    again = client.post("/recommend/connections", json={"cluster_id": 4, "has_pivot": True, "seed": 7, "k": 2})
    assert again.json()["sampled_designs"] == body["sampled_designs"]


def test_asset_serving_and_traversal_guard(client):
    assert client.get("/assets/palettes.json").status_code == 200
    assert client.get("/assets/vgs/vg-card-tt-a.svg").headers["content-type"].startswith("image/svg+xml")
    assert client.get("/assets/../pyproject.toml").status_code in (404, 422)
    assert client.get("/assets/nope.svg").status_code == 404
