import hashlib
import json
from pathlib import Path

import pytest

from infoforge.assets import (
    AssetStore,
    connections_of_style,
    layouts_with_count,
    load_corpus,
    vgs_matching,
)
from infoforge.content import ComponentSignature
from infoforge.errors import CorruptAsset, MissingManifest, VersionMismatch

MINI_VG_SVG = (
    '<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 100 100">'
    '<rect data-fill="series" x="0" y="0" width="100" height="100" fill="#999999"/>'
    '<rect id="ph-title" x="10" y="10" width="80" height="20" fill="none"/>'
    "</svg>"
)


def write_mini_corpus(root: Path, vg_svg: str = MINI_VG_SVG, clusters=(0, 1), version: int = 1, checksums=True):
    (root / "layouts").mkdir(parents=True)
    (root / "vgs").mkdir()
    (root / "connections").mkdir()
    layout = {"id": "l-a", "points": [[0.2, 0.5], [0.8, 0.5]], "cluster": 0}
    (root / "layouts" / "l-a.json").write_text(json.dumps(layout))
    (root / "vgs" / "vg-a.svg").write_text(vg_svg)
    (root / "vgs" / "vg-a.meta.json").write_text(
        json.dumps(
            {
                "id": "vg-a",
                "placeholders": {"title": [10, 10, 80, 20]},
                "anchor": [50, 50],
                "native_size": [100, 100],
                "clusters": list(clusters),
            }
        )
    )
    conn = '<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 100 20"><rect data-fill="series" x="0" y="8" width="100" height="4" fill="#888888"/></svg>'
    (root / "connections" / "conn-a.svg").write_text(conn)
    (root / "connections" / "conn-a.meta.json").write_text(
        json.dumps({"id": "conn-a", "style_class": "Regular", "native_length_axis": "x", "native_size": [100, 20]})
    )
    (root / "palettes.json").write_text(
        json.dumps(
            [
                {
                    "id": "pal-a",
                    "background": "#ffffff",
                    "series": ["#111111", "#222222", "#333333", "#444444", "#555555", "#666666"],
                    "text_color": "#000000",
                }
            ]
        )
    )
    manifest = {"format_version": version, "counts": {"layouts": 1, "vgs": 1, "connections": 1, "palettes": 1}}
    if checksums:
        manifest["checksums"] = {
            "layouts/l-a.json": hashlib.sha256((root / "layouts" / "l-a.json").read_bytes()).hexdigest()
        }
    (root / "manifest.json").write_text(json.dumps(manifest))
    return root


@pytest.fixture(scope="module")
def store(corpus_root):
    return load_corpus(corpus_root)


def test_sample_pack_counts(store):
    assert store.manifest.counts["layouts"] >= 40
    assert store.manifest.counts["vgs"] >= 25
    assert store.manifest.counts["connections"] >= 12
    assert store.manifest.counts["palettes"] >= 1


def test_missing_manifest(tmp_path):
    with pytest.raises(MissingManifest):
        load_corpus(tmp_path)


def test_version_mismatch(tmp_path):
    write_mini_corpus(tmp_path, version=99)
    with pytest.raises(VersionMismatch):
        load_corpus(tmp_path)


def test_missing_placeholder_element_is_corrupt(tmp_path):
    bad = MINI_VG_SVG.replace('id="ph-title"', 'id="decoration"')
    write_mini_corpus(tmp_path, vg_svg=bad, checksums=False)
    with pytest.raises(CorruptAsset) as exc:
        load_corpus(tmp_path)
    assert "ph-title" in str(exc.value)


def test_mangled_svg_is_corrupt(tmp_path):
    write_mini_corpus(tmp_path, vg_svg="<svg><unclosed", checksums=False)
    with pytest.raises(CorruptAsset):
        load_corpus(tmp_path)


def test_bad_cluster_id_is_corrupt(tmp_path):
    write_mini_corpus(tmp_path, clusters=(0, 99), checksums=False)
    with pytest.raises(CorruptAsset):
        load_corpus(tmp_path)


def test_checksum_mismatch(tmp_path):
    write_mini_corpus(tmp_path)
    (tmp_path / "layouts" / "l-a.json").write_text(
        json.dumps({"id": "l-a", "points": [[0.1, 0.5], [0.9, 0.5]], "cluster": 0})
    )
    with pytest.raises(CorruptAsset) as exc:
        load_corpus(tmp_path)
    assert "checksum" in str(exc.value)


def test_count_mismatch(tmp_path):
    write_mini_corpus(tmp_path, checksums=False)
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    manifest["counts"]["layouts"] = 7
    (tmp_path / "manifest.json").write_text(json.dumps(manifest))
    with pytest.raises(CorruptAsset):
        load_corpus(tmp_path)


def test_mini_corpus_loads(tmp_path):
    store = load_corpus(write_mini_corpus(tmp_path))
    assert isinstance(store, AssetStore)
    assert store.layout("l-a").points == ((0.2, 0.5), (0.8, 0.5))
    assert store.vg("vg-a").anchor == (50, 50)


def test_anchor_defaults_to_bottom_center(tmp_path):
    write_mini_corpus(tmp_path, checksums=False)
    meta_path = tmp_path / "vgs" / "vg-a.meta.json"
    meta = json.loads(meta_path.read_text())
    del meta["anchor"]
    meta_path.write_text(json.dumps(meta))
    store = load_corpus(tmp_path)
    assert store.vg("vg-a").anchor == (50.0, 100.0)


# -- filters -------------------------------------------------------------------

def test_layouts_with_count_filters_exactly(store):
    for layout in layouts_with_count(store, 4):
        assert len(layout.points) == 4
    assert layouts_with_count(store, 100) == []
    assert len(layouts_with_count(store, 5)) > 0


def test_vgs_matching_superset(store):
    sig = ComponentSignature(True, True, False, False)
    for d in vgs_matching(store, sig):
        assert d.signature.has_title and d.signature.has_text


def test_vgs_matching_all_slots(store):
    for d in vgs_matching(store, ComponentSignature(True, True, True, True)):
        assert all(d.signature.as_dict().values())
    assert vgs_matching(store, ComponentSignature(True, True, True, True))


def test_vgs_matching_label_covered(store):
    assert vgs_matching(store, ComponentSignature(False, False, True, False))


def test_connections_of_style(store):
    for style in ("FlowShape", "Regular", "Alternate", "Pivot"):
        designs = connections_of_style(store, style)
        assert len(designs) >= 3
        assert all(d.style_class == style for d in designs)


def test_load_deterministic(corpus_root):
    a = load_corpus(corpus_root)
    b = load_corpus(corpus_root)
    assert [l.id for l in a.layouts] == [l.id for l in b.layouts]
    assert a.layouts == b.layouts
    assert [d.id for d in a.vgs] == [d.id for d in b.vgs]


def test_every_vg_cluster_is_valid(store):
    for d in store.vgs:
        assert d.clusters
        for c in d.clusters:
            assert 0 <= c < 12
