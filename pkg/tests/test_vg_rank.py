import math
import random

import pytest

from infoforge.assets import load_corpus
from infoforge.content import ComponentSignature
from infoforge.errors import NoDesignsForStyle
from infoforge.indexing import build_tfidf_index
from infoforge.vg_rank import rank_connection_styles, rank_vgs, sample_connection_designs

SIG_TT = ComponentSignature(True, True, False, False)


@pytest.fixture(scope="module")
def store(corpus_root):
    return load_corpus(corpus_root)


@pytest.fixture(scope="module")
def vg_index(store):
    return build_tfidf_index({d.id: d.clusters for d in store.vgs})


@pytest.fixture(scope="module")
def c_vif_index(store):
    return build_tfidf_index(store.c_vif_documents)


# -- vg ranking -------------------------------------------------------------------

def test_rank_vgs_rarer_membership_wins():
    index = build_tfidf_index({"A": {1}, "B": {1, 2}, "C": {2}})

    class FakeDesign:
        def __init__(self, did):
            self.id = did
            self.signature = ComponentSignature(True, True, False, False)

    class FakeStore:
        vgs = (FakeDesign("A"), FakeDesign("B"))

    ranking = rank_vgs(index, FakeStore(), 1, SIG_TT, top_k=5)
    assert [d for d, _ in ranking.entries] == ["A", "B"]
    assert not ranking.relaxed
    assert ranking.entries[0][1] == pytest.approx(math.log(3 / 2))
    assert ranking.entries[1][1] == pytest.approx(0.5 * math.log(3 / 2))


def test_rank_vgs_signature_filter_dominates(store, vg_index):
    sig_image = ComponentSignature(False, False, False, True)
    ranking = rank_vgs(vg_index, store, 0, sig_image, top_k=20)
    for design_id, _ in ranking.entries:
        assert store.vg(design_id).signature.has_image


def test_rank_vgs_scores_non_increasing(store, vg_index):
    for cluster in range(12):
        ranking = rank_vgs(vg_index, store, cluster, SIG_TT, top_k=10)
        scores = [s for _, s in ranking.entries]
        assert scores == sorted(scores, reverse=True)


def test_rank_vgs_every_entry_satisfies_signature(store, vg_index):
    sig = ComponentSignature(True, False, True, False)
    ranking = rank_vgs(vg_index, store, 4, sig, top_k=20)
    for design_id, _ in ranking.entries:
        assert store.vg(design_id).signature.is_superset_of(sig)


def test_rank_vgs_relaxation_on_empty_intersection(store):
    # index where no admissible design belongs to the queried cluster
    index = build_tfidf_index({d.id: (11,) for d in store.vgs})
    ranking = rank_vgs(index, store, 3, SIG_TT, top_k=5)
    assert ranking.relaxed
    assert ranking.entries
    assert all(score == 0.0 for _, score in ranking.entries)


def test_rank_vgs_rarity_preference_on_membership_deletion(store):
    rng = random.Random(31)
    base = {d.id: set(d.clusters) for d in store.vgs}
    for _ in range(200):
        target = rng.choice(sorted(base))
        query = rng.choice(sorted(base[target]))
        removable = [c for c in base[target] if c != query]
        if not removable:
            continue
        mutated = {k: set(v) for k, v in base.items()}
        mutated[target].discard(rng.choice(removable))
        before = rank_vgs(build_tfidf_index(base), store, query, ComponentSignature(False, False, False, False), top_k=99)
        after = rank_vgs(build_tfidf_index(mutated), store, query, ComponentSignature(False, False, False, False), top_k=99)
        ids_before = [d for d, _ in before.entries]
        ids_after = [d for d, _ in after.entries]
        if target in ids_before and target in ids_after:
            assert ids_after.index(target) <= ids_before.index(target)


# -- connection style ranking ---------------------------------------------------------

def test_style_ranking_five_entries_with_pivot(c_vif_index):
    ranking = rank_connection_styles(c_vif_index, 0, has_pivot=True)
    assert len(ranking.entries) == 5
    assert {s for s, _ in ranking.entries} == {"FlowShape", "Regular", "Alternate", "Pivot", "None"}


def test_style_ranking_pivot_tops_circular_cluster(c_vif_index, store):
    # hand oracle over the shipped membership table: the circular family (4)
    # appears only in the Pivot class document
    docs = store.c_vif_documents
    assert 4 in docs["Pivot"] and all(4 not in docs[s] for s in docs if s != "Pivot")
    expected = (1 / len(docs["Pivot"])) * math.log(5 / 1)
    ranking = rank_connection_styles(c_vif_index, 4, has_pivot=True)
    assert ranking.entries[0][0] == "Pivot"
    assert ranking.entries[0][1] == pytest.approx(expected, abs=1e-12)


def test_style_ranking_without_pivot_drops_pivot(c_vif_index):
    ranking = rank_connection_styles(c_vif_index, 4, has_pivot=False)
    assert len(ranking.entries) == 4
    assert all(s != "Pivot" for s, _ in ranking.entries)


def test_style_ranking_without_pivot_renormalized(c_vif_index):
    ranking = rank_connection_styles(c_vif_index, 0, has_pivot=False)
    total = sum(v for _, v in ranking.entries)
    assert total == pytest.approx(1.0) or total == 0.0


def test_style_ranking_is_permutation_non_increasing(c_vif_index):
    for cluster in range(12):
        for has_pivot in (True, False):
            ranking = rank_connection_styles(c_vif_index, cluster, has_pivot)
            scores = [v for _, v in ranking.entries]
            assert scores == sorted(scores, reverse=True)
            names = [s for s, _ in ranking.entries]
            assert len(names) == len(set(names))


# -- connection design sampling ----------------------------------------------------------

def test_sample_deterministic_per_seed(store):
    a = sample_connection_designs(store, "Regular", seed=7, k=3)
    b = sample_connection_designs(store, "Regular", seed=7, k=3)
    assert [d.id for d in a] == [d.id for d in b]
    assert len(a) == 3


def test_sample_k_exceeds_pool(store):
    designs = sample_connection_designs(store, "Alternate", seed=1, k=99)
    assert {d.style_class for d in designs} == {"Alternate"}
    assert len(designs) == len([c for c in store.connections if c.style_class == "Alternate"])


def test_sample_unknown_style_raises(store):
    with pytest.raises(NoDesignsForStyle):
        sample_connection_designs(store, "None", seed=1, k=2)
