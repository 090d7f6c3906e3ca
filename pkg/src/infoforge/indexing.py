"""Offline index construction: layout clustering and design-ranking tables.

Each flow layout is rendered to a small binary raster, rasters are projected
to 50 principal components, the component vectors are embedded in the plane,
and the plane is carved into k clusters seeded from density peaks. Design
membership tables (design id -> cluster ids) are then scored with tf-idf, so
designs confined to few cluster families outrank ubiquitous ones inside
their own families.

Outputs are three JSON files under the corpus root: ``cluster_model.json``,
``vg_vif_index.json``, ``c_vif_index.json``. The whole build is
deterministic for a fixed seed.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.optimize import linear_sum_assignment
from sklearn.cluster import DBSCAN, kmeans_plusplus
from sklearn.decomposition import PCA
from sklearn.manifold import TSNE

from .assets import AssetStore, VifLayout
from .errors import TooFewSamples

RASTER_SIZE = 64
LINE_RADIUS = 1.0   # 2 px stroke
DOT_RADIUS = 1.5    # 3 px vertex dots
PCA_COMPONENTS = 50
DEFAULT_K = 12
DEFAULT_PERPLEXITY = 15.0
DBSCAN_MIN_PTS = 4

CLUSTER_MODEL_FILE = "cluster_model.json"
VG_INDEX_FILE = "vg_vif_index.json"
C_VIF_INDEX_FILE = "c_vif_index.json"


def rasterize_vif(layout: VifLayout, size: int = RASTER_SIZE) -> np.ndarray:
    """Binary image of the layout polyline: 2 px stroke, 3 px vertex dots."""
    pts = np.asarray(layout.points, dtype=float) * (size - 1)
    yy, xx = np.mgrid[0:size, 0:size]
    grid = np.stack([xx.ravel(), yy.ravel()], axis=1).astype(float)
    img = np.zeros(size * size, dtype=bool)
    for a, b in zip(pts, pts[1:]):
        ab = b - a
        denom = float(ab @ ab)
        if denom == 0.0:
            continue
        t = np.clip((grid - a) @ ab / denom, 0.0, 1.0)
        nearest = a + t[:, None] * ab
        img |= np.hypot(*(grid - nearest).T) <= LINE_RADIUS
    for v in pts:
        img |= np.hypot(grid[:, 0] - v[0], grid[:, 1] - v[1]) <= DOT_RADIUS
    return img.reshape(size, size)


@dataclass(frozen=True)
class PcaModel:
    mean: np.ndarray
    components: np.ndarray          # (C, F) orthonormal rows
    explained_variance: np.ndarray  # non-increasing

    def project(self, flat: np.ndarray) -> np.ndarray:
        return (np.atleast_2d(flat) - self.mean) @ self.components.T


def fit_pca(rasters: list[np.ndarray], n_components: int = PCA_COMPONENTS) -> PcaModel:
    if len(rasters) < n_components + 1:
        raise TooFewSamples(f"need >= {n_components + 1} rasters, got {len(rasters)}")
    data = np.stack([r.ravel().astype(float) for r in rasters])
    pca = PCA(n_components=n_components, svd_solver="full")
    pca.fit(data)
    return PcaModel(
        mean=pca.mean_,
        components=pca.components_,
        explained_variance=pca.explained_variance_,
    )


def embed_2d(vectors: np.ndarray, seed: int = 0, perplexity: float = DEFAULT_PERPLEXITY) -> np.ndarray:
    """Plane embedding of component vectors, deterministic under a fixed seed.

    t-SNE with PCA init and the exact gradient; duplicate inputs start from
    identical positions and stay identical. Inputs too small for a t-SNE run
    fall back to the leading two components.
    """
    vectors = np.asarray(vectors, dtype=float)
    n = len(vectors)
    if n <= 3:
        out = vectors[:, :2].copy() if vectors.shape[1] >= 2 else np.pad(vectors, ((0, 0), (0, 2 - vectors.shape[1])))
        return out
    eff_perplexity = min(perplexity, max(1.0, (n - 1) / 3.0))
    tsne = TSNE(
        n_components=2,
        perplexity=eff_perplexity,
        init="pca",
        random_state=seed,
        method="exact",
        max_iter=1000,
    )
    return tsne.fit_transform(vectors)


def _kdist_elbow_eps(planar: np.ndarray, min_pts: int) -> float:
    """DBSCAN radius from the knee of the sorted k-distance curve."""
    n = len(planar)
    k = min(min_pts, n - 1)
    d = np.hypot(
        planar[:, None, 0] - planar[None, :, 0],
        planar[:, None, 1] - planar[None, :, 1],
    )
    kdist = np.sort(np.sort(d, axis=1)[:, k])
    lo, hi = kdist[0], kdist[-1]
    if hi == lo:
        return float(hi)
    # farthest point from the chord joining curve ends
    xs = np.arange(n) / (n - 1)
    ys = (kdist - lo) / (hi - lo)
    knee = int(np.argmax(np.abs(ys - xs)))
    return float(kdist[knee]) if kdist[knee] > 0 else float(hi)


@dataclass(frozen=True)
class VifEmbedding:
    """One layout's trip through the pipeline: raster, components, plane."""

    layout_id: str
    raster: np.ndarray
    pca_vector: np.ndarray
    planar: tuple[float, float]


@dataclass
class ClusterModel:
    k: int
    centers: np.ndarray                 # (k, 2) in the planar space
    assignments: dict[str, int]         # layout id -> cluster id
    pca: PcaModel
    planar: dict[str, tuple[float, float]]
    pca_vectors: dict[str, np.ndarray]
    seed: int = 0
    raster_size: int = RASTER_SIZE
    diagnostics: dict = field(default_factory=dict)


def embed_layouts(
    layouts: list[VifLayout],
    pca: PcaModel,
    seed: int = 0,
    perplexity: float = DEFAULT_PERPLEXITY,
) -> list[VifEmbedding]:
    """Raster and project every layout, then place them in the plane."""
    ordered = sorted(layouts, key=lambda l: l.id)
    rasters = [rasterize_vif(l) for l in ordered]
    vectors = pca.project(np.stack([r.ravel().astype(float) for r in rasters]))
    planar = embed_2d(vectors, seed=seed, perplexity=perplexity)
    return [
        VifEmbedding(layout_id=l.id, raster=r, pca_vector=v, planar=(float(x), float(y)))
        for l, r, v, (x, y) in zip(ordered, rasters, vectors, planar)
    ]


def cluster_vifs(
    planar: np.ndarray,
    k: int = DEFAULT_K,
    seed: int = 0,
    eps: float | None = None,
    min_pts: int = DBSCAN_MIN_PTS,
) -> tuple[np.ndarray, np.ndarray, dict]:
    """Carve the plane into exactly k clusters seeded at density peaks.

    DBSCAN proposes dense regions; the k most populated region centroids
    become centers, then points are iteratively reassigned to their nearest
    center and centers recomputed until assignments stop changing. Fewer
    than k density peaks falls back to k-means++ seeding, noted in the
    returned diagnostics.

    Returns (centers (k,2), labels (n,), diagnostics).
    """
    planar = np.asarray(planar, dtype=float)
    n = len(planar)
    if n < k:
        raise ValueError(f"need >= {k} points, got {n}")
    diagnostics: dict = {}
    if eps is None:
        eps = _kdist_elbow_eps(planar, min_pts)
    diagnostics["dbscan_eps"] = eps

    centers = None
    if eps > 0:
        db = DBSCAN(eps=eps, min_samples=min_pts).fit(planar)
        labels = db.labels_
        groups = [np.flatnonzero(labels == c) for c in range(labels.max() + 1)]
        groups.sort(key=lambda idx: (-len(idx), int(idx[0])))
        diagnostics["density_peaks"] = len(groups)
        if len(groups) >= k:
            centers = np.stack([planar[idx].mean(axis=0) for idx in groups[:k]])
    else:
        diagnostics["density_peaks"] = 0

    if centers is None:
        # InsufficientDensity: seed deterministically with k-means++ instead.
        centers, _ = kmeans_plusplus(planar, n_clusters=k, random_state=seed)
        diagnostics["fallback"] = "kmeans++ (insufficient density peaks)"

    labels = np.zeros(n, dtype=int)
    for _ in range(100):
        d = np.hypot(
            planar[:, None, 0] - centers[None, :, 0],
            planar[:, None, 1] - centers[None, :, 1],
        )
        new_labels = np.argmin(d, axis=1)
        # Re-seed empty clusters with the worst-fitting point of a
        # multi-member cluster, so no reseed empties another cluster.
        for c in range(k):
            if not np.any(new_labels == c):
                counts = np.bincount(new_labels, minlength=k)
                movable = np.flatnonzero(counts[new_labels] > 1)
                far = movable[int(np.argmax(d[movable, new_labels[movable]]))]
                centers[c] = planar[far]
                new_labels[far] = c
        if np.array_equal(new_labels, labels) and _ > 0:
            break
        labels = new_labels
        for c in range(k):
            centers[c] = planar[labels == c].mean(axis=0)
    return centers, labels, diagnostics


def _align_to_authored(centers, labels, authored: list[int | None], k: int):
    """Relabel learned clusters to best match authored family ids (Hungarian)."""
    known = [(l, a) for l, a in zip(labels, authored) if a is not None]
    if not known:
        return centers, labels
    m = np.zeros((k, k))
    for l, a in known:
        if a < k:
            m[l, a] += 1
    rows, cols = linear_sum_assignment(-m)
    mapping = {int(r): int(c) for r, c in zip(rows, cols)}
    new_labels = np.array([mapping[int(l)] for l in labels])
    new_centers = np.zeros_like(centers)
    for learned, target in mapping.items():
        new_centers[target] = centers[learned]
    return new_centers, new_labels


def build_cluster_model(
    layouts: list[VifLayout],
    k: int = DEFAULT_K,
    seed: int = 0,
    perplexity: float = DEFAULT_PERPLEXITY,
) -> ClusterModel:
    """Full pipeline: raster -> components -> plane -> k clusters.

    When layouts carry authored cluster ids the learned labels are permuted
    to best agree with them, keeping design membership tables and model
    labels in one vocabulary.
    """
    ordered = sorted(layouts, key=lambda l: l.id)
    pca = fit_pca([rasterize_vif(l) for l in ordered])
    embeddings = embed_layouts(ordered, pca, seed=seed, perplexity=perplexity)
    planar = np.asarray([e.planar for e in embeddings])
    centers, labels, diagnostics = cluster_vifs(planar, k=k, seed=seed)
    centers, labels = _align_to_authored(centers, labels, [l.cluster_id for l in ordered], k)
    return ClusterModel(
        k=k,
        centers=centers,
        assignments={e.layout_id: int(c) for e, c in zip(embeddings, labels)},
        pca=pca,
        planar={e.layout_id: e.planar for e in embeddings},
        pca_vectors={e.layout_id: e.pca_vector for e in embeddings},
        seed=seed,
        diagnostics=diagnostics,
    )


def assign_cluster(model: ClusterModel, layout: VifLayout) -> int:
    """Cluster id for any layout: stored for corpus members, nearest corpus
    neighbor in component space for novel ones."""
    if layout.id in model.assignments:
        return model.assignments[layout.id]
    vec = model.pca.project(rasterize_vif(layout, model.raster_size).ravel().astype(float))[0]
    best_id = min(
        model.pca_vectors,
        key=lambda lid: (float(np.linalg.norm(model.pca_vectors[lid] - vec)), lid),
    )
    return model.assignments[best_id]


# -- tf-idf ---------------------------------------------------------------------

@dataclass(frozen=True)
class TfidfIndex:
    """Membership-weighted index: items are documents, cluster ids are words.

    tf(item, c) = 1/|clusters(item)| for members (set semantics), idf(c) =
    ln(N / df(c)); scores exist exactly for member pairs.
    """

    documents: dict[str, tuple[int, ...]]
    scores: dict[str, dict[int, float]]
    doc_count: int
    df: dict[int, int]

    def score(self, item: str, cluster: int) -> float:
        return self.scores.get(item, {}).get(cluster, 0.0)

    def rank(self, cluster: int, items=None) -> list[tuple[str, float]]:
        """Items scored for a cluster, best first; ties break on item id."""
        pool = self.documents.keys() if items is None else items
        scored = [(item, self.score(item, cluster)) for item in pool]
        scored.sort(key=lambda pair: (-pair[1], pair[0]))
        return scored


def build_tfidf_index(documents: dict[str, tuple[int, ...] | list[int] | set[int]]) -> TfidfIndex:
    if not documents:
        raise ValueError("no documents")
    docs = {item: tuple(sorted(set(clusters))) for item, clusters in documents.items()}
    n = len(docs)
    df: dict[int, int] = {}
    for clusters in docs.values():
        for c in clusters:
            df[c] = df.get(c, 0) + 1
    scores: dict[str, dict[int, float]] = {}
    for item, clusters in docs.items():
        tf = 1.0 / len(clusters) if clusters else 0.0
        scores[item] = {c: tf * math.log(n / df[c]) for c in clusters}
    return TfidfIndex(documents=docs, scores=scores, doc_count=n, df=df)


# -- persistence -------------------------------------------------------------------

def _model_to_json(model: ClusterModel) -> dict:
    return {
        "k": model.k,
        "seed": model.seed,
        "raster_size": model.raster_size,
        "centers": [[float(x), float(y)] for x, y in model.centers],
        "assignments": dict(sorted(model.assignments.items())),
        "planar": {lid: [float(x), float(y)] for lid, (x, y) in sorted(model.planar.items())},
        "pca_vectors": {lid: [float(v) for v in vec] for lid, vec in sorted(model.pca_vectors.items())},
        "pca": {
            "mean": [float(v) for v in model.pca.mean],
            "components": [[float(v) for v in row] for row in model.pca.components],
            "explained_variance": [float(v) for v in model.pca.explained_variance],
        },
        "diagnostics": model.diagnostics,
    }


def _model_from_json(data: dict) -> ClusterModel:
    return ClusterModel(
        k=data["k"],
        centers=np.asarray(data["centers"], dtype=float),
        assignments={k: int(v) for k, v in data["assignments"].items()},
        pca=PcaModel(
            mean=np.asarray(data["pca"]["mean"], dtype=float),
            components=np.asarray(data["pca"]["components"], dtype=float),
            explained_variance=np.asarray(data["pca"]["explained_variance"], dtype=float),
        ),
        planar={k: tuple(v) for k, v in data["planar"].items()},
        pca_vectors={k: np.asarray(v, dtype=float) for k, v in data["pca_vectors"].items()},
        seed=data.get("seed", 0),
        raster_size=data.get("raster_size", RASTER_SIZE),
        diagnostics=data.get("diagnostics", {}),
    )


def _index_to_json(index: TfidfIndex) -> dict:
    return {
        "documents": {item: list(clusters) for item, clusters in sorted(index.documents.items())},
        "doc_count": index.doc_count,
        "df": {str(c): n for c, n in sorted(index.df.items())},
        "scores": {
            item: {str(c): s for c, s in sorted(by_cluster.items())}
            for item, by_cluster in sorted(index.scores.items())
        },
    }


def _index_from_json(data: dict) -> TfidfIndex:
    return TfidfIndex(
        documents={item: tuple(clusters) for item, clusters in data["documents"].items()},
        scores={item: {int(c): s for c, s in by.items()} for item, by in data["scores"].items()},
        doc_count=data["doc_count"],
        df={int(c): n for c, n in data["df"].items()},
    )


@dataclass(frozen=True)
class IndexBundle:
    cluster_model: ClusterModel
    vg_index: TfidfIndex
    c_vif_index: TfidfIndex


def build_indices(store: AssetStore, k: int = DEFAULT_K, seed: int = 0) -> IndexBundle:
    model = build_cluster_model(list(store.layouts), k=k, seed=seed)
    vg_documents = {d.id: d.clusters for d in store.vgs}
    c_vif_documents = dict(store.c_vif_documents) or {"None": tuple()}
    return IndexBundle(
        cluster_model=model,
        vg_index=build_tfidf_index(vg_documents),
        c_vif_index=build_tfidf_index(c_vif_documents),
    )


def write_indices(root: str | Path, bundle: IndexBundle) -> list[Path]:
    root = Path(root)
    written = []
    for name, payload in (
        (CLUSTER_MODEL_FILE, _model_to_json(bundle.cluster_model)),
        (VG_INDEX_FILE, _index_to_json(bundle.vg_index)),
        (C_VIF_INDEX_FILE, _index_to_json(bundle.c_vif_index)),
    ):
        path = root / name
        path.write_text(json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n", encoding="utf-8")
        written.append(path)
    return written


def load_indices(root: str | Path) -> IndexBundle | None:
    root = Path(root)
    paths = [root / CLUSTER_MODEL_FILE, root / VG_INDEX_FILE, root / C_VIF_INDEX_FILE]
    if not all(p.exists() for p in paths):
        return None
    return IndexBundle(
        cluster_model=_model_from_json(json.loads(paths[0].read_text(encoding="utf-8"))),
        vg_index=_index_from_json(json.loads(paths[1].read_text(encoding="utf-8"))),
        c_vif_index=_index_from_json(json.loads(paths[2].read_text(encoding="utf-8"))),
    )


def ensure_indices(store: AssetStore, k: int = DEFAULT_K, seed: int = 0, write: bool = False) -> IndexBundle:
    """Load prebuilt index files from the corpus root, or build on demand."""
    bundle = load_indices(store.root)
    if bundle is not None:
        return bundle
    bundle = build_indices(store, k=k, seed=seed)
    if write:
        try:
            write_indices(store.root, bundle)
        except OSError:
            pass  # read-only corpus; keep the in-memory bundle
    return bundle
