"""Stage 2: rank group designs and connection styles for a layout cluster.

Both rankings run over the membership-weighted indices built offline. A
design qualifies only when its placeholder slots cover the content's
components; an empty intersection between the slot filter and the cluster's
member designs relaxes to the slot filter alone with zero scores rather
than failing, flagged on the result.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .assets import CONNECTION_STYLES, AssetStore, ConnectionDesign, connections_of_style, vgs_matching
from .content import ComponentSignature
from .errors import NoDesignsForStyle
from .indexing import TfidfIndex


@dataclass(frozen=True)
class VgRanking:
    entries: tuple[tuple[str, float], ...]  # (design id, score), best first
    cluster_id: int
    signature: ComponentSignature
    relaxed: bool = False

    def as_dict(self) -> dict:
        return {
            "entries": [{"design_id": d, "score": s} for d, s in self.entries],
            "cluster_id": self.cluster_id,
            "signature": self.signature.as_dict(),
            "relaxed": self.relaxed,
        }


@dataclass(frozen=True)
class ConnectionStyleRanking:
    entries: tuple[tuple[str, float], ...]  # (style, score), best first
    cluster_id: int
    has_pivot: bool

    def as_dict(self) -> dict:
        return {
            "entries": [{"style": s, "score": v} for s, v in self.entries],
            "cluster_id": self.cluster_id,
            "has_pivot": self.has_pivot,
        }


def rank_vgs(
    index: TfidfIndex,
    store: AssetStore,
    cluster_id: int,
    sig: ComponentSignature,
    top_k: int = 8,
) -> VgRanking:
    """Slot-compatible designs ranked for the cluster, rarest-first on ties
    of membership; falls back to slot-compatible designs alone when the
    cluster has no member designs."""
    admissible = vgs_matching(store, sig)
    members = [d.id for d in admissible if cluster_id in index.documents.get(d.id, ())]
    if members:
        entries = tuple(index.rank(cluster_id, items=members)[:top_k])
        relaxed = False
    else:
        entries = tuple((d.id, 0.0) for d in sorted(admissible, key=lambda d: d.id)[:top_k])
        relaxed = True
    return VgRanking(entries=entries, cluster_id=cluster_id, signature=sig, relaxed=relaxed)


def rank_connection_styles(index: TfidfIndex, cluster_id: int, has_pivot: bool) -> ConnectionStyleRanking:
    """All five style classes scored for the cluster; without a pivot the
    Pivot class is dropped and the remaining scores renormalized."""
    styles = [s for s in CONNECTION_STYLES if has_pivot or s != "Pivot"]
    scored = [(s, index.score(s, cluster_id)) for s in styles]
    if not has_pivot:
        total = sum(v for _, v in scored)
        if total > 0:
            scored = [(s, v / total) for s, v in scored]
    scored.sort(key=lambda pair: (-pair[1], pair[0]))
    return ConnectionStyleRanking(entries=tuple(scored), cluster_id=cluster_id, has_pivot=has_pivot)


def sample_connection_designs(
    store: AssetStore,
    style: str,
    seed: int,
    k: int = 3,
) -> list[ConnectionDesign]:
    """k designs of the style drawn without replacement, fixed per seed."""
    if k < 1:
        raise ValueError("k must be >= 1")
    pool = sorted(connections_of_style(store, style), key=lambda d: d.id)
    if not pool:
        raise NoDesignsForStyle(f"no connection designs with style {style!r}")
    rng = random.Random(seed)
    return rng.sample(pool, min(k, len(pool)))
