"""Newman modularity of a partition against a reference graph."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import UndefinedInputError
from .graph import Graph, Partition, check_coverage


@dataclass(frozen=True)
class ModularityReport:
    q_by_k: dict[int, float]
    best_k: int
    best_q: float


def modularity(g: Graph, p: Partition) -> float:
    """Q = sum over communities of intra-edge fraction minus squared degree share.

    Always evaluated against ``g`` itself; callers detecting on a pruned copy
    must reattach the partition to the full graph first.
    """
    check_coverage(g, p)
    if g.m == 0:
        raise UndefinedInputError("modularity is undefined for a graph with no edges")
    intra: dict[int, int] = {}
    degsum: dict[int, int] = {}
    for node, cid in enumerate(p.labels):
        degsum[cid] = degsum.get(cid, 0) + g.degree(node)
    for _, u, v in g.iter_edges():
        if p.labels[u] == p.labels[v]:
            cid = p.labels[u]
            intra[cid] = intra.get(cid, 0) + 1
    m = g.m
    return sum(
        intra.get(cid, 0) / m - (degsum[cid] / (2 * m)) ** 2 for cid in degsum
    )


def modularity_curve(g: Graph, dendrogram, k_range) -> ModularityReport:
    """Q at every requested community count, via cut + modularity."""
    q_by_k: dict[int, float] = {}
    for k in k_range:
        q_by_k[k] = modularity(g, dendrogram.cut(k))
    best_k = max(q_by_k, key=lambda k: (q_by_k[k], -k))
    return ModularityReport(q_by_k=q_by_k, best_k=best_k, best_q=q_by_k[best_k])
