"""Edge-selection scores: global betweenness, edge clustering, and the ten
local link-prediction indices, plus incremental rescoring after a removal.

All functions accept either a :class:`~hiercut.graph.Graph` or the detector's
mutable working copy; they only rely on ``n``, ``adjacency``, ``iter_edges()``
and ``edge_id()``.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from enum import Enum

from .errors import ContractViolation, EdgeLookupError

INFINITE = math.inf  # select-min sentinel: never chosen while finite scores exist


class CriterionKind(str, Enum):
    BETWEENNESS = "betweenness"  # shortest-path load, the only select-max score
    ECC = "ecc"                  # edge clustering coefficient (triangle density)
    CN = "cn"                    # common neighbors
    AA = "aa"                    # common neighbors, log-degree damped
    RA = "ra"                    # common neighbors, degree damped
    PA = "pa"                    # degree product
    JA = "ja"                    # intersection over union
    SO = "so"                    # intersection over mean degree
    SA = "sa"                    # cosine-style normalization
    HP = "hp"                    # intersection over min degree
    HD = "hd"                    # intersection over max degree
    LLHN = "llhn"                # intersection over degree product


LOCAL_INDEX_KINDS = frozenset(
    {
        CriterionKind.CN,
        CriterionKind.AA,
        CriterionKind.RA,
        CriterionKind.PA,
        CriterionKind.JA,
        CriterionKind.SO,
        CriterionKind.SA,
        CriterionKind.HP,
        CriterionKind.HD,
        CriterionKind.LLHN,
    }
)

#: Criteria whose value at one edge depends on the degree of shared neighbors,
#: so removing (u, v) also dirties edges between neighbors of u (or of v).
_NEIGHBOR_DEGREE_KINDS = frozenset({CriterionKind.AA, CriterionKind.RA})

SALTON_VARIANTS = ("paper", "standard")


@dataclass(frozen=True)
class Criterion:
    """An edge-removal strategy: what to score and which extreme to remove."""

    kind: CriterionKind
    salton_variant: str = "paper"

    def __post_init__(self):
        if self.salton_variant not in SALTON_VARIANTS:
            raise ContractViolation(
                f"salton_variant must be one of {SALTON_VARIANTS}, got {self.salton_variant!r}"
            )

    @property
    def direction(self) -> str:
        """"max" for betweenness (bridges score high), "min" for everything else."""
        return "max" if self.kind is CriterionKind.BETWEENNESS else "min"


@dataclass
class EdgeScoreTable:
    """Per-edge-id scores for the live edges, with a pending-rescore set."""

    scores: dict[int, float]
    dirty: set[int] = field(default_factory=set)


def _require_live(g, u: int, v: int) -> None:
    if not (0 <= u < g.n and 0 <= v < g.n) or v not in g.adjacency[u]:
        raise EdgeLookupError(f"edge ({u}, {v}) is not live")


# --------------------------------------------------------------------------
# Individual scores
# --------------------------------------------------------------------------

def edge_betweenness(g) -> EdgeScoreTable:
    """Shortest-path betweenness of every edge.

    For each unordered node pair the fraction of its shortest paths crossing
    the edge is accumulated; pairs in different components contribute 0.
    Single-source accumulation over BFS dags, O(m) per source.
    """
    scores = {eid: 0.0 for eid, _, _ in g.iter_edges()}
    adjacency = [list(g.adjacency[u]) for u in range(g.n)]
    for source in range(g.n):
        dist = [-1] * g.n
        sigma = [0] * g.n
        preds: list[list[int]] = [[] for _ in range(g.n)]
        dist[source] = 0
        sigma[source] = 1
        queue = deque([source])
        order = []
        while queue:
            v = queue.popleft()
            order.append(v)
            dv = dist[v]
            sv = sigma[v]
            for w in adjacency[v]:
                if dist[w] < 0:
                    dist[w] = dv + 1
                    queue.append(w)
                if dist[w] == dv + 1:
                    sigma[w] += sv
                    preds[w].append(v)
        delta = [0.0] * g.n
        for w in reversed(order):
            coeff = (1.0 + delta[w]) / sigma[w]
            for v in preds[w]:
                c = sigma[v] * coeff
                scores[g.edge_id(v, w)] += c
                delta[v] += c
    for eid in scores:
        scores[eid] /= 2.0  # each unordered pair was seen from both endpoints
    return EdgeScoreTable(scores=scores)


def edge_clustering_coefficient(g, u: int, v: int) -> float:
    """Triangles on the edge (plus one) over the most it could have.

    Returns the infinite sentinel when an endpoint has degree 1, i.e. when
    no triangle could ever include this edge.
    """
    _require_live(g, u, v)
    z = len(g.adjacency[u] & g.adjacency[v])
    ceiling = min(len(g.adjacency[u]) - 1, len(g.adjacency[v]) - 1)
    if ceiling == 0:
        return INFINITE
    return (z + 1) / ceiling


def local_index(g, u: int, v: int, kind: CriterionKind, salton_variant: str = "paper") -> float:
    """One of the ten neighborhood-similarity scores for a live edge.

    Neighbor sets are taken as-is, so each endpoint is a member of the
    other's set. Endpoint degrees are therefore >= 1 and every common
    neighbor has degree >= 2, which keeps all denominators meaningful.
    """
    if kind not in LOCAL_INDEX_KINDS:
        raise ContractViolation(f"{kind.value} is not a local index")
    _require_live(g, u, v)
    gu = g.adjacency[u]
    gv = g.adjacency[v]
    ku = len(gu)
    kv = len(gv)
    common = gu & gv
    if kind is CriterionKind.CN:
        return float(len(common))
    if kind is CriterionKind.AA:
        return sum(1.0 / math.log(len(g.adjacency[z])) for z in common)
    if kind is CriterionKind.RA:
        return sum(1.0 / len(g.adjacency[z]) for z in common)
    if kind is CriterionKind.PA:
        return float(ku * kv)
    if kind is CriterionKind.JA:
        return len(common) / len(gu | gv)
    if kind is CriterionKind.SO:
        return 2.0 * len(common) / (ku + kv)
    if kind is CriterionKind.SA:
        if salton_variant == "paper":
            return len(common) / math.sqrt(ku + kv)
        return len(common) / math.sqrt(ku * kv)
    if kind is CriterionKind.HP:
        return len(common) / min(ku, kv)
    if kind is CriterionKind.HD:
        return len(common) / max(ku, kv)
    if kind is CriterionKind.LLHN:
        return len(common) / (ku * kv)
    raise ContractViolation(f"unhandled kind {kind!r}")


def _score_edge(g, u: int, v: int, criterion: Criterion) -> float:
    if criterion.kind is CriterionKind.ECC:
        return edge_clustering_coefficient(g, u, v)
    return local_index(g, u, v, criterion.kind, criterion.salton_variant)


# --------------------------------------------------------------------------
# Whole-table operations
# --------------------------------------------------------------------------

def score_all(g, criterion: Criterion) -> EdgeScoreTable:
    """Score every live edge from scratch under ``criterion``."""
    if criterion.kind is CriterionKind.BETWEENNESS:
        return edge_betweenness(g)
    return EdgeScoreTable(
        scores={eid: _score_edge(g, u, v, criterion) for eid, u, v in g.iter_edges()}
    )


def rescore_scope(g, u: int, v: int, kind: CriterionKind) -> set[int] | None:
    """Edge ids whose score may have changed after removing edge (u, v).

    ``g`` is the graph *after* the removal. Returns None for betweenness,
    meaning everything must be recomputed. For local criteria the scope is
    the edges incident to an endpoint, widened for degree-weighted indices
    to the edges that count u or v among their shared neighbors.
    """
    if kind is CriterionKind.BETWEENNESS:
        return None
    scope: set[int] = set()
    for end in (u, v):
        for nbr in g.adjacency[end]:
            scope.add(g.edge_id(end, nbr))
    if kind in _NEIGHBOR_DEGREE_KINDS:
        for end in (u, v):
            nbrs = sorted(g.adjacency[end])
            for i, x in enumerate(nbrs):
                gx = g.adjacency[x]
                for y in nbrs[i + 1:]:
                    if y in gx:
                        scope.add(g.edge_id(x, y))
    return scope


def rescore_after_removal(g, u: int, v: int, criterion: Criterion, table: EdgeScoreTable) -> EdgeScoreTable:
    """Bring ``table`` up to date after edge (u, v) was removed from ``g``.

    Local criteria rescore only the affected neighborhood; betweenness is a
    global property and is recomputed outright. The input table must cover
    exactly the live edges (the removed edge's entry already popped).
    """
    live = {eid for eid, _, _ in g.iter_edges()}
    stale = set(table.scores) - live
    if stale:
        raise ContractViolation(
            f"score table contains removed edge id(s) {sorted(stale)}"
        )
    missing = live - set(table.scores)
    if missing:
        raise ContractViolation(f"score table is missing live edge id(s) {sorted(missing)}")
    if criterion.kind is CriterionKind.BETWEENNESS:
        return edge_betweenness(g)
    updated = EdgeScoreTable(scores=dict(table.scores), dirty=set(rescore_scope(g, u, v, criterion.kind)))
    flush(g, criterion, updated)
    return updated


def flush(g, criterion: Criterion, table: EdgeScoreTable) -> None:
    """Recompute every dirty entry in place and clear the dirty set."""
    for eid in table.dirty:
        eu, ev = g.edges[eid]
        table.scores[eid] = _score_edge(g, eu, ev, criterion)
    table.dirty.clear()


def all_criteria(salton_variant: str = "paper") -> tuple[Criterion, ...]:
    """The twelve criteria in canonical order."""
    return tuple(Criterion(kind, salton_variant) for kind in CriterionKind)
