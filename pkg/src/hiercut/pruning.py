"""Degree-threshold pruning with safeguarding and later reattachment.

Pruning drops low-degree nodes (and their edges) before detection; every
removed node keeps a snapshot of its original neighborhood so the detected
communities can be reported on the whole network afterwards.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import CoverageError, EmptyPruneError
from .graph import Graph, GraphStats, Partition, stats, subgraph

MODES = ("one-pass", "iterative")


@dataclass(frozen=True)
class RemovedNode:
    node: int
    snapshot: frozenset[int]  # neighbors in the original graph


@dataclass(frozen=True)
class PruneRecord:
    threshold: int
    mode: str
    removed_nodes: tuple[RemovedNode, ...]
    pruned_graph: Graph
    kept_ids: tuple[int, ...]  # pruned id -> original id
    stats_trace: tuple[GraphStats, ...]  # one entry per threshold level 1..threshold


@dataclass(frozen=True)
class ReattachEntry:
    node: int
    community: int
    rule: str  # "kept", "plurality", or "largest"


def _survivors(g: Graph, threshold: int, mode: str) -> set[int]:
    if mode == "one-pass":
        return {u for u in range(g.n) if g.degree(u) >= threshold}
    kept = set(range(g.n))
    while True:
        drop = {u for u in kept if sum(1 for v in g.adjacency[u] if v in kept) < threshold}
        if not drop:
            return kept
        kept -= drop


def prune(g: Graph, threshold: int, mode: str = "one-pass") -> PruneRecord:
    """Remove nodes of degree < threshold (cascading in iterative mode).

    Raises EmptyPruneError, naming the highest threshold that still leaves
    nodes, when the requested one would delete everything.
    """
    if threshold < 1:
        raise ValueError(f"threshold must be >= 1, got {threshold}")
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    kept = _survivors(g, threshold, mode)
    if not kept:
        surviving = next(
            (t for t in range(threshold - 1, 0, -1) if _survivors(g, t, mode)), 0
        )
        raise EmptyPruneError(threshold, surviving)
    removed = tuple(
        RemovedNode(node=u, snapshot=g.adjacency[u])
        for u in range(g.n)
        if u not in kept
    )
    pruned, kept_ids = subgraph(g, kept)
    trace = tuple(
        stats(subgraph(g, _survivors(g, level, mode))[0])
        for level in range(1, threshold + 1)
    )
    return PruneRecord(
        threshold=threshold,
        mode=mode,
        removed_nodes=removed,
        pruned_graph=pruned,
        kept_ids=kept_ids,
        stats_trace=trace,
    )


def stats_sweep(g: Graph, thresholds: Sequence[int], mode: str = "one-pass") -> list[GraphStats]:
    """Structural stats of the pruned graph at each threshold (ascending)."""
    if list(thresholds) != sorted(thresholds):
        raise ValueError("thresholds must be ascending")
    out = []
    for t in thresholds:
        kept = _survivors(g, t, mode)
        if not kept:
            surviving = next((s for s in range(t - 1, 0, -1) if _survivors(g, s, mode)), 0)
            raise EmptyPruneError(t, surviving)
        out.append(stats(subgraph(g, kept)[0]))
    return out


def reattach(pr: PruneRecord, p: Partition) -> Partition:
    partition, _ = reattach_with_audit(pr, p)
    return partition


def reattach_with_audit(pr: PruneRecord, p: Partition) -> tuple[Partition, tuple[ReattachEntry, ...]]:
    """Extend a pruned-graph partition to the original node set.

    Unassigned removed nodes join, in simultaneous rounds, the community
    holding the plurality of their already-assigned snapshot neighbors
    (ties: larger community, then smaller community id); whatever is left
    after the fixpoint joins the largest community.
    """
    if len(p.labels) != pr.pruned_graph.n:
        raise CoverageError(
            f"partition covers {len(p.labels)} nodes, pruned graph has {pr.pruned_graph.n}"
        )
    total = pr.pruned_graph.n + len(pr.removed_nodes)
    assigned: dict[int, int] = {}
    audit: list[ReattachEntry] = []
    # stable community ids: smallest original node id among the kept members
    members: dict[int, list[int]] = {}
    for pruned_id, cid in enumerate(p.labels):
        members.setdefault(cid, []).append(pr.kept_ids[pruned_id])
    community_id = {cid: min(orig) for cid, orig in members.items()}
    for pruned_id, cid in enumerate(p.labels):
        orig = pr.kept_ids[pruned_id]
        assigned[orig] = community_id[cid]
        audit.append(ReattachEntry(node=orig, community=community_id[cid], rule="kept"))

    pending = {rn.node: rn.snapshot for rn in pr.removed_nodes}
    while pending:
        sizes: dict[int, int] = {}
        for cid in assigned.values():
            sizes[cid] = sizes.get(cid, 0) + 1
        placed: dict[int, int] = {}
        for node in sorted(pending):
            votes: dict[int, int] = {}
            for nbr in pending[node]:
                cid = assigned.get(nbr)
                if cid is not None:
                    votes[cid] = votes.get(cid, 0) + 1
            if votes:
                placed[node] = min(
                    votes, key=lambda cid: (-votes[cid], -sizes.get(cid, 0), cid)
                )
        if not placed:
            break
        for node, cid in placed.items():
            assigned[node] = cid
            audit.append(ReattachEntry(node=node, community=cid, rule="plurality"))
            del pending[node]

    if pending:
        sizes = {}
        for cid in assigned.values():
            sizes[cid] = sizes.get(cid, 0) + 1
        fallback = min(sizes, key=lambda cid: (-sizes[cid], cid))
        for node in sorted(pending):
            assigned[node] = fallback
            audit.append(ReattachEntry(node=node, community=fallback, rule="largest"))

    labels = tuple(assigned[node] for node in range(total))
    return Partition.from_assignment(labels), tuple(sorted(audit, key=lambda e: e.node))
