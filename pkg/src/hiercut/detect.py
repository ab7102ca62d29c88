"""Divisive hierarchical detection loop and the resulting removal log.

Each step removes the optimum edge for the configured criterion (ties break
to the lowest stable edge id), rescoring per the criterion's locality. A step
that disconnects its component is recorded as a split, and the node partition
at every reached community count is cached for later cuts.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import ConfigError, UnreachableCutError
from .graph import Graph, Partition, connected_components
from .scoring import (
    Criterion,
    CriterionKind,
    EdgeScoreTable,
    INFINITE,
    rescore_after_removal,
    score_all,
)


@dataclass(frozen=True)
class RemovalStep:
    step: int
    edge_id: int
    u: int
    v: int
    score: float
    split: bool
    components_after: int
    degenerate: bool = False


@dataclass(frozen=True)
class DetectionConfig:
    criterion: Criterion
    k_max: int = 10
    stop: str = "at-k-max"  # or "exhaust-edges"

    def __post_init__(self):
        if self.stop not in ("at-k-max", "exhaust-edges"):
            raise ConfigError(f"unknown stop rule {self.stop!r}")
        if self.k_max < 2:
            raise ConfigError(f"k_max must be at least 2, got {self.k_max}")


@dataclass
class Dendrogram:
    """Ordered edge-removal log plus cached partitions per community count."""

    n: int
    initial_components: int
    steps: list[RemovalStep]
    partitions: dict[int, Partition] = field(default_factory=dict, repr=False)

    @property
    def final_components(self) -> int:
        return self.steps[-1].components_after if self.steps else self.initial_components

    def cut(self, k: int) -> Partition:
        """Partition at the first moment the working graph had k components."""
        try:
            return self.partitions[k]
        except KeyError:
            raise UnreachableCutError(
                f"community count {k} was never reached "
                f"(log covers {self.initial_components}..{self.final_components})"
            ) from None

    def reachable_counts(self) -> tuple[int, ...]:
        return tuple(sorted(self.partitions))

    def to_json(self) -> str:
        """Removal log as stable JSON (one object per step)."""
        payload = {
            "initial_components": self.initial_components,
            "steps": [
                {
                    "step": s.step,
                    "edge_id": s.edge_id,
                    "u": s.u,
                    "v": s.v,
                    "score": "inf" if s.score == INFINITE else s.score,
                    "split": s.split,
                    "components_after": s.components_after,
                    "degenerate": s.degenerate,
                }
                for s in self.steps
            ],
        }
        return json.dumps(payload, indent=1, sort_keys=True)


class WorkingGraph:
    """Mutable view of a Graph for one detection run.

    Keeps the original edge table (ids stay stable) and a live-edge set;
    satisfies the graph protocol the scoring functions expect.
    """

    def __init__(self, g: Graph):
        self.n = g.n
        self.edges = g.edges
        self.adjacency = [set(nbrs) for nbrs in g.adjacency]
        self.live = [True] * g.m
        self.live_count = g.m
        self._edge_ids = {edge: eid for eid, edge in enumerate(g.edges)}

    def iter_edges(self):
        for eid, (u, v) in enumerate(self.edges):
            if self.live[eid]:
                yield eid, u, v

    def edge_id(self, u: int, v: int) -> int:
        return self._edge_ids[(u, v) if u < v else (v, u)]

    def degree(self, u: int) -> int:
        return len(self.adjacency[u])

    def remove(self, eid: int) -> None:
        u, v = self.edges[eid]
        self.adjacency[u].discard(v)
        self.adjacency[v].discard(u)
        self.live[eid] = False
        self.live_count -= 1

    def reachable(self, start: int, goal: int) -> bool:
        # scoped to the component around `start`; stops as soon as goal is met
        if start == goal:
            return True
        seen = {start}
        stack = [start]
        while stack:
            node = stack.pop()
            for nbr in self.adjacency[node]:
                if nbr == goal:
                    return True
                if nbr not in seen:
                    seen.add(nbr)
                    stack.append(nbr)
        return False

    def component_of(self, start: int) -> set[int]:
        seen = {start}
        stack = [start]
        while stack:
            node = stack.pop()
            for nbr in self.adjacency[node]:
                if nbr not in seen:
                    seen.add(nbr)
                    stack.append(nbr)
        return seen


def select_edge(table: EdgeScoreTable, criterion: Criterion) -> tuple[int, float, bool]:
    """Pick the edge to remove: extreme score, lowest edge id on ties.

    Under select-min a table where every live edge carries the infinite
    sentinel is degenerate: fall back to the lowest live edge id so the run
    can terminate, and say so.
    """
    best_eid = -1
    best = None
    if criterion.direction == "max":
        for eid, score in table.scores.items():
            if best is None or score > best or (score == best and eid < best_eid):
                best, best_eid = score, eid
    else:
        for eid, score in table.scores.items():
            if best is None or score < best or (score == best and eid < best_eid):
                best, best_eid = score, eid
    if best is None:
        raise ConfigError("cannot select from an empty score table")
    if criterion.direction == "min" and best == INFINITE:
        return min(table.scores), INFINITE, True
    return best_eid, best, False


def detect(g: Graph, cfg: DetectionConfig) -> Dendrogram:
    """Run the divisive loop on a working copy of ``g``."""
    if g.n == 0:
        raise ConfigError("cannot detect communities in an empty graph")
    if cfg.k_max > g.n:
        raise ConfigError(f"k_max={cfg.k_max} exceeds node count {g.n}")

    wg = WorkingGraph(g)
    labels = list(connected_components(g).labels)
    count = len(set(labels))
    dendrogram = Dendrogram(n=g.n, initial_components=count, steps=[])
    dendrogram.partitions[count] = Partition(tuple(labels))

    if cfg.stop == "at-k-max" and count >= cfg.k_max:
        return dendrogram

    table = score_all(wg, cfg.criterion)
    step = 0
    while wg.live_count > 0:
        eid, score, degenerate = select_edge(table, cfg.criterion)
        u, v = wg.edges[eid]
        wg.remove(eid)
        del table.scores[eid]
        split = not wg.reachable(u, v)
        if split:
            count += 1
            for side in (u, v):
                members = wg.component_of(side)
                cid = min(members)
                for node in members:
                    labels[node] = cid
            dendrogram.partitions[count] = Partition(tuple(labels))
        step += 1
        dendrogram.steps.append(
            RemovalStep(
                step=step,
                edge_id=eid,
                u=u,
                v=v,
                score=score,
                split=split,
                components_after=count,
                degenerate=degenerate,
            )
        )
        if cfg.stop == "at-k-max" and count >= cfg.k_max:
            break
        if wg.live_count:
            table = rescore_after_removal(wg, u, v, cfg.criterion, table)
    return dendrogram


def cut(d: Dendrogram, k: int) -> Partition:
    return d.cut(k)
