"""Immutable undirected simple graph, dataset loaders, and structural stats.

Nodes are dense integer ids ``0..n-1`` assigned in first-appearance order;
the original file identity of each node is kept in ``labels``. Edges get a
stable integer id (their position in ``edges``) that survives score
recomputation within a detection run.
"""

from __future__ import annotations

import io
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence, TextIO

from .errors import CoverageError, NodeLookupError, ParseError

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph snapshot.

    Invariants: no self-loops, no parallel edges, every edge stored once as
    ``(u, v)`` with ``u < v``, and ``sum(degrees) == 2 * m``. Instances are
    immutable after construction and safe to share across readers.
    """

    labels: tuple[str, ...]
    adjacency: tuple[frozenset[int], ...]
    edges: tuple[tuple[int, int], ...]
    duplicates_dropped: int = 0
    self_loops_dropped: int = 0
    _edge_ids: dict[tuple[int, int], int] = field(
        init=False, repr=False, compare=False, default_factory=dict
    )

    def __post_init__(self):
        ids = {}
        for eid, (u, v) in enumerate(self.edges):
            if not (0 <= u < v < self.n):
                raise ValueError(f"edge {eid} endpoints ({u}, {v}) out of order or range")
            if (u, v) in ids:
                raise ValueError(f"parallel edge ({u}, {v})")
            ids[(u, v)] = eid
        for u, nbrs in enumerate(self.adjacency):
            if u in nbrs:
                raise ValueError(f"self-loop on node {u}")
            for v in nbrs:
                if (min(u, v), max(u, v)) not in ids:
                    raise ValueError(f"adjacency lists ({u}, {v}) but edge table does not")
        if sum(len(nbrs) for nbrs in self.adjacency) != 2 * len(self.edges):
            raise ValueError("adjacency is inconsistent with the edge table")
        object.__setattr__(self, "_edge_ids", ids)

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, u: int) -> int:
        self._check_node(u)
        return len(self.adjacency[u])

    def neighbors(self, u: int) -> tuple[int, ...]:
        """Sorted neighbor ids of ``u`` (never includes ``u`` itself)."""
        self._check_node(u)
        return tuple(sorted(self.adjacency[u]))

    def has_edge(self, u: int, v: int) -> bool:
        self._check_node(u)
        self._check_node(v)
        return v in self.adjacency[u]

    def edge_id(self, u: int, v: int) -> int:
        key = (u, v) if u < v else (v, u)
        eid = self._edge_ids.get(key)
        if eid is None:
            raise NodeLookupError(f"no edge between {u} and {v}")
        return eid

    def iter_edges(self) -> Iterable[tuple[int, int, int]]:
        """Yield ``(edge_id, u, v)`` for every edge."""
        for eid, (u, v) in enumerate(self.edges):
            yield eid, u, v

    def _check_node(self, u: int) -> None:
        if not (isinstance(u, int) and 0 <= u < self.n):
            raise NodeLookupError(f"unknown node {u!r} (graph has nodes 0..{self.n - 1})")


@dataclass(frozen=True)
class GraphStats:
    n: int
    m: int
    avg_degree: float
    avg_clustering: float


@dataclass(frozen=True)
class Partition:
    """Assignment node id -> community id.

    Community ids are canonical: each equals the smallest node id contained
    in that community.
    """

    labels: tuple[int, ...]

    @staticmethod
    def from_assignment(assignment: Sequence[int]) -> "Partition":
        """Build a partition from arbitrary community keys, canonicalizing ids."""
        smallest: dict[int, int] = {}
        for node, key in enumerate(assignment):
            if key not in smallest:
                smallest[key] = node
        return Partition(tuple(smallest[key] for key in assignment))

    @property
    def n_communities(self) -> int:
        return len(set(self.labels))

    def communities(self) -> dict[int, tuple[int, ...]]:
        """Community id -> sorted member nodes."""
        groups: dict[int, list[int]] = {}
        for node, cid in enumerate(self.labels):
            groups.setdefault(cid, []).append(node)
        return {cid: tuple(sorted(members)) for cid, members in sorted(groups.items())}


def build_graph(labels: Sequence[str], pairs: Iterable[tuple[int, int]]) -> Graph:
    """Assemble a Graph from node labels and raw (possibly dirty) edge pairs.

    Self-loops are dropped and duplicate/parallel edges collapsed; both are
    counted on the returned graph and logged when nonzero.
    """
    n = len(labels)
    seen: set[tuple[int, int]] = set()
    edges: list[tuple[int, int]] = []
    dup = loops = 0
    for u, v in pairs:
        if not (0 <= u < n and 0 <= v < n):
            raise NodeLookupError(f"edge ({u}, {v}) references a node outside 0..{n - 1}")
        if u == v:
            loops += 1
            continue
        key = (u, v) if u < v else (v, u)
        if key in seen:
            dup += 1
            continue
        seen.add(key)
        edges.append(key)
    if dup or loops:
        log.warning("collapsed %d duplicate edge(s), dropped %d self-loop(s)", dup, loops)
    adjacency = [set() for _ in range(n)]
    for u, v in edges:
        adjacency[u].add(v)
        adjacency[v].add(u)
    return Graph(
        labels=tuple(labels),
        adjacency=tuple(frozenset(nbrs) for nbrs in adjacency),
        edges=tuple(edges),
        duplicates_dropped=dup,
        self_loops_dropped=loops,
    )


# --------------------------------------------------------------------------
# Loaders
# --------------------------------------------------------------------------

def load_graph(source: str | Path | TextIO | bytes, fmt: str | None = None) -> Graph:
    """Load a graph from a path, file object, or raw bytes/text.

    ``fmt`` is ``"gml"`` or ``"edge-list"``; when omitted it is inferred from
    the file extension (``.gml`` -> gml, anything else -> edge-list).
    """
    name = None
    if isinstance(source, (str, Path)) and "\n" not in str(source):
        name = str(source)
        text = Path(source).read_text(encoding="utf-8")
    elif isinstance(source, bytes):
        text = source.decode("utf-8")
    elif isinstance(source, str):
        text = source
    else:
        name = getattr(source, "name", None)
        text = source.read()
        if isinstance(text, bytes):
            text = text.decode("utf-8")
    if fmt is None:
        fmt = "gml" if name is not None and name.lower().endswith(".gml") else "edge-list"
    if fmt == "gml":
        return parse_gml(text)
    if fmt == "edge-list":
        return parse_edge_list(text)
    raise ValueError(f"unknown graph format {fmt!r}")


def parse_edge_list(text: str) -> Graph:
    """Parse whitespace-separated ``u v`` pairs; ``#`` starts a comment line.

    Endpoint tokens are node labels; dense ids follow first appearance.
    """
    labels: list[str] = []
    index: dict[str, int] = {}
    pairs: list[tuple[int, int]] = []

    def node_id(token: str) -> int:
        if token not in index:
            index[token] = len(labels)
            labels.append(token)
        return index[token]

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"expected 'u v', got {raw.strip()!r}", lineno)
        pairs.append((node_id(parts[0]), node_id(parts[1])))
    return build_graph(labels, pairs)


_GML_TOKEN = re.compile(r'"[^"]*"|\[|\]|[^\s\[\]]+')


def _tokenize_gml(text: str) -> list[tuple[str, int]]:
    tokens = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        for match in _GML_TOKEN.finditer(line):
            tokens.append((match.group(0), lineno))
    return tokens


class _GmlCursor:
    def __init__(self, tokens: list[tuple[str, int]]):
        self.tokens = tokens
        self.pos = 0

    @property
    def line(self) -> int:
        if self.pos < len(self.tokens):
            return self.tokens[self.pos][1]
        return self.tokens[-1][1] if self.tokens else 1

    def next(self) -> str:
        if self.pos >= len(self.tokens):
            raise ParseError("unexpected end of file", self.line)
        token, _ = self.tokens[self.pos]
        self.pos += 1
        return token

    def peek(self) -> str | None:
        return self.tokens[self.pos][0] if self.pos < len(self.tokens) else None


def _skip_gml_value(cur: _GmlCursor, key: str, skipped: set[str]) -> None:
    # Unknown key: consume one scalar or one balanced [...] block.
    skipped.add(key)
    token = cur.next()
    if token == "[":
        depth = 1
        while depth:
            token = cur.next()
            if token == "[":
                depth += 1
            elif token == "]":
                depth -= 1


def parse_gml(text: str) -> Graph:
    """Parse the GML subset used by the benchmark files.

    Supports ``node [ id label ]`` and ``edge [ source target ]`` blocks;
    any other key (graph-level or nested) is skipped with a warning. Edge
    endpoints must reference declared node ids.
    """
    cur = _GmlCursor(_tokenize_gml(text))
    skipped: set[str] = set()

    token = cur.next()
    while token != "graph":
        _skip_gml_value(cur, token, skipped)
        token = cur.next()
    if cur.next() != "[":
        raise ParseError("expected '[' after 'graph'", cur.line)

    gml_ids: dict[int, int] = {}
    labels: list[str] = []
    raw_edges: list[tuple[int, int, int]] = []

    def parse_int(what: str) -> int:
        line = cur.line
        token = cur.next()
        try:
            return int(token)
        except ValueError:
            raise ParseError(f"{what} must be an integer, got {token!r}", line) from None

    while True:
        line = cur.line
        token = cur.next()
        if token == "]":
            break
        if token == "node":
            if cur.next() != "[":
                raise ParseError("expected '[' after 'node'", cur.line)
            gml_id: int | None = None
            label: str | None = None
            while (inner := cur.next()) != "]":
                if inner == "id":
                    gml_id = parse_int("node id")
                elif inner == "label":
                    value = cur.next()
                    label = value[1:-1] if value.startswith('"') else value
                else:
                    _skip_gml_value(cur, inner, skipped)
            if gml_id is None:
                raise ParseError("node block without id", line)
            if gml_id in gml_ids:
                raise ParseError(f"duplicate node id {gml_id}", line)
            gml_ids[gml_id] = len(labels)
            labels.append(label if label is not None else str(gml_id))
        elif token == "edge":
            if cur.next() != "[":
                raise ParseError("expected '[' after 'edge'", cur.line)
            source = target = None
            while (inner := cur.next()) != "]":
                if inner == "source":
                    source = parse_int("edge source")
                elif inner == "target":
                    target = parse_int("edge target")
                else:
                    _skip_gml_value(cur, inner, skipped)
            if source is None or target is None:
                raise ParseError("edge block must declare source and target", line)
            raw_edges.append((source, target, line))
        else:
            _skip_gml_value(cur, token, skipped)

    if skipped:
        log.warning("skipped unsupported GML key(s): %s", ", ".join(sorted(skipped)))

    pairs = []
    for source, target, line in raw_edges:
        for endpoint in (source, target):
            if endpoint not in gml_ids:
                raise NodeLookupError(
                    f"line {line}: edge endpoint {endpoint} does not match any node id"
                )
        pairs.append((gml_ids[source], gml_ids[target]))
    return build_graph(labels, pairs)


def dump_edge_list(g: Graph, out: TextIO | None = None) -> str:
    """Write ``u v`` node-id pairs in edge-id order; returns the text."""
    buf = io.StringIO()
    for _, u, v in g.iter_edges():
        buf.write(f"{u} {v}\n")
    text = buf.getvalue()
    if out is not None:
        out.write(text)
    return text


# --------------------------------------------------------------------------
# Structural operations
# --------------------------------------------------------------------------

def stats(g: Graph) -> GraphStats:
    """Node/edge counts, mean degree (2m/n), and mean local clustering.

    Nodes with degree < 2 contribute 0 to the clustering average.
    """
    if g.n < 1:
        raise ValueError("stats requires at least one node")
    total = 0.0
    for u in range(g.n):
        nbrs = g.adjacency[u]
        k = len(nbrs)
        if k < 2:
            continue
        links = 0
        for v in nbrs:
            links += len(nbrs & g.adjacency[v])
        total += links / (k * (k - 1))  # each triangle pair counted twice
    return GraphStats(
        n=g.n,
        m=g.m,
        avg_degree=2 * g.m / g.n,
        avg_clustering=total / g.n,
    )


def neighbors(g: Graph, u: int) -> tuple[int, ...]:
    return g.neighbors(u)


def connected_components(g: Graph) -> Partition:
    """Label every node with the smallest node id of its component."""
    labels = [-1] * g.n
    for start in range(g.n):
        if labels[start] != -1:
            continue
        stack = [start]
        labels[start] = start
        while stack:
            node = stack.pop()
            for nbr in g.adjacency[node]:
                if labels[nbr] == -1:
                    labels[nbr] = start
                    stack.append(nbr)
    return Partition(tuple(labels))


def subgraph(g: Graph, keep: Iterable[int]) -> tuple[Graph, tuple[int, ...]]:
    """Induced subgraph on ``keep`` (original ids), densely re-indexed.

    Returns the new graph and the tuple mapping new id -> original id.
    """
    kept = sorted(set(keep))
    for u in kept:
        if not 0 <= u < g.n:
            raise NodeLookupError(f"unknown node {u}")
    back = {orig: new for new, orig in enumerate(kept)}
    pairs = [
        (back[u], back[v])
        for _, u, v in g.iter_edges()
        if u in back and v in back
    ]
    sub = build_graph([g.labels[u] for u in kept], pairs)
    return sub, tuple(kept)


def check_coverage(g: Graph, p: Partition) -> None:
    """Raise CoverageError unless ``p`` assigns exactly g's nodes."""
    if len(p.labels) != g.n:
        raise CoverageError(
            f"partition covers {len(p.labels)} nodes, graph has {g.n}"
        )
