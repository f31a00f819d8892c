"""Graphs, generators, edge neighborhoods and rooted subgraph types.

Graphs are immutable, undirected and simple.  The edge-list text format is a
header line holding ``n`` followed by one ``"j k"`` line per edge with 0-based
vertex indices.
"""

from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .canonical import canonical_labeling, encode_certificate
from .errors import (
    DuplicateEdgeError,
    GenerationError,
    InfeasibleError,
    MalformedLineError,
    SelfLoopError,
    VertexOutOfRangeError,
)

Edge = tuple[int, int]


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on vertices ``0..n_vertices-1``.

    ``edges`` is stored as a sorted tuple of ``(j, k)`` pairs with ``j < k``.
    Use :meth:`from_edges` to build one from arbitrary pairs.
    """

    n_vertices: int
    edges: tuple[Edge, ...]

    def __post_init__(self):
        if self.n_vertices < 0:
            raise InfeasibleError("n_vertices must be nonnegative")
        seen = set()
        for j, k in self.edges:
            if j == k:
                raise SelfLoopError(f"self-loop at vertex {j}")
            if not (0 <= j < self.n_vertices and 0 <= k < self.n_vertices):
                raise VertexOutOfRangeError(f"edge ({j}, {k}) outside [0, {self.n_vertices})")
            key = (min(j, k), max(j, k))
            if key in seen:
                raise DuplicateEdgeError(f"duplicate edge {key}")
            seen.add(key)
        object.__setattr__(self, "edges", tuple(sorted(seen)))

    @classmethod
    def from_edges(cls, n_vertices: int, edges: Iterable[Sequence[int]]) -> "Graph":
        return cls(int(n_vertices), tuple((int(a), int(b)) for a, b in edges))

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency(self) -> tuple[frozenset[int], ...]:
        nbrs: list[set[int]] = [set() for _ in range(self.n_vertices)]
        for j, k in self.edges:
            nbrs[j].add(k)
            nbrs[k].add(j)
        return tuple(frozenset(s) for s in nbrs)

    @cached_property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    def has_edge(self, j: int, k: int) -> bool:
        return (min(j, k), max(j, k)) in self.edge_set

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adjacency]

    @property
    def max_degree(self) -> int:
        return max(self.degrees(), default=0)

    def is_regular(self, v: int | None = None) -> bool:
        degs = set(self.degrees())
        if v is None:
            return len(degs) <= 1
        return degs <= {v} and (self.n_vertices == 0 or degs == {v})

    def distances_from(self, sources: Iterable[int]) -> dict[int, int]:
        """Breadth-first distances from a set of source vertices."""
        dist = {s: 0 for s in sources}
        queue = deque(dist)
        while queue:
            u = queue.popleft()
            for w in self.adjacency[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return dist

    def is_connected(self) -> bool:
        if self.n_vertices == 0:
            return True
        return len(self.distances_from([0])) == self.n_vertices

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Graph with vertex ``v`` renamed ``perm[v]``."""
        return Graph.from_edges(self.n_vertices, ((perm[a], perm[b]) for a, b in self.edges))

    def to_text(self) -> str:
        lines = [str(self.n_vertices)] + [f"{j} {k}" for j, k in self.edges]
        return "\n".join(lines) + "\n"


def parse_graph(text: str) -> Graph:
    """Parse the edge-list format.

    Raises a distinct :class:`~qaoakit.errors.GraphParseError` subclass for a
    malformed line, an out-of-range vertex, a duplicate edge and a self-loop.
    """
    lines = [(i + 1, ln.strip()) for i, ln in enumerate(text.splitlines())]
    lines = [(i, ln) for i, ln in lines if ln]
    if not lines:
        raise MalformedLineError("empty document: missing vertex-count header")
    lineno, header = lines[0]
    try:
        n = int(header)
    except ValueError:
        raise MalformedLineError(f"line {lineno}: header must be an integer, got {header!r}") from None
    if n < 0:
        raise MalformedLineError(f"line {lineno}: negative vertex count")

    seen: set[Edge] = set()
    edges = []
    for lineno, ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise MalformedLineError(f"line {lineno}: expected 'j k', got {ln!r}")
        try:
            j, k = int(parts[0]), int(parts[1])
        except ValueError:
            raise MalformedLineError(f"line {lineno}: non-integer vertex in {ln!r}") from None
        if not (0 <= j < n and 0 <= k < n):
            raise VertexOutOfRangeError(f"line {lineno}: vertex out of range [0, {n})")
        if j == k:
            raise SelfLoopError(f"line {lineno}: self-loop at vertex {j}")
        key = (min(j, k), max(j, k))
        if key in seen:
            raise DuplicateEdgeError(f"line {lineno}: duplicate edge {key}")
        seen.add(key)
        edges.append(key)
    return Graph.from_edges(n, edges)


def ring_graph(n: int) -> Graph:
    if n < 3:
        raise InfeasibleError("a ring needs at least 3 vertices")
    return Graph.from_edges(n, ((j, (j + 1) % n) for j in range(n)))


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, ((j, j + 1) for j in range(n - 1)))


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, itertools.combinations(range(n), 2))


def complete_bipartite_graph(a: int, b: int) -> Graph:
    return Graph.from_edges(a + b, ((i, a + j) for i in range(a) for j in range(b)))


def empty_graph(n: int) -> Graph:
    return Graph(n, ())


def prism_graph(k: int = 3) -> Graph:
    """Two k-cycles joined by a perfect matching (k=3: the triangular prism)."""
    edges = [(j, (j + 1) % k) for j in range(k)]
    edges += [(k + j, k + (j + 1) % k) for j in range(k)]
    edges += [(j, k + j) for j in range(k)]
    return Graph.from_edges(2 * k, edges)


def random_regular_graph(
    n: int, v: int, seed: int | np.random.Generator | None = None, max_tries: int = 10_000
) -> Graph:
    """Simple ``v``-regular graph from the pairing model with full rejection.

    Stubs are shuffled and paired; any pairing with a loop or a repeated edge
    is thrown away in full.  Deterministic for a fixed integer ``seed``.
    """
    if (n * v) % 2 or not 0 <= v < n:
        raise InfeasibleError(f"no simple {v}-regular graph on {n} vertices")
    rng = np.random.default_rng(seed)
    stubs = np.repeat(np.arange(n), v)
    for _ in range(max_tries):
        pairs = rng.permutation(stubs).reshape(-1, 2)
        if np.any(pairs[:, 0] == pairs[:, 1]):
            continue
        keys = {(int(min(a, b)), int(max(a, b))) for a, b in pairs}
        if len(keys) == len(pairs):
            return Graph.from_edges(n, keys)
    raise GenerationError(f"pairing model failed {max_tries} times for n={n}, v={v}")


# -- rooted edge neighborhoods ------------------------------------------------


@dataclass(frozen=True)
class RootedSubgraph:
    """An edge neighborhood relabeled so the root edge is ``(0, 1)``.

    ``vertices[i]`` is the vertex of the source graph that local vertex ``i``
    came from (empty for hand-built subgraphs).
    """

    graph: Graph
    root_edge: Edge = (0, 1)
    p: int = 1
    vertices: tuple[int, ...] = ()

    def __post_init__(self):
        j, k = self.root_edge
        if not self.graph.has_edge(j, k):
            raise InfeasibleError(f"root edge {self.root_edge} not in subgraph")

    @property
    def n_vertices(self) -> int:
        return self.graph.n_vertices

    @property
    def source_root(self) -> Edge | None:
        if not self.vertices:
            return None
        j, k = self.root_edge
        return (self.vertices[j], self.vertices[k])


def edge_neighborhood(g: Graph, e: Sequence[int], p: int) -> RootedSubgraph:
    """Subgraph of ``g`` that the level-``p`` term of edge ``e`` depends on.

    Vertices are those within distance ``p`` of either endpoint.  An edge is
    kept iff one of its endpoints is within distance ``p - 1``; edges joining
    two vertices at distance exactly ``p`` drop out of the light cone.
    """
    j, k = int(e[0]), int(e[1])
    if not g.has_edge(j, k):
        raise InfeasibleError(f"edge ({j}, {k}) not in graph")
    if p < 1:
        raise InfeasibleError("p must be at least 1")
    dist = g.distances_from([j, k])
    members = [u for u, d in dist.items() if d <= p]
    rest = sorted(u for u in members if u not in (j, k))
    order = [j, k] + rest
    local = {u: i for i, u in enumerate(order)}
    edges = [
        (local[a], local[b])
        for a, b in g.edges
        if a in local and b in local and min(dist[a], dist[b]) <= p - 1
    ]
    return RootedSubgraph(Graph.from_edges(len(order), edges), (0, 1), p, tuple(order))


def canonical_key(s: RootedSubgraph) -> bytes:
    """Isomorphism-invariant key of a rooted subgraph.

    Root-edge endpoints may be swapped; nothing else about the labeling
    matters.  Keys are compact byte strings (see :mod:`qaoakit.canonical`).
    """
    g = s.graph
    j, k = s.root_edge
    colors = [0 if u in (j, k) else 1 for u in range(g.n_vertices)]
    _, cert = canonical_labeling(g.n_vertices, g.edges, colors)
    return encode_certificate(g.n_vertices, cert)


def canonical_subgraph(s: RootedSubgraph) -> RootedSubgraph:
    """The canonical representative of ``s``'s type, with root edge ``(0, 1)``."""
    g = s.graph
    j, k = s.root_edge
    colors = [0 if u in (j, k) else 1 for u in range(g.n_vertices)]
    labels, _ = canonical_labeling(g.n_vertices, g.edges, colors)
    return RootedSubgraph(g.relabel(labels), (0, 1), s.p)


@dataclass
class DecompositionEntry:
    subgraph: RootedSubgraph
    weight: int


@dataclass
class SubgraphDecomposition:
    """Subgraph types of a graph at level ``p`` with their multiplicities.

    ``entries`` preserves first-occurrence order over the sorted edge list, so
    the representative of each type is the neighborhood of its lowest edge.
    """

    p: int
    m: int
    entries: dict[bytes, DecompositionEntry] = field(default_factory=dict)
    max_degree: int = 0

    @property
    def total_weight(self) -> int:
        return sum(e.weight for e in self.entries.values())

    def weights(self) -> dict[bytes, int]:
        return {k: e.weight for k, e in self.entries.items()}

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "entries": [
                {
                    "key": key.hex(),
                    "weight": entry.weight,
                    "vertices": entry.subgraph.n_vertices,
                    "edges": [list(e) for e in entry.subgraph.graph.edges],
                    "root": list(entry.subgraph.root_edge),
                }
                for key, entry in self.entries.items()
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "SubgraphDecomposition":
        p = int(data["p"])
        entries = {}
        for item in data["entries"]:
            g = Graph.from_edges(item["vertices"], item["edges"])
            sub = RootedSubgraph(g, tuple(item["root"]), p)
            entries[bytes.fromhex(item["key"])] = DecompositionEntry(sub, int(item["weight"]))
        m = sum(e.weight for e in entries.values())
        return cls(p, m, entries)


def decompose(g: Graph, p: int) -> SubgraphDecomposition:
    """Group the edges of ``g`` by the type of their level-``p`` neighborhood."""
    if p < 1:
        raise InfeasibleError("p must be at least 1")
    d = SubgraphDecomposition(p=p, m=g.m, max_degree=g.max_degree)
    for e in g.edges:
        sub = edge_neighborhood(g, e, p)
        key = canonical_key(sub)
        entry = d.entries.get(key)
        if entry is None:
            d.entries[key] = DecompositionEntry(sub, 1)
        else:
            entry.weight += 1
    return d


def q_tree(v: int, p: int) -> int:
    """Vertex count of the edge-rooted tree of depth ``p`` and degree ``v``."""
    if v < 2:
        raise InfeasibleError("degree must be at least 2")
    if p < 1:
        raise InfeasibleError("p must be at least 1")
    if v == 2:
        return 2 * p + 2
    return 2 * ((v - 1) ** (p + 1) - 1) // (v - 2)


# -- 3-regular structures -----------------------------------------------------


def is_k4(g: Graph) -> bool:
    return g.n_vertices == 4 and g.m == 6


def _require_cubic(g: Graph) -> None:
    if g.n_vertices == 0 or not g.is_regular(3):
        raise InfeasibleError("structure counts are defined for 3-regular graphs only")


def _leaving_edges(g: Graph, members: frozenset[int]) -> list[Edge]:
    return [(u, w) for u in sorted(members) for w in sorted(g.adjacency[u]) if w not in members]


def crossed_squares(g: Graph) -> list[frozenset[int]]:
    """Vertex sets of the crossed squares of a 3-regular graph.

    A crossed square is a 4-cycle plus one diagonal (five internal edges)
    whose two leaving edges are distinct edges ending outside it.
    """
    _require_cubic(g)
    found: set[frozenset[int]] = set()
    for j, k in g.edges:
        common = sorted(g.adjacency[j] & g.adjacency[k])
        for a, b in itertools.combinations(common, 2):
            if g.has_edge(a, b):
                continue
            members = frozenset((j, k, a, b))
            leaving = _leaving_edges(g, members)
            if len(leaving) == 2:
                found.add(members)
    return sorted(found, key=sorted)


def isolated_triangles(g: Graph) -> list[frozenset[int]]:
    """Vertex sets of the isolated triangles of a 3-regular graph.

    The three leaving edges must end on three distinct vertices, and a counted
    triangle shares no vertex with a crossed square or with an earlier counted
    triangle.
    """
    _require_cubic(g)
    blocked: set[int] = set()
    for sq in crossed_squares(g):
        blocked |= sq
    out = []
    for j, k in g.edges:
        for c in sorted(g.adjacency[j] & g.adjacency[k]):
            if c <= k:
                continue
            tri = frozenset((j, k, c))
            ends = [w for _, w in _leaving_edges(g, tri)]
            if len(ends) != 3 or len(set(ends)) != 3:
                continue
            if tri & blocked:
                continue
            out.append(tri)
            blocked |= tri
    return out


def count_crossed_squares(g: Graph) -> int:
    return len(crossed_squares(g))


def count_isolated_triangles(g: Graph) -> int:
    return len(isolated_triangles(g))
