"""Shared fixtures, independent oracles and the acceptance summary hook."""

from __future__ import annotations

import itertools
from functools import reduce

import numpy as np
import pytest
import scipy.linalg

from qaoakit.graph import Graph, complete_bipartite_graph, complete_graph, prism_graph, random_regular_graph

# -- acceptance summary -----------------------------------------------------------

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def record_criterion():
    """Call ``record(id, passed, detail)``; lines are printed after the run."""

    def record(cid: str, passed: bool, detail: str) -> None:
        ACCEPTANCE_LINES.append(f"{cid:<4} {'PASS' if passed else 'FAIL'}  {detail}")

    return record


# -- dense oracles ---------------------------------------------------------------

X = np.array([[0, 1], [1, 0]], dtype=complex)
I2 = np.eye(2, dtype=complex)


def dense_single(op: np.ndarray, j: int, n: int) -> np.ndarray:
    """``op`` on qubit ``j`` of ``n`` (qubit j is bit j of the index)."""
    # Kron puts the first factor on the most significant bit.
    factors = [op if q == j else I2 for q in reversed(range(n))]
    return reduce(np.kron, factors)


def dense_cut_diagonal(g: Graph) -> np.ndarray:
    n = g.n_vertices
    diag = np.zeros(2**n)
    for z in range(2**n):
        bits = [(z >> q) & 1 for q in range(n)]
        diag[z] = sum(bits[a] != bits[b] for a, b in g.edges)
    return diag


def dense_qaoa_state(g: Graph, gammas, betas) -> np.ndarray:
    """Reference state via full matrix exponentials."""
    n = g.n_vertices
    C = np.diag(dense_cut_diagonal(g))
    B = sum(dense_single(X, j, n) for j in range(n))
    psi = np.full(2**n, 2 ** (-n / 2), dtype=complex)
    for gamma, beta in zip(gammas, betas):
        psi = scipy.linalg.expm(-1j * gamma * C) @ psi
        psi = scipy.linalg.expm(-1j * beta * B) @ psi
    return psi


def dense_fp(g: Graph, gammas, betas) -> float:
    psi = dense_qaoa_state(g, gammas, betas)
    return float(np.real(np.vdot(psi, dense_cut_diagonal(g) * psi)))


def brute_max_cut(g: Graph) -> int:
    best = 0
    for bits in itertools.product((0, 1), repeat=g.n_vertices):
        best = max(best, sum(bits[a] != bits[b] for a, b in g.edges))
    return best


def brute_alpha(g: Graph) -> int:
    for size in range(g.n_vertices, 0, -1):
        for subset in itertools.combinations(range(g.n_vertices), size):
            chosen = set(subset)
            if not any(a in chosen and b in chosen for a, b in g.edges):
                return size
    return 0


def brute_structures(g: Graph) -> tuple[int, int]:
    """(S, T) by scanning every 3- and 4-vertex subset of a 3-regular graph."""
    squares = []
    for quad in itertools.combinations(range(g.n_vertices), 4):
        inside = [(a, b) for a, b in itertools.combinations(quad, 2) if g.has_edge(a, b)]
        if len(inside) != 5:
            continue
        leaving = [(u, w) for u in quad for w in g.adjacency[u] if w not in quad]
        if len(leaving) == 2 and leaving[0] != leaving[1]:
            squares.append(set(quad))
    used = set().union(*squares) if squares else set()
    triangles = 0
    for tri in itertools.combinations(range(g.n_vertices), 3):
        if not all(g.has_edge(a, b) for a, b in itertools.combinations(tri, 2)):
            continue
        ends = [w for u in tri for w in g.adjacency[u] if w not in tri]
        if len(ends) == 3 and len(set(ends)) == 3 and not used & set(tri):
            triangles += 1
            used |= set(tri)
    return len(squares), triangles


# -- graph families ------------------------------------------------------------


def diamond_ring(k: int) -> Graph:
    """k crossed squares in a cycle; each links its corner 3 to the next corner 2."""
    edges = []
    for i in range(k):
        a, b, c, d = 4 * i, 4 * i + 1, 4 * i + 2, 4 * i + 3
        edges += [(a, b), (a, c), (a, d), (b, c), (b, d)]
        edges.append((d, 4 * ((i + 1) % k) + 2))
    return Graph.from_edges(4 * k, edges)


def truncate(h: Graph) -> Graph:
    """Replace each vertex of a 3-regular graph by a triangle."""
    slot = {}
    for v in range(h.n_vertices):
        for i, w in enumerate(sorted(h.adjacency[v])):
            slot[(v, w)] = 3 * v + i
    edges = []
    for v in range(h.n_vertices):
        edges += [(3 * v, 3 * v + 1), (3 * v + 1, 3 * v + 2), (3 * v, 3 * v + 2)]
    for a, b in h.edges:
        edges.append((slot[(a, b)], slot[(b, a)]))
    return Graph.from_edges(3 * h.n_vertices, edges)


def insert_diamond(h: Graph, edge: tuple[int, int]) -> Graph:
    """Cut ``edge`` and reconnect its ends through a new crossed square."""
    u, v = edge
    n = h.n_vertices
    a, b, c, d = n, n + 1, n + 2, n + 3
    edges = [e for e in h.edges if e != (min(u, v), max(u, v))]
    edges += [(a, b), (a, c), (a, d), (b, c), (b, d), (u, c), (d, v)]
    return Graph.from_edges(n + 4, edges)


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


def cube_graph() -> Graph:
    return Graph.from_edges(8, [(a, a ^ (1 << j)) for a in range(8) for j in range(3) if a < a ^ (1 << j)])


def heawood_graph() -> Graph:
    """Bipartite 3-regular graph on 14 vertices with girth 6."""
    edges = [(i, (i + 1) % 14) for i in range(14)]
    edges += [(i, (i + 5) % 14) for i in range(0, 14, 2)]
    return Graph.from_edges(14, edges)


def structured_cubic_graphs() -> list[tuple[str, Graph, int, int]]:
    """(name, graph, S, T) with S and T known by construction."""
    out = [("prism", prism_graph(3), 0, 2), ("K33", complete_bipartite_graph(3, 3), 0, 0)]
    out += [(f"diamond_ring_{k}", diamond_ring(k), k, 0) for k in range(2, 8)]
    bases = [
        ("K4", complete_graph(4)),
        ("K33", complete_bipartite_graph(3, 3)),
        ("prism", prism_graph(3)),
        ("cube", cube_graph()),
        ("petersen", petersen_graph()),
        ("rr8", random_regular_graph(8, 3, seed=5)),
    ]
    for name, h in bases:
        t = truncate(h)
        out.append((f"truncated_{name}", t, 0, h.n_vertices))
        # A crossed square spliced into an edge joining two triangles.
        joining = next(e for e in t.edges if e[0] // 3 != e[1] // 3)
        out.append((f"truncated_{name}+diamond", insert_diamond(t, joining), 1, h.n_vertices))
    out.append(("cube+diamond", insert_diamond(cube_graph(), (0, 1)), 1, 0))
    out.append(("petersen+2diamonds", insert_diamond(insert_diamond(petersen_graph(), (0, 1)), (2, 3)), 2, 0))
    out.append(("heawood", heawood_graph(), 0, 0))
    out.append(("prism5", prism_graph(5), 0, 0))
    return out


@pytest.fixture(scope="session")
def cubic_family():
    return structured_cubic_graphs()
