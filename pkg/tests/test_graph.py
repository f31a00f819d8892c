import itertools
import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import brute_structures, diamond_ring, heawood_graph, petersen_graph, structured_cubic_graphs
from qaoakit.canonical import decode_certificate
from qaoakit.errors import (
    DuplicateEdgeError,
    GenerationError,
    InfeasibleError,
    MalformedLineError,
    SelfLoopError,
    VertexOutOfRangeError,
)
from qaoakit.graph import (
    Graph,
    RootedSubgraph,
    SubgraphDecomposition,
    canonical_key,
    canonical_subgraph,
    complete_graph,
    count_crossed_squares,
    count_isolated_triangles,
    decompose,
    edge_neighborhood,
    parse_graph,
    path_graph,
    prism_graph,
    q_tree,
    random_regular_graph,
    ring_graph,
)
from qaoakit.maxcut_analysis import G4, G5, G6


class TestParse:
    def test_roundtrip(self):
        g = prism_graph(3)
        assert parse_graph(g.to_text()) == g

    def test_blank_lines_and_orientation(self):
        g = parse_graph("\n3\n\n1 0\n  2 1 \n")
        assert g.edges == ((0, 1), (1, 2))

    @pytest.mark.parametrize(
        "text, exc",
        [
            ("", MalformedLineError),
            ("x\n", MalformedLineError),
            ("3\n0 1 2\n", MalformedLineError),
            ("3\n0 a\n", MalformedLineError),
            ("3\n0 3\n", VertexOutOfRangeError),
            ("3\n-1 2\n", VertexOutOfRangeError),
            ("3\n0 1\n1 0\n", DuplicateEdgeError),
            ("3\n2 2\n", SelfLoopError),
        ],
    )
    def test_errors(self, text, exc):
        with pytest.raises(exc):
            parse_graph(text)

    def test_errors_are_value_errors(self):
        with pytest.raises(ValueError):
            parse_graph("2\n0 0\n")


class TestGenerators:
    def test_ring(self):
        g = ring_graph(5)
        assert g.m == 5 and g.is_regular(2) and g.is_connected()
        with pytest.raises(InfeasibleError):
            ring_graph(2)

    @pytest.mark.parametrize("n, v", [(8, 3), (10, 3), (16, 3), (9, 4), (12, 5)])
    def test_random_regular(self, n, v):
        g = random_regular_graph(n, v, seed=3)
        assert g.is_regular(v) and g.m == n * v // 2
        assert g == random_regular_graph(n, v, seed=3)

    def test_random_regular_infeasible(self):
        with pytest.raises(InfeasibleError):
            random_regular_graph(7, 3, seed=0)
        with pytest.raises(GenerationError):
            random_regular_graph(30, 3, seed=0, max_tries=0)

    def test_graph_validation(self):
        for edges in ([(0, 0)], [(0, 1), (1, 0)], [(0, 5)]):
            with pytest.raises(ValueError):
                Graph.from_edges(3, edges)


class TestNeighborhood:
    def test_ring_segment(self):
        s = edge_neighborhood(ring_graph(20), (4, 5), 2)
        assert s.n_vertices == 6 and s.graph.m == 5
        assert s.source_root == (4, 5)
        assert s.vertices[:2] == (4, 5)

    def test_boundary_edge_dropped(self):
        # In a 4-ring at p=1 the far edge joins two distance-1 vertices.
        s = edge_neighborhood(ring_graph(4), (0, 1), 1)
        assert s.n_vertices == 4 and s.graph.m == 3

    def test_tree_size_matches_q_tree(self):
        g = heawood_graph()  # girth 6 so the p=1 and p=2 cones are trees
        for p in (1, 2):
            s = edge_neighborhood(g, (0, 1), p)
            assert s.n_vertices == q_tree(3, p)
            assert s.graph.m == s.n_vertices - 1

    def test_vertex_bound(self):
        g = random_regular_graph(24, 3, seed=1)
        for p in (1, 2):
            for e in g.edges:
                assert edge_neighborhood(g, e, p).n_vertices <= q_tree(3, p)

    def test_errors(self):
        with pytest.raises(InfeasibleError):
            edge_neighborhood(ring_graph(5), (0, 2), 1)
        with pytest.raises(InfeasibleError):
            edge_neighborhood(ring_graph(5), (0, 1), 0)


def _random_rooted(data_seed: int) -> RootedSubgraph:
    rng = np.random.default_rng(data_seed)
    n = int(rng.integers(3, 9))
    edges = {(0, 1)}
    for a, b in itertools.combinations(range(n), 2):
        if rng.random() < 0.35:
            edges.add((a, b))
    return RootedSubgraph(Graph.from_edges(n, edges))


class TestCanonicalKey:
    @settings(max_examples=60, deadline=None)
    @given(seed=st.integers(0, 10_000), perm_seed=st.integers(0, 10_000))
    def test_invariant_under_relabeling(self, seed, perm_seed):
        s = _random_rooted(seed)
        perm = np.random.default_rng(perm_seed).permutation(s.n_vertices)
        t = RootedSubgraph(s.graph.relabel(perm), (int(perm[0]), int(perm[1])))
        assert canonical_key(s) == canonical_key(t)

    def test_root_swap_same_key(self):
        swapped = RootedSubgraph(G5.graph, (1, 0))
        assert canonical_key(G5) == canonical_key(swapped)

    def test_distinguishes_root(self):
        # Path 0-1-2-3 rooted at an end edge versus the middle edge.
        g = path_graph(4)
        assert canonical_key(RootedSubgraph(g, (0, 1))) != canonical_key(RootedSubgraph(g, (1, 2)))

    def test_distinct_types(self):
        assert len({canonical_key(s) for s in (G4, G5, G6)}) == 3

    def test_key_decodes(self):
        n, edges = decode_certificate(canonical_key(G6))
        assert n == 6 and len(edges) == 5

    def test_canonical_subgraph_same_key(self):
        for s in (G4, G5, G6):
            c = canonical_subgraph(s)
            assert c.root_edge == (0, 1)
            assert canonical_key(c) == canonical_key(s)


class TestDecompose:
    @pytest.mark.parametrize("p", [1, 2, 3])
    def test_weights_sum_to_m(self, p):
        g = random_regular_graph(16, 3, seed=p)
        assert decompose(g, p).total_weight == g.m

    def test_ring_single_type(self):
        d = decompose(ring_graph(12), 2)
        assert len(d.entries) == 1
        (entry,) = d.entries.values()
        assert entry.weight == 12 and entry.subgraph.n_vertices == 6

    def test_prism(self):
        d = decompose(prism_graph(3), 1)
        assert d.weights() == {canonical_key(G5): 6, canonical_key(G6): 3}

    def test_json_roundtrip(self):
        d = decompose(petersen_graph(), 1)
        back = SubgraphDecomposition.from_dict(json.loads(d.to_json()))
        assert back.weights() == d.weights() and back.p == 1

    def test_json_keys_hex(self):
        data = json.loads(decompose(ring_graph(6), 1).to_json())
        assert all(bytes.fromhex(e["key"]) for e in data["entries"])


class TestStructures:
    def test_family_counts(self):
        for name, g, S, T in structured_cubic_graphs():
            if name == "prism" or g.n_vertices <= 20:
                assert brute_structures(g) == (S, T), name
            assert (count_crossed_squares(g), count_isolated_triangles(g)) == (S, T), name

    @pytest.mark.parametrize("seed", range(8))
    def test_random_against_brute_force(self, seed):
        g = random_regular_graph(12, 3, seed=seed)
        assert (count_crossed_squares(g), count_isolated_triangles(g)) == brute_structures(g)

    def test_diamond_ring(self):
        assert count_crossed_squares(diamond_ring(3)) == 3

    def test_requires_cubic(self):
        with pytest.raises(InfeasibleError):
            count_crossed_squares(ring_graph(6))

    def test_k4_has_no_counted_square(self):
        # Every 4-set of K4 has six internal edges.
        assert count_crossed_squares(complete_graph(4)) == 0


class TestQTree:
    @pytest.mark.parametrize("v, p, q", [(2, 1, 4), (2, 3, 8), (3, 1, 6), (3, 2, 14), (3, 3, 30), (4, 1, 8), (4, 2, 26)])
    def test_values(self, v, p, q):
        assert q_tree(v, p) == q

    def test_errors(self):
        with pytest.raises(InfeasibleError):
            q_tree(1, 1)
        with pytest.raises(InfeasibleError):
            q_tree(3, 0)
