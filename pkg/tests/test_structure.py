import math

import networkx as nx
import pytest
from hypothesis import given, strategies as st

from pisgenus.pis import LabeledGraph, complete_bipartite, complete_graph, cycle_graph
from pisgenus.topology.structure import (
    block_edges,
    blocks,
    cut_vertices,
    euler_bound_from_counts,
    euler_lower_bound,
    girth,
)

from test_ideals import ACCEPTANCE_RINGS


def bowtie():
    return LabeledGraph.from_edges(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)])


def test_bowtie_blocks():
    g = bowtie()
    assert sorted(blocks(g)) == [[0, 1, 2], [2, 3, 4]]
    assert cut_vertices(g) == [2]


def test_path_blocks_are_edges():
    g = LabeledGraph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    assert len(blocks(g)) == 3
    assert cut_vertices(g) == [1, 2]


def test_isolated_vertices_form_no_block():
    g = LabeledGraph.from_edges(3, [(0, 1)])
    assert blocks(g) == [[0, 1]]


def test_girth_examples():
    assert girth(complete_graph(5)) == 3
    assert girth(complete_bipartite(3, 3)) == 4
    assert girth(cycle_graph(7)) == 7
    assert girth(LabeledGraph.from_edges(4, [(0, 1), (1, 2), (1, 3)])) == math.inf


def test_euler_bound_examples():
    assert euler_lower_bound(complete_graph(5)) == 1
    assert euler_lower_bound(complete_bipartite(3, 3)) == 1
    assert euler_lower_bound(complete_bipartite(5, 5)) == 3
    assert euler_lower_bound(complete_graph(4)) == 0
    assert euler_bound_from_counts(10, 9, math.inf) == 0
    with pytest.raises(ValueError):
        euler_lower_bound(LabeledGraph.from_edges(4, [(0, 1), (2, 3)]))


def to_nx(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h


def nx_blocks(g):
    return sorted(sorted({v for e in c for v in e}) for c in nx.biconnected_component_edges(to_nx(g)))


@given(st.integers(2, 14), st.data())
def test_blocks_match_networkx(n, data):
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges = data.draw(st.lists(st.sampled_from(pairs), unique=True, max_size=3 * n))
    g = LabeledGraph.from_edges(n, edges)
    assert sorted(blocks(g)) == nx_blocks(g)
    assert sorted(cut_vertices(g)) == sorted(nx.articulation_points(to_nx(g)))
    # every edge lies in exactly one block
    flat = [e for comp in block_edges(g) for e in comp]
    assert sorted(flat) == sorted(g.edges())


@given(st.integers(3, 12), st.data())
def test_girth_matches_networkx(n, data):
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges = data.draw(st.lists(st.sampled_from(pairs), unique=True, max_size=2 * n))
    g = LabeledGraph.from_edges(n, edges)
    assert girth(g) == nx.girth(to_nx(g))


@pytest.mark.parametrize("spec", ACCEPTANCE_RINGS[2:])
def test_pis_blocks_match_networkx(spec, bundle):
    _, _, g = bundle(spec)
    assert sorted(blocks(g)) == nx_blocks(g)
