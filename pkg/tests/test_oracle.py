import numpy as np
import pytest
from hypothesis import given, settings as hsettings, strategies as st

from bapcore.apps.graph.models.graph import WeightedBipartiteGraph
from bapcore.apps.graph.models.matching import Matching
from bapcore.apps.graph.models.vertex import Vertex
from bapcore.apps.graph.services.oracle_service import (
    brute_force_bottleneck,
    count_alternating_paths,
    iter_augmenting_paths,
    mcm_oracle,
    reachable_agents,
    shortest_augmenting_path_length,
)
from bapcore.exceptions import InstanceTooLargeException


@st.composite
def masked_graphs(draw, max_side=5):
    m = draw(st.integers(1, max_side))
    n = draw(st.integers(1, m))
    weight = draw(
        st.lists(st.lists(st.integers(1, 20), min_size=n, max_size=n), min_size=m, max_size=m)
    )
    present = draw(st.lists(st.lists(st.booleans(), min_size=n, max_size=n), min_size=m, max_size=m))
    return WeightedBipartiteGraph(np.array(weight, dtype=float), np.array(present))


def test_mcm_of_complete_graph_is_identity(i1):
    assert mcm_oracle(i1) == Matching.identity(4, 4)


def test_mcm_under_filter(i1):
    M = mcm_oracle(i1, i1.below(5))
    # only e24, e42, e43, e34 survive and a2, a3 compete for b4
    assert M.cardinality == 2
    assert M.is_within(i1.below(5))


def test_brute_force_on_four_by_four(i1):
    M, value = brute_force_bottleneck(i1)
    assert value == 6
    assert M.bottleneck(i1.weight) == 6


def test_brute_force_refuses_large_instances():
    g = WeightedBipartiteGraph(np.ones((10, 10)))
    with pytest.raises(InstanceTooLargeException):
        brute_force_bottleneck(g)


def test_brute_force_on_rectangular_graph():
    g = WeightedBipartiteGraph([[9.0, 1.0], [2.0, 8.0], [3.0, 7.0]])
    M, value = brute_force_bottleneck(g)
    assert value == 2
    assert M.cardinality == 2


def test_augmenting_paths_of_search_instance(i2):
    root = Vertex.task(0)
    paths = list(iter_augmenting_paths(i2.graph, i2.matching, i2.edges))
    assert len(paths) == 3
    assert all(p[0] == root for p in paths)
    assert shortest_augmenting_path_length(i2.graph, i2.matching, root, i2.edges) == 3
    assert reachable_agents(i2.graph, i2.matching, root, i2.edges) == {0, 1, 2, 3, 4}
    assert count_alternating_paths(i2.graph, i2.matching, root, Vertex.agent(4), i2.edges) == 2


@pytest.mark.property_based
@given(masked_graphs())
@hsettings(max_examples=60, deadline=None)
def test_mcm_matches_networkx(g):
    import networkx as nx

    G = nx.Graph()
    G.add_nodes_from(("a", i) for i in range(g.m))
    G.add_nodes_from(("b", j) for j in range(g.n))
    G.add_edges_from((("a", e.agent), ("b", e.task)) for e in g.edges())
    expected = len(nx.bipartite.maximum_matching(G, top_nodes=[("a", i) for i in range(g.m)])) // 2
    M = mcm_oracle(g)
    assert M.cardinality == expected
    assert M.is_within(g.present)


@pytest.mark.property_based
@given(masked_graphs(max_side=4))
@hsettings(max_examples=60, deadline=None)
def test_brute_force_is_a_maximum_matching(g):
    M, value = brute_force_bottleneck(g)
    assert M.cardinality == mcm_oracle(g).cardinality
    assert M.is_within(g.present)
    if M.cardinality:
        assert M.bottleneck(g.weight) == value
