import numpy as np
import pytest

from bapcore.apps.graph.models.graph import WeightedBipartiteGraph
from bapcore.apps.graph.models.matching import FREE, Matching, matching_from_pairs
from bapcore.apps.graph.models.vertex import Edge, Side, Vertex
from bapcore.apps.graph.services.graph_service import (
    alternating_reach,
    as_walk,
    augment,
    check_maximum,
    is_alternating_path,
    is_augmenting_path,
    max_edge_in_matching,
    neighbors,
    pruned_edge_set,
)
from bapcore.exceptions import (
    EmptyMatchingException,
    InvalidGraphException,
    InvalidMatchingException,
    InvalidPathException,
    NotMaximumMatchingException,
    VertexOutOfRangeException,
)


def test_vertex_labels_are_one_based():
    assert str(Vertex.agent(0)) == "a1"
    assert str(Vertex.task(3)) == "b4"
    assert str(Edge(1, 2)) == "{a2,b3}"
    assert Side.AGENT.other is Side.TASK


def test_graph_rejects_bad_shapes():
    with pytest.raises(InvalidGraphException):
        WeightedBipartiteGraph(np.zeros((0, 3)))
    with pytest.raises(InvalidGraphException):
        WeightedBipartiteGraph(np.zeros((2, 2)), np.ones((2, 3), dtype=bool))
    with pytest.raises(InvalidGraphException):
        WeightedBipartiteGraph([[1.0, np.nan]])


def test_absent_edge_may_carry_any_weight():
    g = WeightedBipartiteGraph([[1.0, np.inf]], [[True, False]])
    assert g.edge_count == 1
    assert not g.has_edge(Edge(0, 1))
    with pytest.raises(InvalidGraphException):
        g.w(Edge(0, 1))


def test_out_of_range_vertex(i1):
    with pytest.raises(VertexOutOfRangeException):
        i1.has_edge(Edge(4, 0))
    with pytest.raises(VertexOutOfRangeException):
        neighbors(i1, Vertex.task(9))


def test_weight_and_neighbours(i1):
    assert i1.w(Edge(1, 3)) == 1
    assert i1.w(Edge(3, 3)) == 16
    below = i1.below(5)
    assert int(below.sum()) == 4
    assert neighbors(i1, Vertex.task(0), below) == []
    assert neighbors(i1, Vertex.agent(1), below) == [Vertex.task(3)]


def test_subgraph_keeps_local_order(i1):
    sub = i1.subgraph([2, 3], [2, 3])
    assert sub.shape == (2, 2)
    assert sub.w(Edge(0, 1)) == 4  # e34
    assert sub.w(Edge(1, 0)) == 3  # e43


def test_matching_rejects_shared_task():
    with pytest.raises(InvalidMatchingException):
        Matching([0, 0, 1])


def test_matching_views():
    M = matching_from_pairs(4, [(1, 2), (3, 1)])
    assert M.to_list() == [1, FREE, 0, FREE]
    assert M.cardinality == 2
    assert M.free_agents() == [1, 3]
    assert M.free_tasks(3) == [2]
    assert M.agent_of(0) == 2
    assert M.is_free(Vertex.task(2))
    assert Edge(0, 1) in M
    assert M.without(Edge(0, 1)).cardinality == 1
    with pytest.raises(InvalidMatchingException):
        M.without(Edge(1, 1))


def test_max_edge_ties_go_to_lowest_agent():
    g = WeightedBipartiteGraph([[3.0, 1.0], [1.0, 3.0]])
    e, w = max_edge_in_matching(g, Matching([0, 1]))
    assert e == Edge(0, 0)
    assert w == 3.0


def test_max_edge_of_empty_matching():
    g = WeightedBipartiteGraph([[1.0]])
    with pytest.raises(EmptyMatchingException):
        max_edge_in_matching(g, Matching.empty(1))


def test_pruned_edge_set_of_identity(i1):
    phi = pruned_edge_set(i1, Matching.identity(4, 4))
    assert phi.threshold == 16
    # every edge but e44 is lighter, and e44 is matched
    assert len(phi) == 16
    phi = pruned_edge_set(i1, Matching([1, 0, 3, 2]))
    assert phi.threshold == 6
    assert phi.edges == {Edge(1, 3), Edge(3, 1), Edge(3, 2), Edge(2, 3), Edge(0, 1), Edge(1, 0)}


def test_check_maximum(i1):
    check_maximum(i1, Matching.identity(4, 4))
    with pytest.raises(NotMaximumMatchingException):
        check_maximum(i1, Matching([0, 1, 2, FREE]))


def test_as_walk_accepts_edges_and_rejects_repeats():
    walk = as_walk([Edge(1, 0), Edge(1, 1), Edge(3, 1)])
    assert walk == [Vertex.task(0), Vertex.agent(1), Vertex.task(1), Vertex.agent(3)]
    with pytest.raises(InvalidPathException):
        as_walk([Vertex.task(0), Vertex.agent(1), Vertex.task(0)])
    with pytest.raises(InvalidPathException):
        as_walk([Vertex.task(0), Vertex.task(1)])


def test_augment_along_path(i2):
    M = i2.matching
    path = [Vertex.task(0), Vertex.agent(1), Vertex.task(1), Vertex.agent(4)]
    assert is_alternating_path(path, M)
    assert is_augmenting_path(path, M, i2.graph)
    M2 = augment(M, path, i2.graph)
    assert M2.cardinality == M.cardinality + 1
    assert M2.task_of(1) == 0 and M2.task_of(4) == 1


def test_augment_rejects_non_augmenting(i2):
    path = [Vertex.task(1), Vertex.agent(1), Vertex.task(0)]
    with pytest.raises(InvalidPathException):
        augment(i2.matching, path)


def test_alternating_reach_from_removed_task(i2):
    parent, level = alternating_reach(
        i2.graph, i2.matching, [Vertex.task(0)], matched_from=Side.AGENT, edge_filter=i2.edges
    )
    assert parent[Vertex.task(0)] is None
    assert level[Vertex.agent(1)] == 1
    assert level[Vertex.task(1)] == 2
    assert parent[Vertex.agent(4)] == Vertex.task(1)
    # a1 hangs off b3, which a3 reaches through its matched edge
    assert parent[Vertex.agent(0)] == Vertex.task(2)
