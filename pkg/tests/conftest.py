import numpy as np
import pytest

from bapcore.apps.graph.models.graph import WeightedBipartiteGraph
from bapcore.apps.graph.models.matching import Matching, matching_from_pairs
from bapcore.apps.graph.models.vertex import Edge
from bapcore.apps.search.models.search import SearchInput

# rank weights of the four-by-four example, lightest first; "pq" is agent p, task q
I1_RANKS = ["24", "42", "43", "34", "12", "21", "13", "22", "33", "23", "14", "31", "11", "41", "32", "44"]


def _i1_weights() -> np.ndarray:
    w = np.zeros((4, 4))
    for rank, pq in enumerate(I1_RANKS, start=1):
        w[int(pq[0]) - 1, int(pq[1]) - 1] = rank
    return w


def graph_from_edges(m: int, n: int, edges: dict[tuple[int, int], float], default=None) -> WeightedBipartiteGraph:
    """One-based (agent, task) -> weight; missing edges are absent unless a default weight is given."""
    weight = np.full((m, n), default if default is not None else 0.0)
    present = np.full((m, n), default is not None)
    for (a, t), w in edges.items():
        weight[a - 1, t - 1] = w
        present[a - 1, t - 1] = True
    return WeightedBipartiteGraph(weight, present)


@pytest.fixture
def i1() -> WeightedBipartiteGraph:
    return WeightedBipartiteGraph(_i1_weights())


@pytest.fixture
def i2() -> SearchInput:
    """Five agents, four tasks, unit weights; {a1,b1} has just been removed."""
    kept = [(2, 2), (3, 3), (4, 4), (2, 1), (3, 1), (4, 2), (1, 3), (5, 2), (5, 4)]
    g = graph_from_edges(5, 4, {e: 1.0 for e in kept + [(1, 1)]})
    mask = np.zeros((5, 4), dtype=bool)
    for a, t in kept:
        mask[a - 1, t - 1] = True
    M_bar = matching_from_pairs(5, [(2, 2), (3, 3), (4, 4)])
    return SearchInput(graph=g, removed_edge=Edge(0, 0), matching=M_bar, edges=mask)


I3_MATCHING = [(1, 1), (2, 2), (3, 3), (4, 4), (5, 5), (6, 6), (7, 7)]
I3_EDGES = {
    (1, 1): 20, (2, 2): 3, (3, 3): 7, (4, 4): 20, (5, 5): 20, (6, 6): 19, (7, 7): 5,
    (2, 1): 2, (3, 1): 5, (4, 1): 11, (1, 5): 13, (1, 6): 17, (1, 7): 5,
}


@pytest.fixture
def i3() -> tuple[WeightedBipartiteGraph, Matching]:
    """A bottleneck cluster around {a1,b1}."""
    return graph_from_edges(7, 7, I3_EDGES), matching_from_pairs(7, I3_MATCHING)


@pytest.fixture
def i3_with_isolated_pair() -> tuple[WeightedBipartiteGraph, Matching]:
    edges = dict(I3_EDGES)
    edges[(8, 8)] = 1
    return graph_from_edges(8, 8, edges), matching_from_pairs(8, I3_MATCHING + [(8, 8)])


@pytest.fixture
def i4(i1):
    """The four-by-four example split into {a1,a2,b1,b2} and {a3,a4,b3,b4}, both sides solved."""
    from bapcore.apps.merge.models.partition import Partition

    M1 = Matching([1, 0])
    M2 = Matching([1, 0])
    return Partition.from_split(i1, 2, 2, M1, M2)


@pytest.fixture
def merge_instance():
    """
    Three agents and tasks on side 1, two on side 2 (agents and tasks 4, 5),
    two light cross edges and an alternating path inside side 2.
    """
    from bapcore.apps.merge.models.partition import Partition

    edges = {
        (1, 1): 10, (2, 2): 4, (3, 3): 5, (1, 2): 3, (3, 1): 6,
        (4, 4): 2, (5, 5): 8, (4, 5): 3,
        (5, 3): 7, (2, 4): 7,
    }
    g = graph_from_edges(5, 5, edges, default=50.0)
    return Partition.from_split(g, 3, 3, Matching([0, 1, 2]), Matching([0, 1]))
