import numpy as np
import pytest
from hypothesis import given, settings as hsettings, strategies as st

from bapcore.apps.experiments.services.generator_service import generate_instance
from bapcore.apps.graph.models.graph import WeightedBipartiteGraph
from bapcore.apps.graph.models.matching import Matching
from bapcore.apps.graph.models.vertex import Edge
from bapcore.apps.graph.services.oracle_service import brute_force_bottleneck
from bapcore.apps.merge.models.partition import Partition
from bapcore.apps.merge.schemas.report import Decision
from bapcore.apps.merge.services.cluster_service import (
    agent_task_trees,
    detached_edges,
    is_bottleneck_cluster,
    is_critical_bottleneck_edge,
)
from bapcore.apps.merge.services.merge_service import (
    bottleneck_bound,
    check_merge_conditions,
    merge_or_warmstart,
    solve_partition,
)
from bapcore.apps.pruner.services.prune_service import prune_bap
from bapcore.config import Distribution
from bapcore.exceptions import InvalidInputException, PreconditionException


def test_critical_edge_of_cluster(i3):
    g, M = i3
    assert is_critical_bottleneck_edge(g, M, Edge(0, 0))
    # a4b4 is as heavy but a1 wins the tie
    assert not is_critical_bottleneck_edge(g, M, Edge(3, 3))


def test_cluster_and_trees(i3):
    g, M = i3
    assert is_bottleneck_cluster(g, M, Edge(0, 0))
    agent_tree, task_tree = agent_task_trees(g, M, Edge(0, 0))
    assert agent_tree.agents == [0, 4, 5, 6]
    assert agent_tree.tasks == [4, 5, 6]
    assert task_tree.agents == [1, 2, 3]
    assert task_tree.tasks == [0, 1, 2, 3]
    assert len(agent_tree.edges) == 6
    assert len(task_tree.edges) == 6
    assert detached_edges(g, M, Edge(0, 0), (agent_tree, task_tree)) == frozenset()


def test_isolated_pair_breaks_the_cluster(i3_with_isolated_pair):
    g, M = i3_with_isolated_pair
    assert not is_bottleneck_cluster(g, M, Edge(0, 0))
    with pytest.raises(PreconditionException):
        agent_task_trees(g, M, Edge(0, 0))


def test_union_reused_when_no_light_cross_edge_reaches(i1, i4):
    assert bottleneck_bound(i4) == 6
    M, report, trace = merge_or_warmstart(i4)
    assert report.decision is Decision.REUSE_UNION
    assert not report.cond_i
    assert not report.swapped
    assert report.e1 == (1, 0)
    assert report.e2 == (2, 3)
    assert not report.g1_cluster
    assert not report.hypotheses_hold
    assert trace is None
    assert M == Matching([1, 0, 3, 2])
    assert M.bottleneck(i1.weight) == brute_force_bottleneck(i1)[1]


def test_sides_are_ordered_by_bottleneck(i1):
    p = Partition(
        graph=i1,
        agents1=(2, 3),
        tasks1=(2, 3),
        agents2=(0, 1),
        tasks2=(0, 1),
        matching1=Matching([1, 0]),
        matching2=Matching([1, 0]),
    )
    report = check_merge_conditions(p)
    assert report.swapped
    assert report.w_e1 == 6 and report.w_e2 == 4
    assert report.e1 == (1, 0)
    assert report.decision is Decision.REUSE_UNION


def test_all_conditions_force_a_warm_start(merge_instance):
    report = check_merge_conditions(merge_instance, verify=True)
    assert report.cond_i and report.cond_ii and report.cond_iii
    assert report.all_conditions
    assert report.g1_cluster and report.g2_cluster
    assert not report.g2_has_free_agents
    assert report.hypotheses_hold
    assert report.decision is Decision.WARM_START_REQUIRED
    assert report.bound == 10
    assert report.witness_path == ["b3", "a5", "b5", "a4", "b4", "a2"]
    assert report.witness_edges == [(4, 2), (1, 3)]
    assert report.notes == []


def test_warm_start_reaches_the_optimum(merge_instance):
    M, report, trace = merge_or_warmstart(merge_instance)
    assert trace is not None
    assert trace.initial_weight == 10
    assert M.bottleneck(merge_instance.graph.weight) == 7
    assert brute_force_bottleneck(merge_instance.graph)[1] == 7


def test_verify_rejects_a_suboptimal_side(i1):
    # {e11, e22} is a perfect matching of side 1 but heavier than {e12, e21}
    p = Partition.from_split(i1, 2, 2, Matching([0, 1]), Matching([1, 0]))
    with pytest.raises(PreconditionException):
        check_merge_conditions(p, verify=True)


def test_single_side_is_returned_as_is(i1):
    p = solve_partition(i1, 4, 4)
    assert p.is_single
    M, report, trace = merge_or_warmstart(p)
    assert report.decision is Decision.REUSE_UNION
    assert report.notes == ["second side is empty"]
    assert M.bottleneck(i1.weight) == 6
    with pytest.raises(InvalidInputException):
        p.swapped()


def test_partition_validation(i1):
    with pytest.raises(InvalidInputException):
        Partition.from_split(i1, 2, 4, Matching([0, 1])).validate()
    with pytest.raises(PreconditionException):
        solve_partition(i1, 0, 2)


def test_solve_partition_in_parallel(i1):
    p = solve_partition(i1, 2, 2, parallel=True)
    assert p.matching1 == Matching([1, 0])
    assert p.matching2 == Matching([1, 0])


def _separated_two_cluster_instances(count: int):
    found = []
    for seed in range(40):
        g = generate_instance(10, 10, Distribution.TWO_CLUSTERS, seed)
        p = solve_partition(g, 5, 5)
        cross = min(g.weight[:5, 5:].min(), g.weight[5:, :5].min())
        if bottleneck_bound(p) < cross:
            found.append((g, p))
        if len(found) == count:
            break
    return found


@pytest.mark.slow
def test_far_apart_clusters_reuse_the_union():
    cases = _separated_two_cluster_instances(3)
    assert cases
    for g, p in cases:
        M, report, trace = merge_or_warmstart(p)
        assert not report.cond_i and not report.cond_ii
        assert report.decision is Decision.REUSE_UNION
        _, warm = prune_bap(g, M)
        assert warm.iterations == 1


@pytest.mark.property_based
@given(st.integers(0, 10_000))
@hsettings(max_examples=25, deadline=None)
def test_bound_and_union_optimality(seed):
    g = generate_instance(6, 6, Distribution.TWO_CLUSTERS, seed)
    p = solve_partition(g, 3, 3)
    M, report, _ = merge_or_warmstart(p)
    _, optimum = brute_force_bottleneck(g)
    assert optimum <= bottleneck_bound(p)
    if report.decision is Decision.WARM_START_REQUIRED:
        assert M.bottleneck(g.weight) == optimum
    assert np.isclose(report.bound, bottleneck_bound(p))


def test_tied_bottlenecks_still_warm_start():
    g = WeightedBipartiteGraph([[25.0, 8.0], [6.0, 25.0]])
    p = solve_partition(g, 1, 1)
    M, report, trace = merge_or_warmstart(p)
    assert report.w_e1 == report.w_e2 == 25
    assert report.cond_i and report.cond_ii and report.cond_iii
    assert not report.hypotheses_hold
    assert report.decision is Decision.WARM_START_REQUIRED
    assert trace is not None
    assert M.bottleneck(g.weight) == 8


def _random_split(rng: np.random.Generator, max_side: int, high: int, extra_agents: bool = False):
    n1, n2 = (int(k) for k in rng.integers(1, max_side + 1, size=2))
    m1 = n1 + (int(rng.integers(0, 2)) if extra_agents else 0)
    m2 = n2 + (int(rng.integers(0, 2)) if extra_agents else 0)
    weight = rng.integers(1, high + 1, size=(m1 + m2, n1 + n2)).astype(float)
    return WeightedBipartiteGraph(weight), m1, n1


@st.composite
def small_splits(draw):
    seed = draw(st.integers(0, 2**32 - 1))
    high = draw(st.sampled_from([3, 9, 29]))
    return _random_split(np.random.default_rng(seed), 3, high, extra_agents=True)


@pytest.mark.property_based
@given(small_splits())
@hsettings(max_examples=200, deadline=None)
def test_merged_matching_is_always_optimal(case):
    g, m1, n1 = case
    p = solve_partition(g, m1, n1)
    M, report, _ = merge_or_warmstart(p)
    _, optimum = brute_force_bottleneck(g)
    assert M.bottleneck(g.weight) == optimum
    if report.decision is Decision.REUSE_UNION:
        assert p.union_matching().bottleneck(g.weight) == optimum


@pytest.mark.slow
def test_conditions_match_improvability_when_hypotheses_hold():
    rng = np.random.default_rng(2024)
    valid = 0
    for _ in range(40_000):
        g, m1, n1 = _random_split(rng, 4, 29)
        p = solve_partition(g, m1, n1)
        M, report, _ = merge_or_warmstart(p)
        _, optimum = brute_force_bottleneck(g)
        assert optimum <= report.bound
        assert M.bottleneck(g.weight) == optimum
        if not report.hypotheses_hold:
            continue
        valid += 1
        assert report.all_conditions == (optimum < report.w_e1)
        if valid == 2000:
            break
    assert valid == 2000
