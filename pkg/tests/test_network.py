import json

import numpy as np
import pytest
from hypothesis import assume, given, settings as hsettings, strategies as st

from bapcore.apps.experiments.services.generator_service import generate_instance
from bapcore.apps.graph.models.graph import WeightedBipartiteGraph
from bapcore.apps.graph.models.vertex import Edge
from bapcore.apps.graph.services.oracle_service import brute_force_bottleneck, mcm_oracle
from bapcore.apps.network.models.comm_graph import CommGraph
from bapcore.apps.network.models.metrics import RoundMetrics
from bapcore.apps.network.services.consensus_service import consensus_rounds, max_consensus, min_consensus
from bapcore.apps.network.services.distributed_prune_service import (
    distributed_prune,
    make_agent_states,
    run_distributed_prune_bap,
)
from bapcore.apps.network.services.distributed_search_service import run_distributed_search
from bapcore.apps.network.services.network_service import SynchronousNetwork
from bapcore.apps.network.utils.topology import build_topology
from bapcore.apps.pruner.services.prune_service import prune_bap
from bapcore.apps.search.services.alternating_service import run_search
from bapcore.config import Strategy
from bapcore.exceptions import ConsensusException, InstanceFileException, InvalidInputException, TopologyException


def i2_states(i2):
    return [
        s.with_changes(pruned_local=i2.edges[s.id].copy()) for s in make_agent_states(i2.graph, i2.matching)
    ]


@pytest.mark.parametrize(
    "spec, agents, diameter, links",
    [("complete", 4, 1, 6), ("star", 5, 2, 4), ("star", 2, 1, 1), ("path", 5, 4, 4), ("ring", 4, 2, 4), ("ring", 2, 1, 1), ("complete", 1, 0, 0)],
)
def test_topology_diameters(spec, agents, diameter, links):
    comm = CommGraph.from_spec(spec, agents)
    assert comm.diameter == diameter
    assert len(comm.links) == links
    assert comm.messages_per_tick == 2 * links


def test_random_topology_is_connected_and_seeded():
    a = CommGraph.from_spec("random:0.05", 12, seed=3)
    b = CommGraph.from_spec("random:0.05", 12, seed=3)
    assert a.links == b.links
    assert a.diameter >= 1


def test_unknown_topology():
    with pytest.raises(TopologyException):
        build_topology("torus", 4)
    with pytest.raises(TopologyException):
        build_topology("random:lots", 4)


def test_disconnected_links_are_rejected():
    with pytest.raises(TopologyException):
        CommGraph(3, [(0, 1)])
    with pytest.raises(TopologyException):
        CommGraph(2, [(0, 2)])


def test_topology_file(tmp_path):
    path = tmp_path / "links.json"
    path.write_text(json.dumps({"agent_count": 3, "links": [[0, 1], [1, 2]]}))
    comm = CommGraph.from_spec(f"file:{path}", 3)
    assert comm.diameter == 2
    assert comm.neighbors(1) == (0, 2)
    with pytest.raises(TopologyException):
        CommGraph.from_spec(f"file:{path}", 4)
    with pytest.raises(InstanceFileException):
        CommGraph.from_spec(f"file:{tmp_path / 'missing.json'}", 3)


def test_max_consensus_needs_diameter_ticks():
    comm = CommGraph.from_spec("path", 5)
    candidates = [(Edge(i, 0), w) for i, w in enumerate([1.0, 2.0, 3.0, 4.0, 10.0])]
    # three ticks are not enough for agent 1 to hear from agent 5
    beliefs = consensus_rounds(candidates, comm, 3)
    assert beliefs[0] == (Edge(3, 0), 4.0)
    assert beliefs[4] == (Edge(4, 0), 10.0)
    beliefs = consensus_rounds(candidates, comm, comm.diameter)
    assert all(b == (Edge(4, 0), 10.0) for b in beliefs)
    assert max_consensus([], comm, candidates) == (Edge(4, 0), 10.0)


def test_consensus_ties_go_to_lower_agent():
    comm = CommGraph.from_spec("ring", 4)
    candidates = [None, (Edge(1, 2), 5.0), None, (Edge(3, 0), 5.0)]
    assert max_consensus([], comm, candidates) == (Edge(1, 2), 5.0)
    assert min_consensus([], comm, candidates) == (Edge(1, 2), 5.0)
    assert max_consensus([], comm, [None] * 4) is None


def test_min_consensus_defaults_to_lightest_edges(i1):
    states = make_agent_states(i1)
    assert min_consensus(states, CommGraph.complete(4)) == (Edge(1, 3), 1.0)
    assert max_consensus(states, CommGraph.complete(4)) == (Edge(3, 3), 16.0)


def test_agree_detects_disagreement():
    network = SynchronousNetwork(CommGraph.from_spec("path", 3))
    with pytest.raises(ConsensusException):
        network.agree([1, 2, 3], lambda items: list(items)[0])


def test_consensus_phase_is_metered():
    comm = CommGraph.from_spec("path", 5)
    network = SynchronousNetwork(comm)
    max_consensus([], comm, [(Edge(i, 0), float(i)) for i in range(5)], network=network)
    assert network.metrics.time_steps == 4
    assert network.metrics.messages_sent == 4 * 8
    assert [row.tick for row in network.metrics.ticks] == [1, 2, 3, 4]


def test_distributed_prune_on_identity(i1):
    states = make_agent_states(i1)
    pruned = distributed_prune(states, Edge(3, 3), 16.0)
    assert sum(int(s.pruned_local.sum()) for s in pruned) == 15
    assert pruned[3].matched_task == -1
    assert not pruned[3].pruned_local[3]
    assert all(s.pruned_local[s.matched_task] for s in pruned[:3])
    again = distributed_prune(pruned, Edge(3, 3), 16.0)
    assert all(np.array_equal(a.pruned_local, b.pruned_local) for a, b in zip(pruned, again))
    assert [s.matched_task for s in again] == [s.matched_task for s in pruned]


@pytest.mark.parametrize("strategy", list(Strategy))
@pytest.mark.parametrize("topology", ["complete", "path", "ring"])
def test_distributed_search_equals_centralized(i2, strategy, topology):
    comm = CommGraph.from_spec(topology, 5)
    outcome, metrics = run_distributed_search(i2_states(i2), comm, root=0, strategy=strategy)
    assert outcome == run_search(i2, strategy)
    assert metrics.time_steps == outcome.iterations * comm.diameter


def test_distributed_bfs_metrics(i2):
    comm = CommGraph.from_spec("path", 5)
    outcome, metrics = run_distributed_search(i2_states(i2), comm, root=0, strategy=Strategy.BFS)
    assert outcome.iterations == 2
    assert metrics.time_steps == 2 * 4
    assert metrics.explored_per_D_steps == [2, 3]
    assert metrics.max_payload_items == 3
    assert metrics.messages_sent == 8 * 8


def test_distributed_dfs_index_metrics(i2):
    comm = CommGraph.complete(5)
    outcome, metrics = run_distributed_search(i2_states(i2), comm, root=0, strategy=Strategy.DFS_INDEX)
    assert [str(v) for v in outcome.path] == ["b1", "a2", "b2", "a4", "b4", "a5"]
    assert metrics.time_steps == 3
    assert metrics.explored_per_D_steps == [1, 1, 1]
    assert metrics.max_payload_items == 1


def test_distributed_search_rejects_two_free_tasks(i2):
    states = i2_states(i2)
    states[1] = states[1].with_changes(matched_task=-1)
    with pytest.raises(InvalidInputException):
        run_distributed_search(states, CommGraph.complete(5), root=0)


@pytest.mark.parametrize("strategy", list(Strategy))
def test_distributed_prune_bap_equals_centralized(i1, strategy):
    comm = CommGraph.from_spec("ring", 4)
    M, trace, metrics = run_distributed_prune_bap(i1, comm, strategy=strategy)
    M_c, trace_c = prune_bap(i1, strategy=strategy)
    assert M == M_c
    assert trace.records == trace_c.records
    assert trace.final_bottleneck == trace_c.final_bottleneck
    assert metrics == RoundMetrics.from_trace(trace_c, comm)


def test_distributed_metrics_on_four_by_four(i1):
    _, _, metrics = run_distributed_prune_bap(i1, CommGraph.complete(4))
    # (1 + 2) + (1 + 4) + (1 + 1) phases of one tick
    assert metrics.time_steps == 10
    assert metrics.messages_sent == 120
    assert metrics.explored_per_D_steps == [1] * 6
    assert metrics.mean_explored_per_round == 1.0


def test_time_scales_with_diameter(i1):
    _, _, complete = run_distributed_prune_bap(i1, CommGraph.complete(4))
    _, _, ring = run_distributed_prune_bap(i1, CommGraph.from_spec("ring", 4))
    assert ring.time_steps == 2 * complete.time_steps
    assert ring.phases == complete.phases


def test_single_agent_has_no_ticks():
    g = WeightedBipartiteGraph([[3.0]])
    M, trace, metrics = run_distributed_prune_bap(g, CommGraph.complete(1))
    assert trace.final_weight == 3
    assert metrics.time_steps == 0
    assert metrics.ticks == []
    assert metrics.phases == 2


def test_agent_count_must_match(i1):
    with pytest.raises(TopologyException):
        run_distributed_prune_bap(i1, CommGraph.complete(3))


def test_metrics_extend_shifts_ticks():
    comm = CommGraph.from_spec("path", 3)
    a = RoundMetrics.for_comm(comm)
    a.record_phase()
    b = RoundMetrics.for_comm(comm)
    b.record_phase(explored=2, payload_items=2)
    a.extend(b)
    assert [row.tick for row in a.ticks] == [1, 2, 3, 4]
    assert a.ticks[-1].explored == 2
    assert a.ticks[-2].explored == 0
    assert a.csv_rows()[0] == [1, 4, 0, 1]


@st.composite
def distributed_cases(draw):
    n = draw(st.integers(1, 5))
    m = draw(st.integers(n, 6))
    weight = draw(st.lists(st.integers(1, 25), min_size=m * n, max_size=m * n))
    present = draw(st.lists(st.sampled_from([True, True, True, False]), min_size=m * n, max_size=m * n))
    g = WeightedBipartiteGraph(np.array(weight, dtype=float).reshape(m, n), np.array(present).reshape(m, n))
    topology = draw(st.sampled_from(["complete", "path", "ring", "star", "random:0.3"]))
    seed = draw(st.integers(0, 1000))
    return g, CommGraph.from_spec(topology, m, seed=seed)


@pytest.mark.property_based
@given(distributed_cases(), st.sampled_from(list(Strategy)))
@hsettings(max_examples=60, deadline=None)
def test_distributed_runs_replay_the_centralized_trace(case, strategy):
    g, comm = case
    M0 = mcm_oracle(g)
    assume(M0.cardinality == g.n)
    M, trace, metrics = run_distributed_prune_bap(g, comm, M0, strategy)
    M_c, trace_c = prune_bap(g, M0, strategy)
    assert M == M_c
    assert trace.records == trace_c.records
    assert metrics == RoundMetrics.from_trace(trace_c, comm)
    assert metrics.time_steps <= 4 * g.m * g.n**2 * comm.diameter


@pytest.mark.slow
@pytest.mark.parametrize("topology", ["complete", "ring", "path", "star", "random"])
def test_distributed_bottleneck_equals_brute_force(topology):
    for seed in range(300):
        n = 2 + seed % 6
        g = generate_instance(n, seed=seed)
        comm = CommGraph.from_spec(topology, n, seed=seed)
        _, best = brute_force_bottleneck(g)
        for strategy in Strategy:
            M, trace, metrics = run_distributed_prune_bap(g, comm, strategy=strategy)
            assert trace.final_weight == best
            assert M.bottleneck(g.weight) == best
            assert metrics.time_steps <= 4 * n * n**2 * comm.diameter
            for record in trace.records:
                bound = 2 * n - 1 if strategy.is_dfs else n
                assert record.search_iters <= bound
