"""Communication topology generators."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Callable

import networkx as nx

from bapcore.config import TopologyKind, settings
from bapcore.exceptions import InstanceFileException, TopologyException
from bapcore.logger import get_logger

logger = get_logger(__name__)


def generate_complete(num: int, **_) -> nx.Graph:
    return nx.complete_graph(num)


def generate_path(num: int, **_) -> nx.Graph:
    return nx.path_graph(num)


def generate_ring(num: int, **_) -> nx.Graph:
    graph = nx.cycle_graph(num)
    graph.remove_edges_from(list(nx.selfloop_edges(graph)))
    return graph


def generate_star(num: int, **_) -> nx.Graph:
    """Agent 0 in the centre."""
    return nx.star_graph(num - 1)


def generate_random(num: int, *, seed: int = 0, p: float | None = None) -> nx.Graph:
    """Erdős-Rényi graph with components chained by their lowest agents."""
    p = settings.RANDOM_TOPOLOGY_P if p is None else p
    graph = nx.gnp_random_graph(num, p, seed=seed)
    components = sorted((min(c) for c in nx.connected_components(graph)))
    graph.add_edges_from(zip(components, components[1:]))
    return graph


GENERATOR_REGISTRY: dict[TopologyKind, Callable[..., nx.Graph]] = {
    TopologyKind.COMPLETE: generate_complete,
    TopologyKind.PATH: generate_path,
    TopologyKind.RING: generate_ring,
    TopologyKind.STAR: generate_star,
    TopologyKind.RANDOM: generate_random,
}


def load_topology_file(path: str | Path) -> tuple[int, list[tuple[int, int]]]:
    """Read {"agent_count": m, "links": [[i, j], ...]} with zero-based agent indices."""
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
        count = int(payload["agent_count"])
        links = [(int(i), int(j)) for i, j in payload["links"]]
    except (OSError, ValueError, KeyError, TypeError) as e:
        raise InstanceFileException(str(path), str(e)) from e
    return count, links


def build_topology(spec: str, num: int, *, seed: int = 0) -> nx.Graph:
    """
    Build the graph named by spec: complete | path | ring | star | random[:p] | file:<json>.
    """
    kind, _, arg = spec.partition(":")
    try:
        topology = TopologyKind(kind.strip().lower())
    except ValueError as e:
        raise TopologyException(f"Unknown topology '{spec}'") from e

    if topology is TopologyKind.FILE:
        count, links = load_topology_file(arg)
        if count != num:
            raise TopologyException(f"Topology file has {count} agents, instance has {num}")
        graph = nx.Graph()
        graph.add_nodes_from(range(count))
        for i, j in links:
            if not (0 <= i < count and 0 <= j < count):
                raise TopologyException(f"Link ({i}, {j}) is out of range for {count} agents")
            if i != j:
                graph.add_edge(i, j)
        return graph

    kwargs: dict = {}
    if topology is TopologyKind.RANDOM:
        kwargs["seed"] = seed
        if arg:
            try:
                kwargs["p"] = float(arg)
            except ValueError as e:
                raise TopologyException(f"Bad edge probability in '{spec}'") from e
    logger.debug("Generating topology", extra={"topology": topology.value, "agents": num})
    return GENERATOR_REGISTRY[topology](num, **kwargs)
