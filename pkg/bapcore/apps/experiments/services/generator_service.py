"""Random Euclidean instances and instance/matching files."""

from __future__ import annotations

import math
from pathlib import Path
from typing import Optional

import numpy as np
from scipy.spatial.distance import cdist

from bapcore.apps.graph.models.graph import WeightedBipartiteGraph
from bapcore.apps.graph.models.matching import Matching
from bapcore.apps.graph.schemas.instance import InstanceFile, MatchingFile
from bapcore.config import Distribution, settings
from bapcore.exceptions import InstanceFileException, InvalidInputException
from bapcore.logger import get_logger
from bapcore.utils.io_utils import read_model, write_json

logger = get_logger(__name__)


def trial_rng(seed: int, n: int, trial: int) -> np.random.Generator:
    """Independent stream per (seed, n, trial)."""
    return np.random.default_rng(np.random.SeedSequence([seed, n, trial]))


def cluster_split(m: int, n: int) -> tuple[int, int]:
    """Agents and tasks placed in the first cluster of a two-cluster instance."""
    return math.ceil(m / 2), math.ceil(n / 2)


def _box(rng: np.random.Generator, count: int, low: float, high: float) -> np.ndarray:
    return rng.uniform(low, high, size=(count, 2))


def generate_instance(
    n: int,
    m: Optional[int] = None,
    dist: Distribution | str = Distribution.UNIFORM_SQUARE,
    seed: int | np.random.Generator = 0,
) -> WeightedBipartiteGraph:
    """
    Agents and tasks at random points in the plane, weights the Euclidean
    distances. two_clusters puts the first ceil(m/2) agents and ceil(n/2)
    tasks in one box and the rest in a box far away from it.
    """
    m = n if m is None else m
    if n < 1:
        raise InvalidInputException(f"Need at least one task, got n={n}")
    if m < n:
        raise InvalidInputException(f"Need at least as many agents as tasks, got m={m}, n={n}")
    dist = Distribution(dist)
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)

    if dist is Distribution.UNIFORM_SQUARE:
        agents = _box(rng, m, 0.0, settings.SQUARE_SIDE)
        tasks = _box(rng, n, 0.0, settings.SQUARE_SIDE)
    else:
        m1, n1 = cluster_split(m, n)
        low, high = settings.CLUSTER_LOW, settings.CLUSTER_HIGH
        agents = np.vstack([_box(rng, m1, *low), _box(rng, m - m1, *high)])
        tasks = np.vstack([_box(rng, n1, *low), _box(rng, n - n1, *high)])
    return WeightedBipartiteGraph(cdist(agents, tasks), positions=(agents, tasks))


def load_instance(path: str | Path) -> tuple[WeightedBipartiteGraph, Optional[tuple[int, int]]]:
    """Graph and optional (m1, n1) split from an instance file."""
    instance = read_model(path, InstanceFile)
    split = tuple(instance.split) if instance.split is not None else None
    logger.debug("Loaded instance", extra={"path": str(path), "m": instance.m, "n": instance.n})
    return instance.to_graph(), split


def save_instance(path: str | Path, g: WeightedBipartiteGraph, split: Optional[tuple[int, int]] = None) -> None:
    write_json(path, InstanceFile.from_graph(g, list(split) if split is not None else None))


def load_matching(path: str | Path, m: int) -> Matching:
    M = read_model(path, MatchingFile).to_matching()
    if M.m != m:
        raise InstanceFileException(str(path), f"matching lists {M.m} agents, instance has {m}")
    return M


def save_matching(path: str | Path, M: Matching) -> None:
    write_json(path, MatchingFile.from_matching(M))


def parse_n_range(text: str) -> list[int]:
    """'a:b' (inclusive), 'a:b:step', 'a,b,c' or a single value."""
    try:
        if ":" in text:
            parts = [int(p) for p in text.split(":")]
            if len(parts) not in (2, 3):
                raise ValueError(text)
            start, stop = parts[0], parts[1]
            step = parts[2] if len(parts) == 3 else 1
            if step < 1:
                raise ValueError(text)
            values = list(range(start, stop + 1, step))
        else:
            values = [int(p) for p in text.split(",") if p.strip()]
    except ValueError as e:
        raise InvalidInputException(f"Bad n range '{text}'") from e
    if not values or min(values) < 1:
        raise InvalidInputException(f"n range '{text}' has no positive values")
    if max(values) > settings.DESK_MAX_N:
        logger.warning("n range exceeds desk scale", extra={"max_n": max(values), "desk_max_n": settings.DESK_MAX_N})
    return values
