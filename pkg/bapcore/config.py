from enum import Enum
from typing import List

from pydantic_settings import BaseSettings

from bapcore.env_manager import EnvManager


class Strategy(str, Enum):
    """Augmenting-path search used inside pruneBAP."""

    DFS_GREEDY = "dfs_greedy"
    DFS_INDEX = "dfs_index"
    BFS = "bfs"

    @property
    def is_dfs(self) -> bool:
        return self is not Strategy.BFS

    @classmethod
    def parse(cls, value: "str | Strategy") -> "Strategy":
        """Accept the CLI spellings `dfs`, `dfs-index` and `bfs` as well as the enum values."""
        if isinstance(value, Strategy):
            return value
        aliases = {"dfs": cls.DFS_GREEDY, "dfs-greedy": cls.DFS_GREEDY, "dfs-index": cls.DFS_INDEX}
        key = value.strip().lower()
        if key in aliases:
            return aliases[key]
        return cls(key)


class Distribution(str, Enum):
    UNIFORM_SQUARE = "uniform_square"
    TWO_CLUSTERS = "two_clusters"


class ExperimentName(str, Enum):
    COMPLEXITY = "complexity"
    CONVERGENCE = "convergence"
    MESSAGE = "message"
    OPTIMGAP = "optimgap"
    KSTAR = "kstar"
    MERGE = "merge"


class TopologyKind(str, Enum):
    COMPLETE = "complete"
    PATH = "path"
    RING = "ring"
    STAR = "star"
    RANDOM = "random"
    FILE = "file"


class Settings(BaseSettings):
    LOG_LEVEL: str = EnvManager.get("BAP_LOG_LEVEL", "INFO")
    # empty means console logging only
    LOG_FILE: str = EnvManager.get("BAP_LOG_FILE", "")
    LOG_MAX_BYTES: int = EnvManager.get_int("BAP_LOG_MAX_BYTES", 10 * 1024 * 1024)
    LOG_BACKUP_COUNT: int = EnvManager.get_int("BAP_LOG_BACKUP_COUNT", 5)

    DEFAULT_STRATEGY: Strategy = Strategy.parse(
        EnvManager.get("BAP_DEFAULT_STRATEGY", Strategy.DFS_GREEDY.value)
    )
    DEFAULT_TOPOLOGY: str = EnvManager.get("BAP_DEFAULT_TOPOLOGY", TopologyKind.COMPLETE.value)
    RANDOM_TOPOLOGY_P: float = EnvManager.get_float("BAP_RANDOM_TOPOLOGY_P", 0.3)

    DEFAULT_TRIALS: int = EnvManager.get_int("BAP_DEFAULT_TRIALS", 100)
    DEFAULT_SEED: int = EnvManager.get_int("BAP_DEFAULT_SEED", 0)
    DESK_MAX_N: int = EnvManager.get_int("BAP_DESK_MAX_N", 30)
    WORKERS: int = EnvManager.get_int("BAP_WORKERS", 1)

    # exhaustive oracles refuse anything larger
    MAX_ORACLE_TASKS: int = EnvManager.get_int("BAP_MAX_ORACLE_TASKS", 9)
    MAX_PATH_ENUMERATION_TASKS: int = EnvManager.get_int("BAP_MAX_PATH_ENUMERATION_TASKS", 6)

    # coordinates of generated instances
    SQUARE_SIDE: float = EnvManager.get_float("BAP_SQUARE_SIDE", 100.0)
    CLUSTER_LOW: List[float] = [5.0, 40.0]
    CLUSTER_HIGH: List[float] = [60.0, 95.0]


settings = Settings()
