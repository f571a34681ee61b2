"""The ten graph questions the benchmark asks, plus their per-task metadata."""
from __future__ import annotations

from enum import Enum


class Task(str, Enum):
    NODE_COUNT = "node_count"
    EDGE_COUNT = "edge_count"
    NODE_DEGREE = "node_degree"
    NEIGHBORS = "neighbors"
    CONNECTED_COMPONENTS = "connected_components"
    CYCLE_CHECK = "cycle_check"
    MST = "mst"
    SHORTEST_PATH = "shortest_path"
    BIPARTITE_CHECK = "bipartite_check"
    TOPOLOGICAL_SORT = "topological_sort"

    def __str__(self) -> str:  # so f-strings yield "edge_count", not "Task.EDGE_COUNT"
        return self.value


#: Tasks whose answer is a property of the whole graph (one question per graph).
GRAPH_LEVEL_TASKS: tuple[Task, ...] = (
    Task.NODE_COUNT,
    Task.EDGE_COUNT,
    Task.CONNECTED_COMPONENTS,
    Task.CYCLE_CHECK,
    Task.MST,
    Task.BIPARTITE_CHECK,
    Task.TOPOLOGICAL_SORT,
)

#: Tasks asked about a single node (several questions per graph).
NODE_LEVEL_TASKS: tuple[Task, ...] = (Task.NODE_DEGREE, Task.NEIGHBORS)

#: Tasks asked about a pair of nodes (several questions per graph).
PAIR_LEVEL_TASKS: tuple[Task, ...] = (Task.SHORTEST_PATH,)

ALL_TASKS: tuple[Task, ...] = tuple(Task)

#: How many node / node-pair questions are drawn from each graph.
QUERIES_PER_GRAPH = 5


def query_arity(task: Task) -> int:
    """Number of node arguments a question of this task carries (0, 1 or 2)."""
    if task in NODE_LEVEL_TASKS:
        return 1
    if task in PAIR_LEVEL_TASKS:
        return 2
    return 0


def default_label_base(task: Task) -> int:
    """Node numbering used on the prompt surface for this task.

    Everything is 0-based except topological sorting, whose instances are
    conventionally described over nodes 1..n.
    """
    return 1 if task is Task.TOPOLOGICAL_SORT else 0


DISPLAY_NAMES: dict[Task, str] = {
    Task.NODE_COUNT: "Node count",
    Task.EDGE_COUNT: "Edge count",
    Task.NODE_DEGREE: "Node degree",
    Task.NEIGHBORS: "Neighbors",
    Task.CONNECTED_COMPONENTS: "Connected components",
    Task.CYCLE_CHECK: "Cycle check",
    Task.MST: "MST",
    Task.SHORTEST_PATH: "Shortest path",
    Task.BIPARTITE_CHECK: "Bipartite check",
    Task.TOPOLOGICAL_SORT: "Topological sorting",
}
