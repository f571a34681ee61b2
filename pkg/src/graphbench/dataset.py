"""Benchmark assembly and JSONL persistence.

Counting rules: 7 graph-level tasks x 3 buckets x 100 graphs = 2,100
instances; node degree and neighbors add 2 x 3 x 100 x 5 = 3,000; shortest
path adds 3 x 100 x 5 = 1,500; 6,600 in total.
"""
from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from . import oracles
from .graphs import (
    ALL_BUCKETS,
    BUCKETS,
    GeneratorConfig,
    Graph,
    SizeBucket,
    derive_instance_seed,
    derive_seed,
    gen_er,
    gen_er_dag,
    gen_random_bipartite,
    sample_distinct,
)
from .oracles import Answer, AnswerKind
from .tasks import ALL_TASKS, QUERIES_PER_GRAPH, Task, query_arity

SCHEMA_VERSION = 1
GENERATOR_VERSION = "1.0"
DIGEST_ALGORITHM = "sha256 over newline-terminated instance JSON lines"

#: Default number of graphs generated per (task, bucket) cell.
GRAPHS_PER_CELL = 100


class DatasetFormatError(ValueError):
    """Raised for schema mismatches and corrupt dataset lines."""


@dataclass(frozen=True)
class TaskInstance:
    """One benchmark question: a graph, optional query nodes, and its gold answer."""

    id: str
    task: Task
    bucket: SizeBucket
    graph: Graph
    query: tuple[int, ...]
    gold: Answer
    seed: int

    def to_json_obj(self) -> dict:
        return {
            "id": self.id,
            "task": self.task.value,
            "bucket": {"name": self.bucket.name, "n_min": self.bucket.n_min, "n_max": self.bucket.n_max},
            "graph": {
                "n": self.graph.n,
                "edges": [list(e) for e in self.graph.sorted_edges],
                "directed": self.graph.directed,
            },
            "query": list(self.query),
            "gold": answer_to_json(self.gold),
            "seed": self.seed,
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "TaskInstance":
        bucket = obj["bucket"]
        return cls(
            id=obj["id"],
            task=Task(obj["task"]),
            bucket=SizeBucket(bucket["name"], bucket["n_min"], bucket["n_max"]),
            graph=Graph.from_edges(obj["graph"]["n"], obj["graph"]["edges"], obj["graph"]["directed"]),
            query=tuple(obj["query"]),
            gold=answer_from_json(obj["gold"]),
            seed=obj["seed"],
        )


def answer_to_json(answer: Answer) -> dict:
    value = answer.value
    if answer.kind is AnswerKind.NODE_SET:
        value = sorted(value)
    elif answer.kind is AnswerKind.NODE_SEQ:
        value = list(value)
    elif answer.kind is AnswerKind.EDGE_SET:
        value = [list(e) for e in sorted(value)]
    return {"kind": answer.kind.value, "value": value}


def answer_from_json(obj: dict) -> Answer:
    kind = AnswerKind(obj["kind"])
    value = obj["value"]
    if kind is AnswerKind.INT:
        return Answer.integer(value)
    if kind is AnswerKind.BOOL:
        return Answer.boolean(value)
    if kind is AnswerKind.NODE_SET:
        return Answer.node_set(value)
    if kind is AnswerKind.NODE_SEQ:
        return Answer.node_seq(value)
    return Answer.edge_set(value)


@dataclass
class DatasetManifest:
    """Reproducibility record for one generated dataset."""

    master_seed: int
    generator_version: str
    counts: dict[str, dict[str, int]]
    total: int
    content_digest: str
    digest_algorithm: str = DIGEST_ALGORITHM
    schema_version: int = SCHEMA_VERSION
    #: Realized yes/no class balance of cycle-check instances per bucket.
    cycle_check_prior: dict[str, dict[str, int]] = field(default_factory=dict)

    def to_json_obj(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "master_seed": self.master_seed,
            "generator_version": self.generator_version,
            "counts": self.counts,
            "total": self.total,
            "content_digest": self.content_digest,
            "digest_algorithm": self.digest_algorithm,
            "cycle_check_prior": self.cycle_check_prior,
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "DatasetManifest":
        return cls(
            master_seed=obj["master_seed"],
            generator_version=obj["generator_version"],
            counts=obj["counts"],
            total=obj["total"],
            content_digest=obj["content_digest"],
            digest_algorithm=obj.get("digest_algorithm", DIGEST_ALGORITHM),
            schema_version=obj.get("schema_version", SCHEMA_VERSION),
            cycle_check_prior=obj.get("cycle_check_prior", {}),
        )


# --- graph construction per task ---------------------------------------------

_MAX_ATTEMPTS = 10_000


def _graph_for_instance(task: Task, bucket: SizeBucket, instance_seed: int) -> Graph:
    """Generate the graph for one instance, honoring per-task constraints.

    MST graphs are regenerated until connected (a spanning tree must exist);
    shortest-path graphs until at least QUERIES_PER_GRAPH distinct
    same-component pairs exist; bipartite-check draws its construction from
    {ER, random bipartite} by fair coin.
    """
    cfg = GeneratorConfig(bucket=bucket, task=task)
    if task is Task.TOPOLOGICAL_SORT:
        return gen_er_dag(cfg, derive_seed(instance_seed, "graph", 0))
    if task is Task.BIPARTITE_CHECK:
        coin = random.Random(derive_seed(instance_seed, "mixture")).random()
        generate = gen_er if coin < 0.5 else gen_random_bipartite
        return generate(cfg, derive_seed(instance_seed, "graph", 0))
    if task is Task.MST:
        for attempt in range(_MAX_ATTEMPTS):
            g = gen_er(cfg, derive_seed(instance_seed, "graph", attempt))
            if oracles.connected_components(g) == 1:
                return g
        raise RuntimeError("no connected graph found")  # pragma: no cover
    if task is Task.SHORTEST_PATH:
        for attempt in range(_MAX_ATTEMPTS):
            g = gen_er(cfg, derive_seed(instance_seed, "graph", attempt))
            if len(_same_component_pairs(g)) >= QUERIES_PER_GRAPH:
                return g
        raise RuntimeError("no graph with enough reachable pairs found")  # pragma: no cover
    return gen_er(cfg, derive_seed(instance_seed, "graph", 0))


def _same_component_pairs(g: Graph) -> list[tuple[int, int]]:
    """All unordered pairs of distinct nodes in one component, sorted."""
    uf = oracles._UnionFind(g.n)
    for u, v in g.edges:
        uf.union(u, v)
    members: dict[int, list[int]] = {}
    for x in range(g.n):
        members.setdefault(uf.find(x), []).append(x)
    pairs = []
    for nodes in members.values():
        for i, u in enumerate(nodes):
            for v in nodes[i + 1 :]:
                pairs.append((u, v))
    return sorted(pairs)


def _queries_for_instance(task: Task, g: Graph, instance_seed: int) -> list[tuple[int, ...]]:
    """Query arguments drawn from the graph: none, 5 distinct nodes, or 5
    distinct same-component pairs (endpoints always distinct)."""
    arity = query_arity(task)
    if arity == 0:
        return [()]
    rng = random.Random(derive_seed(instance_seed, "query"))
    if arity == 1:
        return [(u,) for u in sample_distinct(rng, range(g.n), QUERIES_PER_GRAPH)]
    pairs = _same_component_pairs(g)
    return [tuple(p) for p in sample_distinct(rng, pairs, QUERIES_PER_GRAPH)]


def build_instances(
    task: Task,
    bucket: SizeBucket,
    master_seed: int,
    graph_count: int = GRAPHS_PER_CELL,
    stream: str = "eval",
) -> list[TaskInstance]:
    """All instances of one (task, bucket) cell.

    ``stream`` namespaces the seed derivation; exemplar rendering uses its own
    stream so its graphs are disjoint from the evaluation set.
    """
    instances = []
    prefix = "" if stream == "eval" else f"{stream}-"
    for gi in range(graph_count):
        instance_seed = derive_instance_seed(master_seed, task, bucket, gi, stream=stream)
        g = _graph_for_instance(task, bucket, instance_seed)
        for qi, query in enumerate(_queries_for_instance(task, g, instance_seed)):
            instances.append(
                TaskInstance(
                    id=f"{prefix}{task.value}-{bucket.name}-{gi:03d}-{qi}",
                    task=task,
                    bucket=bucket,
                    graph=g,
                    query=query,
                    gold=oracles.gold_answer(task, g, query),
                    seed=instance_seed,
                )
            )
    return instances


def assemble_dataset(
    master_seed: int,
    tasks: Sequence[Task] = ALL_TASKS,
    buckets: Sequence[SizeBucket] = ALL_BUCKETS,
    graphs_per_cell: int = GRAPHS_PER_CELL,
) -> tuple[DatasetManifest, list[TaskInstance]]:
    """Generate the whole benchmark for a master seed; fully deterministic."""
    instances: list[TaskInstance] = []
    counts: dict[str, dict[str, int]] = {}
    prior: dict[str, dict[str, int]] = {}
    for task in tasks:
        counts[task.value] = {}
        for bucket in buckets:
            cell = build_instances(task, bucket, master_seed, graphs_per_cell)
            counts[task.value][bucket.name] = len(cell)
            instances.extend(cell)
            if task is Task.CYCLE_CHECK:
                yes = sum(1 for inst in cell if inst.gold.value)
                prior[bucket.name] = {"true": yes, "false": len(cell) - yes}
    manifest = DatasetManifest(
        master_seed=master_seed,
        generator_version=GENERATOR_VERSION,
        counts=counts,
        total=len(instances),
        content_digest=content_digest(instances),
        cycle_check_prior=prior,
    )
    return manifest, instances


# --- persistence --------------------------------------------------------------


def _instance_line(inst: TaskInstance) -> str:
    return json.dumps(inst.to_json_obj(), sort_keys=True, separators=(",", ":"))


def content_digest(instances: Iterable[TaskInstance]) -> str:
    """Digest of the dataset content, identical to the digest of a saved file's
    instance lines."""
    h = hashlib.sha256()
    for inst in instances:
        h.update(_instance_line(inst).encode("utf-8"))
        h.update(b"\n")
    return h.hexdigest()


def save_dataset(instances: Sequence[TaskInstance], path: str | Path) -> None:
    """Write header line plus one JSON line per instance."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as f:
        f.write(json.dumps({"schema_version": SCHEMA_VERSION, "kind": "graphbench-dataset"}) + "\n")
        for inst in instances:
            f.write(_instance_line(inst) + "\n")


def load_dataset(path: str | Path, strict: bool = True, verify: bool = True) -> list[TaskInstance]:
    """Load a saved dataset.

    strict: corrupt lines raise DatasetFormatError with their line number;
    with strict=False, loading stops there and the prior lines are returned.
    verify: re-check every gold answer against the oracles (self-checking).
    """
    path = Path(path)
    instances: list[TaskInstance] = []
    with path.open("r", encoding="utf-8") as f:
        header_line = f.readline()
        try:
            header = json.loads(header_line)
        except json.JSONDecodeError as exc:
            raise DatasetFormatError(f"line 1: unreadable header: {exc}") from exc
        if header.get("schema_version") != SCHEMA_VERSION:
            raise DatasetFormatError(
                f"schema version mismatch: file has {header.get('schema_version')!r}, "
                f"expected {SCHEMA_VERSION}"
            )
        for lineno, line in enumerate(f, start=2):
            if not line.strip():
                continue
            try:
                instances.append(TaskInstance.from_json_obj(json.loads(line)))
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                if strict:
                    raise DatasetFormatError(f"line {lineno}: corrupt instance: {exc}") from exc
                break
    if verify:
        verify_gold_answers(instances)
    return instances


def verify_gold_answers(instances: Iterable[TaskInstance]) -> None:
    """Check each stored gold against its oracle/validator; raise on mismatch."""
    for inst in instances:
        if inst.gold.kind is AnswerKind.EDGE_SET:
            ok = oracles.validate_spanning_tree(inst.graph, inst.gold.value)
        elif inst.gold.kind is AnswerKind.NODE_SEQ:
            ok = oracles.validate_topo_order(inst.graph, inst.gold.value)
        else:
            ok = oracles.gold_answer(inst.task, inst.graph, inst.query) == inst.gold
        if not ok:
            raise DatasetFormatError(f"instance {inst.id}: stored gold fails verification")


def save_manifest(manifest: DatasetManifest, path: str | Path) -> None:
    Path(path).write_text(json.dumps(manifest.to_json_obj(), indent=2, sort_keys=True) + "\n", encoding="utf-8")


def load_manifest(path: str | Path) -> DatasetManifest:
    return DatasetManifest.from_json_obj(json.loads(Path(path).read_text(encoding="utf-8")))


def instances_by_id(instances: Iterable[TaskInstance]) -> dict[str, TaskInstance]:
    return {inst.id: inst for inst in instances}
