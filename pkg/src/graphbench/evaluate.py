"""Answer extraction from model text, scoring, and report tables."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from enum import Enum
from typing import Iterable, Mapping, Optional, Sequence

from .dataset import TaskInstance
from .graphs import ALL_BUCKETS
from .oracles import (
    Answer,
    AnswerKind,
    TASK_ANSWER_KINDS,
    validate_spanning_tree,
    validate_topo_order,
)
from .prompts import Strategy
from .tasks import ALL_TASKS, DISPLAY_NAMES, Task, default_label_base


class ExtractionFailed(ValueError):
    """No well-formed answer of the expected kind could be located."""


_WINDOW = 512
_SENTINEL = re.compile(r"answer\s*:", re.IGNORECASE)

# Comma-grouped form first so "1,275" is taken whole, not as 1 and 275.
_INT = re.compile(r"-?\d{1,3}(?:,\d{3})+|-?\d+")
_PAIR = re.compile(r"\(\s*(\d+)\s*,\s*(\d+)\s*\)")
_BRACKET = re.compile(r"[\[{]([^\[\]{}]*)[\]}]", re.DOTALL)
_ARROW_CHAIN = re.compile(r"\d+(?:\s*(?:->|=>|→|⇒)\s*\d+)+")
_COMMA_CHAIN = re.compile(r"\d+(?:\s*,\s*\d+)+")
_PAIR_GAP = re.compile(r"[\s,;]*(?:and\s+)?\Z", re.IGNORECASE)

# Boolean vocabulary. Matches are resolved by taking the one that ends last,
# breaking ties toward the longer match, so "does not contain a cycle" beats
# the "contain a cycle" embedded inside it.
_BOOL_GENERIC = [
    (re.compile(r"\byes\b", re.IGNORECASE), True),
    (re.compile(r"\btrue\b", re.IGNORECASE), True),
    (re.compile(r"\bno\b", re.IGNORECASE), False),
    (re.compile(r"\bfalse\b", re.IGNORECASE), False),
]
_BOOL_TASK = {
    Task.CYCLE_CHECK: [
        (re.compile(r"(?:contains?|has|have)\s+(?:a|at\s+least\s+one)\s+cycle", re.IGNORECASE), True),
        (re.compile(r"there\s+is\s+a\s+cycle", re.IGNORECASE), True),
        (re.compile(r"cycle\s+exists", re.IGNORECASE), True),
        (re.compile(r"n[o']t\s+contain\s+a\s+cycle", re.IGNORECASE), False),
        (re.compile(r"no\s+cycles?\b", re.IGNORECASE), False),
        (re.compile(r"contains?\s+no\s+cycles?", re.IGNORECASE), False),
        (re.compile(r"\bacyclic\b", re.IGNORECASE), False),
        (re.compile(r"cycle[-\s]free", re.IGNORECASE), False),
        (re.compile(r"without\s+(?:any\s+)?cycles?", re.IGNORECASE), False),
    ],
    Task.BIPARTITE_CHECK: [
        (re.compile(r"(?:is|are)\s+(?:indeed\s+)?bipartite", re.IGNORECASE), True),
        (re.compile(r"(?:not|n't|cannot\s+be|can't\s+be)\s+bipartite", re.IGNORECASE), False),
    ],
}


def _tail_after_sentinel(text: str) -> Optional[str]:
    last = None
    for m in _SENTINEL.finditer(text):
        last = m
    return text[last.end():] if last is not None else None


def _parse_int(token: str) -> int:
    return int(token.replace(",", ""))


def _block_ints(content: str) -> Optional[list[int]]:
    """Integers inside a bracket block, or None if any token is not one."""
    stripped = content.strip()
    if not stripped:
        return []
    values = []
    for token in re.split(r"[,\s]+", stripped):
        if not re.fullmatch(r"-?\d+", token):
            return None
        values.append(int(token))
    return values


def _extract_int(text: str) -> int:
    tail = _tail_after_sentinel(text)
    if tail is not None:
        m = _INT.search(tail)
        if m:
            return _parse_int(m.group())
    for region in (text[-_WINDOW:], text):
        matches = list(_INT.finditer(region))
        if matches:
            return _parse_int(matches[-1].group())
    raise ExtractionFailed("no integer found")


def _resolve_bool(region: str, patterns) -> Optional[bool]:
    best: Optional[tuple[int, int, bool]] = None
    for pattern, value in patterns:
        for m in pattern.finditer(region):
            key = (m.end(), m.end() - m.start())
            if best is None or key > best[:2]:
                best = (key[0], key[1], value)
    return None if best is None else best[2]


def _extract_bool(text: str, task: Task) -> bool:
    patterns = _BOOL_GENERIC + _BOOL_TASK.get(task, [])
    tail = _tail_after_sentinel(text)
    regions = [text[-_WINDOW:], text] if tail is None else [tail, text[-_WINDOW:], text]
    for region in regions:
        value = _resolve_bool(region, patterns)
        if value is not None:
            return value
    raise ExtractionFailed("no yes/no verdict found")


def _extract_node_set(text: str) -> frozenset[int]:
    tail = _tail_after_sentinel(text)
    if tail is not None:
        for m in _BRACKET.finditer(tail):
            values = _block_ints(m.group(1))
            if values is not None:
                return frozenset(values)
    for region in (text[-_WINDOW:], text):
        found = None
        for m in _BRACKET.finditer(region):
            values = _block_ints(m.group(1))
            if values is not None:
                found = values
        if found is not None:
            return frozenset(found)
    raise ExtractionFailed("no bracketed node list found")


def _pair_runs(region: str) -> list[list[tuple[int, int]]]:
    """Maximal runs of adjacent (u, v) tokens separated only by filler."""
    runs: list[list[tuple[int, int]]] = []
    prev_end = None
    for m in _PAIR.finditer(region):
        pair = (int(m.group(1)), int(m.group(2)))
        gap_ok = prev_end is not None and _PAIR_GAP.fullmatch(region[prev_end:m.start()])
        if runs and gap_ok:
            runs[-1].append(pair)
        else:
            runs.append([pair])
        prev_end = m.end()
    return runs


def _edge_block(content: str) -> Optional[list[tuple[int, int]]]:
    pairs = [(int(a), int(b)) for a, b in _PAIR.findall(content)]
    if pairs:
        return pairs
    if not content.strip():
        return []
    return None


def _extract_edge_set(text: str) -> frozenset[tuple[int, int]]:
    tail = _tail_after_sentinel(text)
    if tail is not None:
        for m in _BRACKET.finditer(tail):
            pairs = _edge_block(m.group(1))
            if pairs is not None:
                return frozenset(pairs)
        runs = _pair_runs(tail)
        if runs:
            return frozenset(runs[0])
    for region in (text[-_WINDOW:], text):
        found = None
        for m in _BRACKET.finditer(region):
            pairs = _edge_block(m.group(1))
            if pairs:
                found = pairs
        if found is not None:
            return frozenset(found)
        runs = _pair_runs(region)
        if runs:
            return frozenset(runs[-1])
    raise ExtractionFailed("no edge list found")


def _extract_node_seq(text: str) -> tuple[int, ...]:
    def block_candidates(region: str) -> list[tuple[int, tuple[int, ...]]]:
        out = []
        for m in _BRACKET.finditer(region):
            values = _block_ints(m.group(1))
            if values:
                out.append((m.start(), tuple(values)))
        return out

    def arrow_candidates(region: str) -> list[tuple[int, tuple[int, ...]]]:
        return [
            (m.start(), tuple(int(t) for t in re.findall(r"\d+", m.group())))
            for m in _ARROW_CHAIN.finditer(region)
        ]

    tail = _tail_after_sentinel(text)
    if tail is not None:
        candidates = block_candidates(tail) + arrow_candidates(tail)
        candidates += [
            (m.start(), tuple(int(t) for t in m.group().split(",")))
            for m in _COMMA_CHAIN.finditer(tail)
        ]
        if candidates:
            return min(candidates)[1]
    for region in (text[-_WINDOW:], text):
        candidates = block_candidates(region) + arrow_candidates(region)
        if candidates:
            return max(candidates)[1]
    raise ExtractionFailed("no node ordering found")


def extract_answer(task: Task, text: str) -> Answer:
    """Pull the task's answer out of free-form response text.

    Precedence: the region after the last "Answer:" sentinel, then the
    trailing 512 characters, then the whole text. Node labels are returned
    exactly as written; any base shift happens at scoring time.
    """
    if not isinstance(text, str) or not text.strip():
        raise ExtractionFailed("empty response")
    kind = TASK_ANSWER_KINDS[task]
    if kind is AnswerKind.INT:
        return Answer.integer(_extract_int(text))
    if kind is AnswerKind.BOOL:
        return Answer.boolean(_extract_bool(text, task))
    if kind is AnswerKind.NODE_SET:
        return Answer.node_set(_extract_node_set(text))
    if kind is AnswerKind.EDGE_SET:
        return Answer.edge_set(_extract_edge_set(text))
    if kind is AnswerKind.NODE_SEQ:
        return Answer.node_seq(_extract_node_seq(text))
    raise ExtractionFailed(f"unsupported answer kind {kind}")


def _shift_answer(answer: Answer, delta: int) -> Answer:
    """Map surface labels back to internal 0-based labels."""
    if delta == 0 or answer.kind in (AnswerKind.INT, AnswerKind.BOOL):
        return answer
    if answer.kind is AnswerKind.NODE_SET:
        return Answer.node_set(v - delta for v in answer.value)
    if answer.kind is AnswerKind.NODE_SEQ:
        return Answer.node_seq(v - delta for v in answer.value)
    return Answer.edge_set((u - delta, v - delta) for u, v in answer.value)


def score_instance(
    inst: TaskInstance,
    answer: Answer,
    label_base: Optional[int] = None,
) -> bool:
    """Decide whether an extracted answer is correct for this instance.

    Spanning trees and topological orders are validated structurally, so any
    correct answer is accepted, not just the oracle's canonical one.
    """
    if label_base is None:
        label_base = default_label_base(inst.task)
    expected_kind = TASK_ANSWER_KINDS[inst.task]
    if answer.kind is not expected_kind:
        raise ValueError(f"answer kind {answer.kind} does not match task {inst.task}")
    shifted = _shift_answer(answer, label_base)
    if expected_kind is AnswerKind.EDGE_SET:
        return validate_spanning_tree(inst.graph, set(shifted.value))
    if expected_kind is AnswerKind.NODE_SEQ:
        return validate_topo_order(inst.graph, tuple(shifted.value))
    return shifted == inst.gold


class FailureKind(str, Enum):
    NONE = "none"
    WRONG_ANSWER = "wrong_answer"
    EXTRACTION_FAILED = "extraction_failed"
    BACKEND_ERROR = "backend_error"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class EvalRecord:
    """Outcome of one (instance, strategy) evaluation."""

    instance_id: str
    task: Task
    bucket: str
    strategy: str
    correct: bool
    failure: FailureKind
    extracted: Optional[str] = None
    detail: str = ""

    def __post_init__(self):
        if self.correct and self.failure is not FailureKind.NONE:
            raise ValueError("a correct record cannot carry a failure kind")

    def to_json_obj(self) -> dict:
        return {
            "instance_id": self.instance_id,
            "task": self.task.value,
            "bucket": self.bucket,
            "strategy": self.strategy,
            "correct": self.correct,
            "failure": self.failure.value,
            "extracted": self.extracted,
            "detail": self.detail,
        }

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "EvalRecord":
        return cls(
            instance_id=obj["instance_id"],
            task=Task(obj["task"]),
            bucket=obj["bucket"],
            strategy=obj["strategy"],
            correct=bool(obj["correct"]),
            failure=FailureKind(obj["failure"]),
            extracted=obj.get("extracted"),
            detail=obj.get("detail", ""),
        )


def evaluate_response(
    inst: TaskInstance,
    strategy: Strategy,
    text: Optional[str],
    label_base: Optional[int] = None,
    backend_error: str = "",
) -> EvalRecord:
    """Turn raw response text (or a backend failure) into a record."""
    base = dict(
        instance_id=inst.id,
        task=inst.task,
        bucket=inst.bucket.name,
        strategy=strategy.display_name,
    )
    if text is None:
        return EvalRecord(correct=False, failure=FailureKind.BACKEND_ERROR,
                          detail=backend_error, **base)
    try:
        answer = extract_answer(inst.task, text)
    except ExtractionFailed as exc:
        return EvalRecord(correct=False, failure=FailureKind.EXTRACTION_FAILED,
                          detail=str(exc), **base)
    correct = score_instance(inst, answer, label_base)
    return EvalRecord(
        correct=correct,
        failure=FailureKind.NONE if correct else FailureKind.WRONG_ANSWER,
        extracted=json.dumps(
            answer.value if answer.kind in (AnswerKind.INT, AnswerKind.BOOL)
            else sorted(answer.value)
            if answer.kind in (AnswerKind.NODE_SET, AnswerKind.EDGE_SET)
            else list(answer.value)
        ),
        **base,
    )


@dataclass
class Report:
    """Accuracy broken down by task, size bucket, and prompting strategy."""

    tasks: list[Task]
    buckets: list[str]
    strategies: list[str]
    cells: dict[tuple[str, str, str], tuple[int, int]]
    failures: dict[str, int] = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    def accuracy(self, task: Task, bucket: str, strategy: str) -> Optional[float]:
        correct, total = self.cells.get((task.value, bucket, strategy), (0, 0))
        return None if total == 0 else correct / total


def aggregate_report(
    records: Iterable[EvalRecord],
    metadata: Optional[Mapping] = None,
) -> Report:
    """Group records into per-cell counts, rejecting duplicates."""
    seen: set[tuple[str, str]] = set()
    cells: dict[tuple[str, str, str], list[int]] = {}
    failures: dict[str, int] = {kind.value: 0 for kind in FailureKind}
    tasks: list[Task] = []
    buckets: list[str] = []
    strategies: list[str] = []
    for rec in records:
        key = (rec.instance_id, rec.strategy)
        if key in seen:
            raise ValueError(f"duplicate record for {key}")
        seen.add(key)
        cell = cells.setdefault((rec.task.value, rec.bucket, rec.strategy), [0, 0])
        cell[0] += int(rec.correct)
        cell[1] += 1
        failures[rec.failure.value] += 1
        if rec.task not in tasks:
            tasks.append(rec.task)
        if rec.bucket not in buckets:
            buckets.append(rec.bucket)
        if rec.strategy not in strategies:
            strategies.append(rec.strategy)
    tasks.sort(key=lambda t: [x.value for x in ALL_TASKS].index(t.value))
    bucket_order = [b.name for b in ALL_BUCKETS]
    buckets.sort(key=lambda b: bucket_order.index(b) if b in bucket_order else len(bucket_order))
    return Report(
        tasks=tasks,
        buckets=buckets,
        strategies=strategies,
        cells={k: (v[0], v[1]) for k, v in cells.items()},
        failures=failures,
        metadata=dict(metadata or {}),
    )


def format_percent(fraction: float) -> str:
    """Integer percent with exact half-up rounding (0.905 -> \"91\")."""
    value = Decimal(str(fraction)) * 100
    return str(value.quantize(Decimal("1"), rounding=ROUND_HALF_UP))


_EMPTY_CELL = "—"


def _cell_text(report: Report, task: Task, bucket: str, strategy: str) -> str:
    acc = report.accuracy(task, bucket, strategy)
    return _EMPTY_CELL if acc is None else format_percent(acc)


def _best_rows(report: Report, task: Task) -> set[tuple[str, str]]:
    """Row keys achieving the best accuracy in this task's column."""
    best: Optional[float] = None
    rows: set[tuple[str, str]] = set()
    for strategy in report.strategies:
        for bucket in report.buckets:
            acc = report.accuracy(task, bucket, strategy)
            if acc is None:
                continue
            if best is None or acc > best:
                best = acc
                rows = {(strategy, bucket)}
            elif acc == best:
                rows.add((strategy, bucket))
    return rows


def render_markdown(report: Report, flag_best: bool = True) -> str:
    """Accuracy table with one row per (strategy, bucket) pair.

    The best cell in each task column is bolded; ties are all bolded.
    """
    headers = ["strategy", "bucket"] + [DISPLAY_NAMES[t] for t in report.tasks]
    lines = ["| " + " | ".join(headers) + " |",
             "| " + " | ".join("---" for _ in headers) + " |"]
    best = {t: _best_rows(report, t) if flag_best else set() for t in report.tasks}
    for strategy in report.strategies:
        for bucket in report.buckets:
            row = [strategy, bucket]
            for task in report.tasks:
                text = _cell_text(report, task, bucket, strategy)
                if text != _EMPTY_CELL and (strategy, bucket) in best[task]:
                    text = f"**{text}**"
                row.append(text)
            lines.append("| " + " | ".join(row) + " |")
    return "\n".join(lines) + "\n"


def render_csv(report: Report) -> str:
    """Long-form CSV: one row per populated cell, numbers only."""
    lines = ["strategy,bucket,task,correct,total,accuracy_pct"]
    for strategy in report.strategies:
        for bucket in report.buckets:
            for task in report.tasks:
                correct, total = report.cells.get((task.value, bucket, strategy), (0, 0))
                if total == 0:
                    continue
                pct = format_percent(correct / total)
                lines.append(f"{strategy},{bucket},{task.value},{correct},{total},{pct}")
    return "\n".join(lines) + "\n"


def emit_report(report: Report, fmt: str = "markdown", flag_best: bool = True) -> str:
    if fmt in ("markdown", "md"):
        return render_markdown(report, flag_best=flag_best)
    if fmt == "csv":
        return render_csv(report)
    raise ValueError(f"unknown report format {fmt!r}")


def save_records(records: Sequence[EvalRecord], path) -> None:
    from pathlib import Path

    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    with p.open("w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec.to_json_obj(), sort_keys=True) + "\n")


def load_records(path) -> list[EvalRecord]:
    from pathlib import Path

    out = []
    with Path(path).open("r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                out.append(EvalRecord.from_json_obj(json.loads(line)))
    return out
