import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import FIXTURES
from graphbench import ALL_TASKS, AnswerKind, ExtractionFailed, Task, extract_answer
from graphbench.oracles import TASK_ANSWER_KINDS


def load_corpus():
    rows = []
    with (FIXTURES / "extraction_corpus.jsonl").open("r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                rows.append(json.loads(line))
    return rows


CORPUS = load_corpus()


def expected_value(kind, value):
    if kind == "node_set":
        return frozenset(value)
    if kind == "node_seq":
        return tuple(value)
    if kind == "edge_set":
        return frozenset((u, v) for u, v in value)
    return value


def test_corpus_is_large_enough():
    assert len(CORPUS) >= 50
    # every answer kind is exercised, including failures
    kinds = {row["expect"]["kind"] for row in CORPUS if row["expect"]}
    assert kinds == {k.value for k in AnswerKind}
    assert sum(1 for row in CORPUS if row["expect"] is None) >= 5


@pytest.mark.parametrize(
    "row", CORPUS, ids=[f"{r['task']}-{i:02d}" for i, r in enumerate(CORPUS)]
)
def test_corpus_row(row):
    task = Task(row["task"])
    if row["expect"] is None:
        with pytest.raises(ExtractionFailed):
            extract_answer(task, row["text"])
        return
    answer = extract_answer(task, row["text"])
    assert answer.kind.value == row["expect"]["kind"]
    assert answer.value == expected_value(row["expect"]["kind"], row["expect"]["value"])


def test_empty_and_whitespace_fail():
    for text in ("", "   ", "\n\n"):
        with pytest.raises(ExtractionFailed):
            extract_answer(Task.NODE_COUNT, text)


def test_answer_kind_matches_task():
    for row in CORPUS:
        if row["expect"] is None:
            continue
        task = Task(row["task"])
        assert TASK_ANSWER_KINDS[task].value == row["expect"]["kind"]


# --- fuzzing: anything in, Answer or ExtractionFailed out -----------------------------


@settings(max_examples=300, deadline=None)
@given(st.text(max_size=600), st.sampled_from(list(ALL_TASKS)))
def test_fuzz_never_crashes(text, task):
    try:
        answer = extract_answer(task, text)
    except ExtractionFailed:
        return
    assert answer.kind is TASK_ANSWER_KINDS[task]


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=-10**6, max_value=10**6), st.text(max_size=200))
def test_sentinel_int_always_wins(value, noise):
    text = f"{noise}\nAnswer: {value}"
    answer = extract_answer(Task.EDGE_COUNT, text)
    assert answer.value == value


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(min_value=0, max_value=99), min_size=1, max_size=8))
def test_sentinel_bracketed_list_always_wins(nodes):
    text = "Some reasoning first.\nAnswer: [" + ", ".join(map(str, nodes)) + "]"
    assert extract_answer(Task.NEIGHBORS, text).value == frozenset(nodes)
    assert extract_answer(Task.TOPOLOGICAL_SORT, text).value == tuple(nodes)
