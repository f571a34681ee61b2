"""Deterministic graph-reasoning benchmark generator and evaluation harness.

The pipeline: seeded random graphs -> exact gold answers -> rendered prompts
under six strategies -> model responses (HTTP or offline mocks) -> extracted
answers -> accuracy tables split by task, graph size, and strategy.
"""

from .client import (
    Backend,
    CacheMissError,
    ClientError,
    HttpChatBackend,
    MalformedResponseError,
    MockAdversaryBackend,
    MockOracleBackend,
    ModelConfig,
    RateLimitedError,
    ReplayBackend,
    RequestTimeout,
    ResponseCache,
    Transcript,
    cache_key,
    complete,
    make_backend,
    run_prompts,
)
from .dataset import (
    DatasetFormatError,
    DatasetManifest,
    GRAPHS_PER_CELL,
    TaskInstance,
    assemble_dataset,
    build_instances,
    content_digest,
    instances_by_id,
    load_dataset,
    load_manifest,
    save_dataset,
    save_manifest,
    verify_gold_answers,
)
from .evaluate import (
    EvalRecord,
    ExtractionFailed,
    FailureKind,
    Report,
    aggregate_report,
    emit_report,
    evaluate_response,
    extract_answer,
    format_percent,
    load_records,
    render_csv,
    render_markdown,
    save_records,
    score_instance,
)
from .graphs import (
    ALL_BUCKETS,
    BUCKETS,
    GeneratorConfig,
    Graph,
    LARGE,
    MEDIUM,
    SMALL,
    SizeBucket,
    derive_instance_seed,
    derive_seed,
    gen_er,
    gen_er_dag,
    gen_random_bipartite,
)
from .oracles import (
    Answer,
    AnswerKind,
    CycleDetectedError,
    OracleError,
    TASK_ANSWER_KINDS,
    UnknownNodeError,
    UnreachableError,
    connected_components,
    degree,
    edge_count,
    gold_answer,
    has_cycle,
    is_bipartite,
    neighbors,
    node_count,
    shortest_path_length,
    spanning_forest,
    topo_order,
    validate_spanning_tree,
    validate_topo_order,
)
from .prompts import (
    BAG_SENTENCE,
    DEFAULT_EXEMPLAR_SEED,
    PromptBundle,
    PseudocodeStyle,
    Strategy,
    StrategyKind,
    ZERO_COT_SENTENCE,
    build_exemplars,
    encode_edge_list,
    format_answer,
    parse_strategy,
    pseudocode_assets,
    pseudocode_for,
    render_prompt,
    standard_strategies,
)
from .tasks import (
    ALL_TASKS,
    GRAPH_LEVEL_TASKS,
    NODE_LEVEL_TASKS,
    PAIR_LEVEL_TASKS,
    QUERIES_PER_GRAPH,
    Task,
    default_label_base,
    query_arity,
)

__version__ = "0.1.0"
