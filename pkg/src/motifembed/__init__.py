"""Motif-based node embeddings for link prediction.

Pipeline: parse an edge list, optionally hide a fraction of edges for
evaluation, enumerate connected 3-/4-vertex subgraphs of a chosen type,
build the motif co-occurrence matrix, train a shared-weight autoencoder
with motif-participation negative sampling, and score candidate edges by
embedding cosine against classical baselines.
"""

from .embedder import (
    Embeddings,
    LossBreakdown,
    ModelParams,
    TrainConfig,
    TrainResult,
    all_embeddings,
    batch_gradients,
    batch_loss,
    decode,
    encode,
    hinge_loss,
    init_params,
    sample_negative_vertex,
    train,
    zero_params,
)
from .errors import DataError, EdgeListParseError, MotifEmbedError, TrainingDiverged
from .evaluation import (
    BaselineScorer,
    EmbeddingScorer,
    MetricsReport,
    RankedList,
    ScoredExample,
    auc,
    avg_rank,
    baseline_score,
    cosine_score,
    evaluate,
    precision_at_k,
    rank_examples,
    weak_tie_filter,
)
from .generators import erdos_renyi, stochastic_block_model
from .graph import (
    EvalSplit,
    Graph,
    IngestReport,
    hide_edges,
    make_split,
    parse_edge_list,
    read_edge_list,
    sample_negatives,
)
from .motifs import (
    DEFAULT_CATALOG,
    MOTIF_CODES,
    Census,
    MotifCatalog,
    MotifInstance,
    MotifType,
    census,
    classify,
    enumerate_instances,
    instances_of_type,
    sample_instances,
)
from .proximity import CoOccurrence

__version__ = "0.1.0"

__all__ = [
    "BaselineScorer",
    "Census",
    "CoOccurrence",
    "DataError",
    "DEFAULT_CATALOG",
    "EdgeListParseError",
    "Embeddings",
    "EmbeddingScorer",
    "EvalSplit",
    "Graph",
    "IngestReport",
    "LossBreakdown",
    "MetricsReport",
    "ModelParams",
    "MotifCatalog",
    "MotifEmbedError",
    "MotifInstance",
    "MotifType",
    "MOTIF_CODES",
    "RankedList",
    "ScoredExample",
    "TrainConfig",
    "TrainResult",
    "TrainingDiverged",
    "all_embeddings",
    "auc",
    "avg_rank",
    "baseline_score",
    "batch_gradients",
    "batch_loss",
    "census",
    "classify",
    "cosine_score",
    "decode",
    "encode",
    "enumerate_instances",
    "erdos_renyi",
    "evaluate",
    "hide_edges",
    "hinge_loss",
    "init_params",
    "instances_of_type",
    "make_split",
    "parse_edge_list",
    "precision_at_k",
    "rank_examples",
    "read_edge_list",
    "sample_instances",
    "sample_negative_vertex",
    "sample_negatives",
    "stochastic_block_model",
    "train",
    "weak_tie_filter",
    "zero_params",
]
