"""Link-prediction scoring and metrics: cosine/baseline scorers, ranked
lists with seeded tie-breaking, AUC / PrecisionK / Avg. Rank, and the
weak-tie (few common neighbors) analysis."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .graph import EvalSplit, Graph
from .rng import SplitMix64, derive_seed

BASELINE_METHODS = ("cn", "jc", "aa")

Pair = tuple[int, int]


def cosine_score(y_i: np.ndarray, y_j: np.ndarray) -> float:
    """Cosine similarity; all-zero vectors score 0 by convention."""
    a = np.asarray(y_i, dtype=np.float64)
    b = np.asarray(y_j, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"vector length mismatch: {a.shape} vs {b.shape}")
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(np.dot(a, b) / (na * nb))


def common_neighbor_count(g: Graph, pair: Pair) -> int:
    u, v = pair
    return len(g.neighbor_set(u) & g.neighbor_set(v))


def baseline_score(g: Graph, pair: Pair, method: str) -> float:
    """Classical similarity on the train graph: common neighbors (cn),
    Jaccard's coefficient (jc), or Adamic-Adar (aa)."""
    u, v = pair
    shared = g.neighbor_set(u) & g.neighbor_set(v)
    if method == "cn":
        return float(len(shared))
    if method == "jc":
        union = len(g.neighbor_set(u) | g.neighbor_set(v))
        return len(shared) / union if union else 0.0
    if method == "aa":
        # every shared neighbor t touches both u and v, so deg(t) >= 2
        return float(sum(1.0 / math.log(g.degree(t)) for t in shared))
    raise ValueError(f"unknown baseline method {method!r}")


class EmbeddingScorer:
    """Scores pairs by embedding cosine; counts zero-vector fallbacks."""

    def __init__(self, vectors: np.ndarray, name: str = "model"):
        self.vectors = np.asarray(vectors, dtype=np.float64)
        self.name = name
        self.zero_score_pairs = 0
        self._norms = np.linalg.norm(self.vectors, axis=1)

    def score(self, pair: Pair) -> float:
        u, v = pair
        if self._norms[u] == 0.0 or self._norms[v] == 0.0:
            self.zero_score_pairs += 1
            return 0.0
        return float(
            np.dot(self.vectors[u], self.vectors[v]) / (self._norms[u] * self._norms[v])
        )


class BaselineScorer:
    """Scores pairs by a classical similarity over the train graph."""

    def __init__(self, train_graph: Graph, method: str):
        if method not in BASELINE_METHODS:
            raise ValueError(f"unknown baseline method {method!r}")
        self.graph = train_graph
        self.method = method
        self.name = method
        self.zero_score_pairs = 0

    def score(self, pair: Pair) -> float:
        return baseline_score(self.graph, pair, self.method)


Scorer = EmbeddingScorer | BaselineScorer


@dataclass
class ScoredExample:
    pair: Pair
    score: float
    positive: bool


@dataclass
class RankedList:
    """Examples sorted by score descending; rank of examples[i] is i + 1.

    Exact score ties sit in seeded-shuffle order, so PrecisionK and
    Avg. Rank are reproducible per seed; AUC is computed from scores and
    is tie-insensitive.
    """

    examples: list[ScoredExample]

    def __len__(self) -> int:
        return len(self.examples)

    def positive_ranks(self) -> list[int]:
        return [i + 1 for i, ex in enumerate(self.examples) if ex.positive]


def rank_examples(scored: Sequence[ScoredExample], seed: int) -> RankedList:
    """Sort by score descending with seeded random tie order."""
    for ex in scored:
        if not math.isfinite(ex.score):
            raise ValueError(f"non-finite score for pair {ex.pair}")
    shuffled = list(scored)
    SplitMix64(derive_seed(seed, "rank-ties")).shuffle(shuffled)
    shuffled.sort(key=lambda ex: ex.score, reverse=True)  # stable: ties keep shuffle order
    return RankedList(examples=shuffled)


def auc(ranked: RankedList) -> float:
    """Probability a positive outscores a negative, ties counted as 1/2.

    Computed from scores with the rank-sum identity (midranks), which
    equals the pairwise double sum exactly.
    """
    scores = np.array([ex.score for ex in ranked.examples])
    labels = np.array([ex.positive for ex in ranked.examples])
    n_pos = int(labels.sum())
    n_neg = len(labels) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("AUC needs at least one positive and one negative example")
    order = np.argsort(scores, kind="stable")  # ascending
    sorted_scores = scores[order]
    midranks = np.empty(len(scores))
    i = 0
    while i < len(scores):
        j = i
        while j + 1 < len(scores) and sorted_scores[j + 1] == sorted_scores[i]:
            j += 1
        midranks[i : j + 1] = (i + 1 + j + 1) / 2.0  # average of 1-based positions
        i = j + 1
    rank_sum = float(midranks[labels[order]].sum())
    return (rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


def precision_at_k(ranked: RankedList, k: int) -> float:
    """Fraction of positives among the k best-ranked examples."""
    if not 1 <= k <= len(ranked):
        raise ValueError(f"k must be in 1..{len(ranked)}, got {k}")
    hits = sum(1 for ex in ranked.examples[:k] if ex.positive)
    return hits / k


def avg_rank(ranked: RankedList) -> float:
    """Mean rank of the positive examples (1 is best)."""
    ranks = ranked.positive_ranks()
    if not ranks:
        raise ValueError("no positive examples in the ranked list")
    return sum(ranks) / len(ranks)


def weak_tie_filter(split: EvalSplit, threshold: int = 3) -> list[tuple[Pair, int]]:
    """Hidden positives whose endpoints share fewer than `threshold` common
    neighbors in the train graph, with their common-neighbor counts."""
    out = []
    for pair in split.positives:
        cn = common_neighbor_count(split.train_graph, pair)
        if cn < threshold:
            out.append((pair, cn))
    return out


@dataclass
class MetricsReport:
    method: str
    auc: float
    precision_at: dict[int, float]
    avg_rank: float
    seed: int
    weak_tie_avg_rank: dict[int, float] | None = None
    zero_score_pairs: int = 0

    def to_json_dict(self) -> dict:
        doc = {
            "method": self.method,
            "auc": self.auc,
            "precision": {str(k): v for k, v in sorted(self.precision_at.items())},
            "avg_rank": self.avg_rank,
            "weak_tie": (
                {str(s): v for s, v in sorted(self.weak_tie_avg_rank.items())}
                if self.weak_tie_avg_rank is not None
                else None
            ),
            "seed": self.seed,
            "zero_score_pairs": self.zero_score_pairs,
        }
        return doc


def score_pairs(scorer: Scorer, pairs: Sequence[Pair], positive: bool) -> list[ScoredExample]:
    return [ScoredExample(pair=p, score=scorer.score(p), positive=positive) for p in pairs]


def evaluate(
    scorer: Scorer,
    split: EvalSplit,
    ks: Sequence[int],
    seed: int,
    weak_tie_threshold: int | None = None,
) -> MetricsReport:
    """Score all of the split's positives and negatives and compute metrics.

    When `weak_tie_threshold` is set, positives below the threshold are
    additionally ranked (per common-neighbor stratum) against ALL negatives
    and their Avg. Rank is reported per stratum.
    """
    if not split.positives or not split.negatives:
        raise ValueError("evaluation needs both positives and negatives in the split")
    if isinstance(scorer, EmbeddingScorer):
        scorer.zero_score_pairs = 0
    scored = score_pairs(scorer, split.positives, True) + score_pairs(
        scorer, split.negatives, False
    )
    ranked = rank_examples(scored, seed)
    report = MetricsReport(
        method=scorer.name,
        auc=auc(ranked),
        precision_at={k: precision_at_k(ranked, k) for k in ks},
        avg_rank=avg_rank(ranked),
        seed=seed,
        zero_score_pairs=getattr(scorer, "zero_score_pairs", 0),
    )
    if weak_tie_threshold is not None:
        strata: dict[int, list[Pair]] = {}
        for pair, cn in weak_tie_filter(split, weak_tie_threshold):
            strata.setdefault(cn, []).append(pair)
        neg_scored = score_pairs(scorer, split.negatives, False)
        per_stratum: dict[int, float] = {}
        for cn in sorted(strata):
            subset = score_pairs(scorer, strata[cn], True) + neg_scored
            per_stratum[cn] = avg_rank(rank_examples(subset, seed))
        report.weak_tie_avg_rank = per_stratum
    return report


def write_reports_json(reports: Sequence[MetricsReport], path: str | Path) -> None:
    doc = {r.method: r.to_json_dict() for r in reports}
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def write_reports_csv(reports: Sequence[MetricsReport], path: str | Path) -> None:
    """One row per method: method,auc,avg_rank,precision@K columns."""
    ks = sorted({k for r in reports for k in r.precision_at})
    header = "method,auc,avg_rank" + "".join(f",precision@{k}" for k in ks) + "\n"
    lines = [header]
    for r in reports:
        cells = [r.method, repr(r.auc), repr(r.avg_rank)]
        cells += [repr(r.precision_at[k]) if k in r.precision_at else "" for k in ks]
        lines.append(",".join(cells) + "\n")
    Path(path).write_text("".join(lines), encoding="utf-8")
