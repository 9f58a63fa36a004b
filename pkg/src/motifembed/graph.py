"""Undirected simple graphs: edge-list ingestion, edge hiding, negative sampling.

Vertices are dense integer ids 0..n-1. The mapping back to the ids found in
the input file lives in :class:`IngestReport`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Iterator

from .errors import DataError, EdgeListParseError
from .rng import SplitMix64, derive_seed


class Graph:
    """Immutable undirected simple graph with sorted adjacency lists."""

    __slots__ = ("n", "m", "adjacency", "_neighbor_sets")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        adj: list[set[int]] = [set() for _ in range(n)]
        m = 0
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) outside vertex range 0..{n - 1}")
            if v not in adj[u]:
                adj[u].add(v)
                adj[v].add(u)
                m += 1
        self.n = n
        self.m = m
        self.adjacency: list[tuple[int, ...]] = [tuple(sorted(s)) for s in adj]
        self._neighbor_sets: list[frozenset[int]] = [frozenset(s) for s in adj]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def neighbor_set(self, v: int) -> frozenset[int]:
        return self._neighbor_sets[v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._neighbor_sets[u]

    def edges(self) -> Iterator[tuple[int, int]]:
        """All edges as (u, v) with u < v, in sorted order."""
        for u in range(self.n):
            for v in self.adjacency[u]:
                if u < v:
                    yield (u, v)

    def without_edges(self, removed: Iterable[tuple[int, int]]) -> "Graph":
        """Copy of this graph with the given edges removed."""
        gone = {_norm(u, v) for u, v in removed}
        kept = [e for e in self.edges() if e not in gone]
        return Graph(self.n, kept)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.adjacency == other.adjacency

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def _norm(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass
class IngestReport:
    """What happened while reading an edge list."""

    original_ids: list[int]          # dense id -> original id
    id_map: dict[int, int]           # original id -> dense id
    duplicates: int = 0
    self_loops: int = 0
    comment_lines: int = 0

    def to_original(self, pair: tuple[int, int]) -> tuple[int, int]:
        return (self.original_ids[pair[0]], self.original_ids[pair[1]])

    def to_dense(self, pair: tuple[int, int]) -> tuple[int, int]:
        try:
            return (self.id_map[pair[0]], self.id_map[pair[1]])
        except KeyError as exc:
            raise DataError(f"unknown vertex id {exc.args[0]}") from exc


def parse_edge_list(source: str | bytes | IO) -> tuple[Graph, IngestReport]:
    """Parse edge-list text into a dense-id Graph plus an ingest report.

    One edge per line, two whitespace-separated integer ids; lines starting
    with '#' or '%' are comments. Duplicate edges collapse, self-loops are
    skipped and counted. Vertex ids are remapped densely by sorted original
    id, so a written graph reparses to an identical Graph.

    Raises :class:`EdgeListParseError` on a malformed token and
    :class:`DataError` when no usable edge remains.
    """
    if isinstance(source, bytes):
        lines = source.decode("utf-8").splitlines()
    elif isinstance(source, str):
        lines = source.splitlines()
    else:
        lines = source.read()
        if isinstance(lines, bytes):
            lines = lines.decode("utf-8")
        lines = lines.splitlines()

    kept: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    duplicates = 0
    self_loops = 0
    comment_lines = 0

    for lineno, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped[0] in "#%":
            comment_lines += 1
            continue
        tokens = stripped.split()
        if len(tokens) != 2:
            raise EdgeListParseError(
                f"expected two integer tokens, got {len(tokens)}", lineno
            )
        try:
            a, b = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise EdgeListParseError(f"non-integer token in {stripped!r}", lineno) from None
        if a == b:
            self_loops += 1
            continue
        key = _norm(a, b)
        if key in seen:
            duplicates += 1
            continue
        seen.add(key)
        kept.append(key)

    if not kept:
        raise DataError("edge list contains no usable edges")
    original_ids = sorted({v for edge in kept for v in edge})
    id_map = {orig: dense for dense, orig in enumerate(original_ids)}
    edges = [(id_map[a], id_map[b]) for a, b in kept]
    report = IngestReport(
        original_ids=original_ids,
        id_map=id_map,
        duplicates=duplicates,
        self_loops=self_loops,
        comment_lines=comment_lines,
    )
    return Graph(len(original_ids), edges), report


def read_edge_list(path: str | Path) -> tuple[Graph, IngestReport]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read edge list {path}: {exc}") from exc
    return parse_edge_list(text)


def format_edge_list(pairs: Iterable[tuple[int, int]]) -> str:
    return "".join(f"{u} {v}\n" for u, v in pairs)


def write_edge_list(g: Graph, path: str | Path) -> None:
    Path(path).write_text(format_edge_list(g.edges()), encoding="utf-8")


@dataclass
class EvalSplit:
    """Hidden positive edges, sampled negative non-edges, residual train graph."""

    train_graph: Graph
    positives: list[tuple[int, int]]
    negatives: list[tuple[int, int]] = field(default_factory=list)
    seed: int = 0
    hide_fraction: float = 0.0
    shortfall: int = 0


def hide_edges(g: Graph, hide_fraction: float, seed: int) -> EvalSplit:
    """Hide round(hide_fraction * m) edges while keeping every degree >= 1.

    Edges are visited in a seeded shuffle order and removed greedily when
    both endpoints retain at least one other edge. If the degree constraint
    makes the target unreachable the split carries a ``shortfall`` count
    instead of failing.
    """
    if not 0.0 <= hide_fraction < 1.0:
        raise ValueError("hide_fraction must be in [0, 1)")
    target = int(round(hide_fraction * g.m))
    edge_list = list(g.edges())
    rng = SplitMix64(derive_seed(seed, "hide-edges"))
    rng.shuffle(edge_list)

    degrees = [g.degree(v) for v in range(g.n)]
    hidden: list[tuple[int, int]] = []
    for u, v in edge_list:
        if len(hidden) == target:
            break
        if degrees[u] >= 2 and degrees[v] >= 2:
            hidden.append((u, v))
            degrees[u] -= 1
            degrees[v] -= 1

    return EvalSplit(
        train_graph=g.without_edges(hidden),
        positives=hidden,
        seed=seed,
        hide_fraction=hide_fraction,
        shortfall=target - len(hidden),
    )


def sample_negatives(original: Graph, count: int, seed: int) -> list[tuple[int, int]]:
    """Sample `count` distinct non-edges of the original graph.

    Rejection sampling with a deduplication set; deterministic per seed.
    Raises :class:`DataError` when `count` exceeds the non-edge population.
    """
    if count < 0:
        raise ValueError("count must be non-negative")
    population = original.n * (original.n - 1) // 2 - original.m
    if count > population:
        raise DataError(
            f"requested {count} negatives but only {population} non-edges exist"
        )
    rng = SplitMix64(derive_seed(seed, "sample-negatives"))
    chosen: list[tuple[int, int]] = []
    used: set[tuple[int, int]] = set()
    while len(chosen) < count:
        u = rng.randrange(original.n)
        v = rng.randrange(original.n)
        if u == v:
            continue
        pair = _norm(u, v)
        if pair in used or original.has_edge(*pair):
            continue
        used.add(pair)
        chosen.append(pair)
    return chosen


def make_split(g: Graph, hide_fraction: float, seed: int) -> EvalSplit:
    """Hide edges and sample an equal number of negatives from `g`."""
    split = hide_edges(g, hide_fraction, seed)
    split.negatives = sample_negatives(g, len(split.positives), seed)
    return split


def write_split(split: EvalSplit, report: IngestReport, out_dir: str | Path) -> None:
    """Write positives/negatives as edge-list files (original ids) plus a JSON sidecar."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    pos = [report.to_original(p) for p in split.positives]
    neg = [report.to_original(p) for p in split.negatives]
    (out / "positives.edgelist").write_text(format_edge_list(pos), encoding="utf-8")
    (out / "negatives.edgelist").write_text(format_edge_list(neg), encoding="utf-8")
    sidecar = {
        "seed": split.seed,
        "hide_fraction": split.hide_fraction,
        "shortfall": split.shortfall,
        "original_edge_count": split.train_graph.m + len(split.positives),
    }
    (out / "split.json").write_text(json.dumps(sidecar, indent=2) + "\n", encoding="utf-8")


def read_split(original: Graph, report: IngestReport, split_dir: str | Path) -> EvalSplit:
    """Reload a split written by :func:`write_split` against its original graph."""
    d = Path(split_dir)
    for name in ("positives.edgelist", "negatives.edgelist", "split.json"):
        if not (d / name).exists():
            raise DataError(f"missing split file {d / name}")

    def read_pairs(path: Path) -> list[tuple[int, int]]:
        pairs = []
        for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
            line = line.strip()
            if not line or line[0] in "#%":
                continue
            tokens = line.split()
            if len(tokens) != 2:
                raise EdgeListParseError("expected two integer tokens", lineno)
            pairs.append(report.to_dense((int(tokens[0]), int(tokens[1]))))
        return pairs

    positives = read_pairs(d / "positives.edgelist")
    negatives = read_pairs(d / "negatives.edgelist")
    meta = json.loads((d / "split.json").read_text(encoding="utf-8"))
    if meta.get("original_edge_count") != original.m:
        raise DataError(
            f"split was made from a graph with {meta.get('original_edge_count')} "
            f"edges, input graph has {original.m}"
        )
    for u, v in positives:
        if not original.has_edge(u, v):
            raise DataError(f"positive ({u}, {v}) is not an edge of the input graph")
    return EvalSplit(
        train_graph=original.without_edges(positives),
        positives=positives,
        negatives=negatives,
        seed=meta.get("seed", 0),
        hide_fraction=meta.get("hide_fraction", 0.0),
        shortfall=meta.get("shortfall", 0),
    )
