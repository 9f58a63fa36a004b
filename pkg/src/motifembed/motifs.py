"""Connected 3- and 4-vertex subgraph enumeration, classification, and census.

Enumeration is exact (every connected induced subgraph of the requested
order appears exactly once) and deterministic: roots ascend, extension
candidates are processed in sorted order. Classification is a precomputed
lookup from the induced edge bit-mask to one of the eight connected
isomorphism classes, built once by permuting each canonical shape.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Iterator, Mapping, NamedTuple

import numpy as np

from .graph import Graph
from .rng import SplitMix64, derive_seed

# Bit index of each vertex pair (a, b), a < b, in canonical labeling.
PAIR_BITS: dict[int, dict[tuple[int, int], int]] = {
    order: {pair: i for i, pair in enumerate(combinations(range(order), 2))}
    for order in (3, 4)
}

# The eight connected shapes on 3 and 4 vertices, by structure.
SHAPE_EDGES: dict[str, tuple[tuple[int, int], ...]] = {
    "wedge": ((0, 1), (0, 2)),
    "triangle": ((0, 1), (0, 2), (1, 2)),
    "path4": ((0, 1), (1, 2), (2, 3)),
    "star4": ((0, 1), (0, 2), (0, 3)),
    "cycle4": ((0, 1), (1, 2), (2, 3), (0, 3)),
    "tailed_triangle": ((0, 1), (0, 2), (1, 2), (2, 3)),
    "diamond": ((0, 1), (0, 2), (1, 2), (1, 3), (2, 3)),
    "clique4": ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)),
}

SHAPE_ORDER: dict[str, int] = {
    name: max(max(e) for e in edges) + 1 for name, edges in SHAPE_EDGES.items()
}

# Default code assignment; override via MotifCatalog for a different numbering.
DEFAULT_CODE_SHAPES: dict[str, str] = {
    "M31": "wedge",
    "M32": "triangle",
    "M41": "path4",
    "M42": "star4",
    "M43": "cycle4",
    "M44": "tailed_triangle",
    "M45": "diamond",
    "M46": "clique4",
}

MOTIF_CODES: tuple[str, ...] = tuple(DEFAULT_CODE_SHAPES)


class MotifType(NamedTuple):
    code: str
    order: int
    edge_mask: int  # canonical edge set as bits over PAIR_BITS[order]


class MotifInstance(NamedTuple):
    vertices: tuple[int, ...]  # strictly increasing
    mtype: MotifType


def _shape_mask(name: str) -> int:
    order = SHAPE_ORDER[name]
    mask = 0
    for a, b in SHAPE_EDGES[name]:
        mask |= 1 << PAIR_BITS[order][(a, b)]
    return mask


def _permuted_masks(order: int, mask: int) -> set[int]:
    """All relabelings of an edge mask under vertex permutations."""
    out = set()
    bits = PAIR_BITS[order]
    pairs = [p for p, i in bits.items() if mask >> i & 1]
    for perm in permutations(range(order)):
        m = 0
        for a, b in pairs:
            na, nb = perm[a], perm[b]
            m |= 1 << bits[(na, nb) if na < nb else (nb, na)]
        out.add(m)
    return out


class MotifCatalog:
    """Assignment of type codes to shapes plus the mask classification table."""

    def __init__(self, code_shapes: Mapping[str, str] | None = None):
        assigned = dict(DEFAULT_CODE_SHAPES)
        if code_shapes:
            for code, shape in code_shapes.items():
                if code not in DEFAULT_CODE_SHAPES:
                    raise ValueError(f"unknown motif code {code!r}")
                if shape not in SHAPE_EDGES:
                    raise ValueError(f"unknown motif shape {shape!r}")
                assigned[code] = shape
        if sorted(assigned.values()) != sorted(SHAPE_EDGES):
            raise ValueError("motif code assignment must cover each shape exactly once")
        for code, shape in assigned.items():
            if SHAPE_ORDER[shape] != int(code[1]):
                raise ValueError(f"{code} requires a {code[1]}-vertex shape, got {shape!r}")

        self.types: tuple[MotifType, ...] = tuple(
            MotifType(code, SHAPE_ORDER[assigned[code]], _shape_mask(assigned[code]))
            for code in MOTIF_CODES
        )
        self.by_code: dict[str, MotifType] = {t.code: t for t in self.types}
        self.index: dict[str, int] = {t.code: i for i, t in enumerate(self.types)}
        self._mask_table: dict[tuple[int, int], MotifType] = {}
        for t in self.types:
            for m in _permuted_masks(t.order, t.edge_mask):
                self._mask_table[(t.order, m)] = t

    def classify_mask(self, order: int, mask: int) -> MotifType | None:
        """Type of the given induced edge mask, or None when disconnected."""
        return self._mask_table.get((order, mask))


DEFAULT_CATALOG = MotifCatalog()


def induced_mask(g: Graph, vertices: tuple[int, ...]) -> int:
    """Edge bit-mask induced by a sorted vertex tuple."""
    bits = PAIR_BITS[len(vertices)]
    mask = 0
    for (a, b), i in bits.items():
        if g.has_edge(vertices[a], vertices[b]):
            mask |= 1 << i
    return mask


def classify(
    g: Graph, vertices: tuple[int, ...], catalog: MotifCatalog = DEFAULT_CATALOG
) -> MotifType | None:
    """Classify the induced subgraph on 3 or 4 vertices; None when disconnected."""
    vs = tuple(sorted(vertices))
    if len(vs) not in (3, 4):
        raise ValueError("classification needs 3 or 4 vertices")
    if len(set(vs)) != len(vs):
        raise ValueError(f"duplicate vertex ids in {vertices}")
    if vs[-1] >= g.n or vs[0] < 0:
        raise ValueError(f"vertex ids {vertices} outside 0..{g.n - 1}")
    return catalog.classify_mask(len(vs), induced_mask(g, vs))


def _connected_subsets(g: Graph, order: int) -> Iterator[tuple[int, ...]]:
    """ESU: every connected induced `order`-subset exactly once, sorted tuples."""

    def extend(root: int, sub: list[int], ext: list[int], claimed: frozenset[int]):
        if len(sub) + 1 == order:
            for w in ext:
                yield tuple(sorted(sub + [w]))
            return
        for i, w in enumerate(ext):
            fresh = [u for u in g.adjacency[w] if u > root and u not in claimed]
            yield from extend(
                root,
                sub + [w],
                sorted(ext[i + 1 :] + fresh),
                claimed | frozenset(fresh),
            )

    for root in range(g.n):
        ext = [u for u in g.adjacency[root] if u > root]
        yield from extend(root, [root], ext, frozenset(ext) | {root})


def enumerate_instances(
    g: Graph, order: int, catalog: MotifCatalog = DEFAULT_CATALOG
) -> Iterator[MotifInstance]:
    """Stream every connected induced subgraph of the given order, classified."""
    if order not in (3, 4):
        raise ValueError("motif order must be 3 or 4")
    for vs in _connected_subsets(g, order):
        mtype = catalog.classify_mask(order, induced_mask(g, vs))
        assert mtype is not None  # ESU only emits connected subsets
        yield MotifInstance(vs, mtype)


def instances_of_type(
    g: Graph, mtype: MotifType, catalog: MotifCatalog = DEFAULT_CATALOG
) -> list[MotifInstance]:
    return [i for i in enumerate_instances(g, mtype.order, catalog) if i.mtype == mtype]


@dataclass
class Census:
    """Per-type totals and per-vertex participation counts."""

    per_type_count: dict[str, int]
    participation: np.ndarray  # shape (n, number of types), int64
    catalog: MotifCatalog

    def avg_participation(self, code: str) -> float:
        n = self.participation.shape[0]
        if n == 0:
            return 0.0
        return float(self.participation[:, self.catalog.index[code]].sum()) / n

    def rows(self) -> list[tuple[str, int, float]]:
        """CSV rows: (motif_type, total_count, avg_participation)."""
        return [
            (code, self.per_type_count[code], self.avg_participation(code))
            for code in MOTIF_CODES
        ]


def census(g: Graph, catalog: MotifCatalog = DEFAULT_CATALOG) -> Census:
    """Count all 3- and 4-vertex motif instances and per-vertex participation."""
    counts = {t.code: 0 for t in catalog.types}
    participation = np.zeros((g.n, len(catalog.types)), dtype=np.int64)
    for order in (3, 4):
        for inst in enumerate_instances(g, order, catalog):
            counts[inst.mtype.code] += 1
            col = catalog.index[inst.mtype.code]
            for v in inst.vertices:
                participation[v, col] += 1
    return Census(per_type_count=counts, participation=participation, catalog=catalog)


def sample_instances(
    g: Graph,
    mtype: MotifType,
    k: int,
    seed: int,
    catalog: MotifCatalog = DEFAULT_CATALOG,
) -> list[MotifInstance]:
    """Uniform sample of k instances of one type, without replacement.

    Reservoir sampling over the enumeration stream; returns every instance
    when fewer than k exist. Output is sorted by vertex tuple.
    """
    if k < 0:
        raise ValueError("sample size must be non-negative")
    rng = SplitMix64(derive_seed(seed, "motif-reservoir"))
    reservoir: list[MotifInstance] = []
    seen = 0
    for inst in enumerate_instances(g, mtype.order, catalog):
        if inst.mtype != mtype:
            continue
        seen += 1
        if len(reservoir) < k:
            reservoir.append(inst)
        else:
            j = rng.randrange(seen)
            if j < k:
                reservoir[j] = inst
    return sorted(reservoir)


def format_instance(inst: MotifInstance) -> str:
    """One-line dump form: "Mxy v1 v2 v3 [v4]"."""
    return " ".join([inst.mtype.code, *map(str, inst.vertices)])
