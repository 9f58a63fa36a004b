"""Motif co-occurrence counts: the proximity structure fed to the embedder.

For a selected set of motif instances, ``w[i][j]`` counts the instances
containing both vertex i and vertex j (any pair inside a motif counts,
connected or not), and ``participation[i]`` counts the instances containing
vertex i at all. Row i is the input vector for vertex i.
"""

from __future__ import annotations

from itertools import combinations
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .motifs import MotifInstance


class CoOccurrence:
    """Sparse symmetric pair-count matrix plus per-vertex participation."""

    __slots__ = ("n", "rows", "participation", "_cum_participation")

    def __init__(self, n: int, rows: list[dict[int, int]], participation: np.ndarray):
        self.n = n
        self.rows = rows
        self.participation = participation
        self._cum_participation: np.ndarray | None = None

    @classmethod
    def build(cls, instances: Iterable[MotifInstance], n: int) -> "CoOccurrence":
        """Accumulate pair counts over every unordered pair inside each instance."""
        rows: list[dict[int, int]] = [{} for _ in range(n)]
        participation = np.zeros(n, dtype=np.int64)
        for inst in instances:
            vs = inst.vertices
            if vs[-1] >= n:
                raise ValueError(f"instance {vs} outside vertex range 0..{n - 1}")
            for v in vs:
                participation[v] += 1
            for a, b in combinations(vs, 2):
                rows[a][b] = rows[a].get(b, 0) + 1
                rows[b][a] = rows[b].get(a, 0) + 1
        return cls(n, rows, participation)

    def input_vector(self, i: int) -> dict[int, int]:
        """Row i as a sparse map j -> count; absent keys are zero, w[i][i] = 0."""
        return dict(self.rows[i])

    def weight(self, i: int, j: int) -> int:
        return self.rows[i].get(j, 0)

    def motif_isolated(self) -> list[int]:
        """Vertices contained in no selected instance (zero input vectors)."""
        return [int(v) for v in np.flatnonzero(self.participation == 0)]

    def cumulative_participation(self) -> np.ndarray:
        """Prefix sums of participation, cached; used for weighted draws."""
        if self._cum_participation is None:
            self._cum_participation = np.cumsum(self.participation, dtype=np.float64)
        return self._cum_participation

    def dense_rows(self, vertices: Sequence[int]) -> np.ndarray:
        """Raw-count rows for the given vertices as a dense (len, n) array."""
        out = np.zeros((len(vertices), self.n), dtype=np.float64)
        for k, v in enumerate(vertices):
            row = self.rows[v]
            if row:
                out[k, list(row.keys())] = list(row.values())
        return out

    def coordinate_text(self) -> str:
        """Upper-triangle dump, one "i j w" line per nonzero pair, sorted."""
        lines = []
        for i in range(self.n):
            for j in sorted(self.rows[i]):
                if i < j:
                    lines.append(f"{i} {j} {self.rows[i][j]}\n")
        return "".join(lines)

    def write_coordinate(self, path: str | Path) -> None:
        Path(path).write_text(self.coordinate_text(), encoding="utf-8")
