"""Seeded toy-network generators used as test fixtures and demo inputs."""

from __future__ import annotations

from .graph import Graph
from .rng import SplitMix64, derive_seed


def erdos_renyi(n: int, p: float, seed: int) -> Graph:
    """G(n, p): each of the C(n, 2) edges present independently with probability p."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("edge probability must be in [0, 1]")
    rng = SplitMix64(derive_seed(seed, "erdos-renyi"))
    edges = [
        (u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p
    ]
    return Graph(n, edges)


def stochastic_block_model(
    block_sizes: tuple[int, ...], p_in: float, p_out: float, seed: int
) -> Graph:
    """Planted-partition graph: intra-block edges with probability p_in,
    cross-block with p_out. Vertices are numbered block by block."""
    for p in (p_in, p_out):
        if not 0.0 <= p <= 1.0:
            raise ValueError("edge probabilities must be in [0, 1]")
    n = sum(block_sizes)
    block = []
    for b, size in enumerate(block_sizes):
        block.extend([b] * size)
    rng = SplitMix64(derive_seed(seed, "sbm"))
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            p = p_in if block[u] == block[v] else p_out
            if rng.random() < p:
                edges.append((u, v))
    return Graph(n, edges)
