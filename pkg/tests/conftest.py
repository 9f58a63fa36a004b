"""Shared fixtures and independent test oracles.

The oracles here deliberately re-derive results from first principles
(subset scans, explicit isomorphism checks, straight-line formula
evaluation) so they never share code paths with the package.
"""

from collections import defaultdict
from itertools import combinations, permutations

import pytest

from motifembed import Graph

# Canonical shapes written out independently of the package table.
ORACLE_SHAPES = {
    3: {
        "M31": [(0, 1), (0, 2)],                       # wedge
        "M32": [(0, 1), (0, 2), (1, 2)],               # triangle
    },
    4: {
        "M41": [(0, 1), (1, 2), (2, 3)],               # path
        "M42": [(0, 1), (0, 2), (0, 3)],               # star
        "M43": [(0, 1), (1, 2), (2, 3), (0, 3)],       # cycle
        "M44": [(0, 1), (0, 2), (1, 2), (2, 3)],       # tailed triangle
        "M45": [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)],  # diamond
        "M46": list(combinations(range(4), 2)),        # clique
    },
}


def oracle_connected(k: int, edges: list[tuple[int, int]]) -> bool:
    adj = defaultdict(set)
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    seen = {0}
    stack = [0]
    while stack:
        for nxt in adj[stack.pop()]:
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return len(seen) == k


def oracle_classify(k: int, edges: list[tuple[int, int]]) -> str | None:
    """Isomorphism class by exhaustive permutation against the shape tables."""
    present = {tuple(sorted(e)) for e in edges}
    for code, canon in ORACLE_SHAPES[k].items():
        for perm in permutations(range(k)):
            mapped = {tuple(sorted((perm[a], perm[b]))) for a, b in canon}
            if mapped == present:
                return code
    return None


def oracle_instances(g: Graph, order: int) -> dict[tuple[int, ...], str]:
    """Brute force over all C(n, order) subsets: {vertices: type code}."""
    found = {}
    for vs in combinations(range(g.n), order):
        edges = [
            (a, b)
            for a, b in combinations(range(order), 2)
            if g.has_edge(vs[a], vs[b])
        ]
        if oracle_connected(order, edges):
            code = oracle_classify(order, edges)
            assert code is not None
            found[vs] = code
    return found


def oracle_auc(scored: list[tuple[float, bool]]) -> float:
    """Literal pairwise double sum: wins + half-ties over all (pos, neg) pairs."""
    pos = [s for s, is_pos in scored if is_pos]
    neg = [s for s, is_pos in scored if not is_pos]
    total = 0.0
    for p in pos:
        for q in neg:
            if p > q:
                total += 1.0
            elif p == q:
                total += 0.5
    return total / (len(pos) * len(neg))


def tiny_training_problem(seed: int):
    """Small random model + batch for gradient checking.

    Sizes stay within n <= 8, d <= 3, K <= 2; the hinge margin is large so
    the max() stays strictly active (smooth) at the initial parameters.
    """
    import motifembed as me
    from motifembed.rng import SplitMix64

    rng = SplitMix64(seed)
    n = 5 + rng.randrange(4)            # 5..8
    d = 1 + rng.randrange(3)            # 1..3
    layers = (n, d) if rng.randrange(2) == 0 else (n, max(d + 1, 3), d)

    batch, co = None, None
    for attempt in range(200):
        g = me.erdos_renyi(n, 0.55, seed=seed * 211 + attempt)
        triples = me.instances_of_type(g, me.DEFAULT_CATALOG.by_code["M31"])
        quads = me.instances_of_type(g, me.DEFAULT_CATALOG.by_code["M41"])
        if not triples or not quads:
            continue
        instances = triples[:2] + quads[:1]
        co = me.CoOccurrence.build(
            list(me.enumerate_instances(g, 3)) + list(me.enumerate_instances(g, 4)),
            g.n,
        )
        candidate = []
        for inst in instances:
            neg = next(
                (
                    v
                    for v in range(n)
                    if v not in inst.vertices and co.participation[v] > 0
                ),
                None,
            )
            if neg is not None:
                candidate.append((inst, neg))
        if len(candidate) == len(instances):
            batch = candidate
            break
    assert batch is not None, f"no usable tiny problem for seed {seed}"
    cfg = me.TrainConfig(
        embed_dim=d,
        hidden_dims=layers[1:-1],
        alpha=1.5,
        beta=2.5,
        gamma=0.01,
        margin=5.0,
        seed=seed,
    )
    params = me.init_params(layers, seed=seed + 1)
    return params, batch, co, cfg


def fd_max_rel_error(params, batch, co, cfg, step=1e-5) -> float:
    """Max relative error between analytic and central-difference gradients."""
    import numpy as np

    from motifembed import batch_gradients, batch_loss

    _, grads = batch_gradients(params, batch, co, cfg)
    worst = 0.0
    for plist, glist in (
        (params.enc_w, grads.enc_w),
        (params.enc_b, grads.enc_b),
        (params.dec_w, grads.dec_w),
        (params.dec_b, grads.dec_b),
    ):
        for arr, garr in zip(plist, glist):
            it = np.nditer(arr, flags=["multi_index"])
            for _ in it:
                ix = it.multi_index
                orig = arr[ix]
                arr[ix] = orig + step
                up = batch_loss(params, batch, co, cfg).total
                arr[ix] = orig - step
                down = batch_loss(params, batch, co, cfg).total
                arr[ix] = orig
                fd = (up - down) / (2 * step)
                denom = max(abs(fd), abs(garr[ix]), 1e-6)
                worst = max(worst, abs(fd - garr[ix]) / denom)
    return worst


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def star_graph(leaves: int) -> Graph:
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def complete_graph(n: int) -> Graph:
    return Graph(n, list(combinations(range(n), 2)))


@pytest.fixture
def k3():
    return complete_graph(3)


@pytest.fixture
def k4():
    return complete_graph(4)


@pytest.fixture
def path4():
    return path_graph(4)
