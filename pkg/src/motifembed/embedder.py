"""Shared-weight autoencoder over motif co-occurrence rows.

One tanh autoencoder is replicated (with shared parameters) across all
vertices of a motif plus one sampled negative vertex. The joint loss is

    total = second_order + alpha * first_order + gamma * regularization

where second_order is the penalty-weighted reconstruction error of the
motif members' input rows, first_order is a hinge that pulls intra-motif
embeddings together and pushes the negative away, and regularization is
the squared Frobenius norm of all weight matrices (biases excluded).

Raw co-occurrence counts are unbounded while the decoder output lives in
(-1, 1), so inputs pass through an elementwise squash t -> t / (1 + t)
(or binarization) before entering the autoencoder.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import DataError, TrainingDiverged
from .motifs import MotifInstance
from .proximity import CoOccurrence
from .rng import SplitMix64, derive_seed

ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPS = 1e-8

INPUT_TRANSFORMS = ("squash", "binary")


@dataclass(frozen=True)
class TrainConfig:
    """Hyperparameters; defaults follow the reference experimental setup."""

    embed_dim: int = 128
    hidden_dims: tuple[int, ...] = ()  # extra encoder layers between input and embedding
    alpha: float = 20.0       # weight of the first-order (hinge) loss
    beta: float = 30.0        # reconstruction penalty on non-zero input entries
    gamma: float = 1e-4       # weight regularization coefficient
    margin: float = 30.0      # hinge slack
    batch_size: int = 500
    learning_rate: float = 1e-3
    iterations: int = 200
    seed: int = 0
    input_transform: str = "squash"

    def validate(self) -> None:
        if self.embed_dim < 1:
            raise ValueError("embed_dim must be >= 1")
        if any(h < 1 for h in self.hidden_dims):
            raise ValueError("hidden layer sizes must be >= 1")
        if self.alpha < 0 or self.gamma < 0 or self.margin < 0:
            raise ValueError("alpha, gamma and margin must be non-negative")
        if self.beta < 1:
            raise ValueError("beta must be >= 1")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.iterations < 0:
            raise ValueError("iterations must be non-negative")
        if self.input_transform not in INPUT_TRANSFORMS:
            raise ValueError(f"input_transform must be one of {INPUT_TRANSFORMS}")

    def layer_dims(self, n: int) -> tuple[int, ...]:
        return (n, *self.hidden_dims, self.embed_dim)


@dataclass
class LossBreakdown:
    second_order: float
    first_order: float
    regularization: float
    total: float


@dataclass
class ModelParams:
    """Encoder/decoder weight stacks; decoder dims mirror the encoder."""

    layer_dims: tuple[int, ...]
    enc_w: list[np.ndarray]
    enc_b: list[np.ndarray]
    dec_w: list[np.ndarray]
    dec_b: list[np.ndarray]

    @property
    def n(self) -> int:
        return self.layer_dims[0]

    @property
    def dim(self) -> int:
        return self.layer_dims[-1]

    def copy(self) -> "ModelParams":
        return ModelParams(
            self.layer_dims,
            [w.copy() for w in self.enc_w],
            [b.copy() for b in self.enc_b],
            [w.copy() for w in self.dec_w],
            [b.copy() for b in self.dec_b],
        )

    def weight_matrices(self) -> list[np.ndarray]:
        return self.enc_w + self.dec_w


def _layer_shapes(layer_dims: Sequence[int]) -> list[tuple[int, int]]:
    if len(layer_dims) < 2:
        raise ValueError("need at least an input and an output layer")
    if any(d < 1 for d in layer_dims):
        raise ValueError(f"zero-sized layer in {tuple(layer_dims)}")
    return [(layer_dims[k + 1], layer_dims[k]) for k in range(len(layer_dims) - 1)]


def init_params(layer_dims: Sequence[int], seed: int) -> ModelParams:
    """Uniform symmetric weights scaled by 1/sqrt(fan_in + fan_out); zero biases."""
    dims = tuple(layer_dims)
    rng = SplitMix64(seed)

    def draw(shapes: list[tuple[int, int]]) -> tuple[list[np.ndarray], list[np.ndarray]]:
        ws, bs = [], []
        for out_dim, in_dim in shapes:
            limit = 1.0 / math.sqrt(in_dim + out_dim)
            u = rng.floats(out_dim * in_dim).reshape(out_dim, in_dim)
            ws.append((2.0 * u - 1.0) * limit)
            bs.append(np.zeros(out_dim))
        return ws, bs

    enc_w, enc_b = draw(_layer_shapes(dims))
    dec_w, dec_b = draw(_layer_shapes(tuple(reversed(dims))))
    return ModelParams(dims, enc_w, enc_b, dec_w, dec_b)


def zero_params(layer_dims: Sequence[int]) -> ModelParams:
    """All-zero parameters; every forward pass yields zero vectors (test hook)."""
    dims = tuple(layer_dims)
    enc = _layer_shapes(dims)
    dec = _layer_shapes(tuple(reversed(dims)))
    return ModelParams(
        dims,
        [np.zeros(s) for s in enc],
        [np.zeros(s[0]) for s in enc],
        [np.zeros(s) for s in dec],
        [np.zeros(s[0]) for s in dec],
    )


def transform_inputs(raw: np.ndarray, mode: str) -> np.ndarray:
    """Map raw co-occurrence counts into the decoder's (-1, 1) output range."""
    if mode == "squash":
        return raw / (1.0 + raw)
    if mode == "binary":
        return (raw > 0).astype(np.float64)
    raise ValueError(f"unknown input transform {mode!r}")


def _check_vector(x: np.ndarray, length: int, what: str) -> np.ndarray:
    arr = np.asarray(x, dtype=np.float64)
    if arr.shape != (length,):
        raise ValueError(f"{what} must have length {length}, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{what} contains non-finite entries")
    return arr


def encode(params: ModelParams, x: np.ndarray) -> np.ndarray:
    """Forward through the encoder stack; output entries lie in (-1, 1)."""
    h = _check_vector(x, params.n, "input vector")
    for w, b in zip(params.enc_w, params.enc_b):
        h = np.tanh(w @ h + b)
    return h


def decode(params: ModelParams, y: np.ndarray) -> np.ndarray:
    """Forward through the mirrored decoder stack."""
    h = _check_vector(y, params.dim, "embedding vector")
    for w, b in zip(params.dec_w, params.dec_b):
        h = np.tanh(w @ h + b)
    return h


def balance_factor(order: int) -> float:
    """Hinge balance between pair terms and negative terms: 1 for 3-vertex
    motifs (3 pairs vs 3 negative distances), 3/2 for 4-vertex (6 vs 4)."""
    if order == 3:
        return 1.0
    if order == 4:
        return 1.5
    raise ValueError(f"unsupported motif order {order}")


def hinge_loss(y_members: np.ndarray, y_negative: np.ndarray, margin: float) -> float:
    """max(margin + sum of intra-motif squared distances
           - mu * sum of member-to-negative squared distances, 0)."""
    ym = np.asarray(y_members, dtype=np.float64)
    yl = np.asarray(y_negative, dtype=np.float64)
    mu = balance_factor(ym.shape[0])
    pair_sum = sum(
        float(np.sum((ym[a] - ym[b]) ** 2)) for a, b in combinations(range(ym.shape[0]), 2)
    )
    neg_sum = float(np.sum((ym - yl) ** 2))
    return max(margin + pair_sum - mu * neg_sum, 0.0)


Batch = Sequence[tuple[MotifInstance, int]]


def _batch_layout(batch: Batch):
    """Deduplicate batch vertices; returns (vertex ids, membership multiplicity,
    per-order entry index arrays)."""
    if not batch:
        raise ValueError("batch must be non-empty")
    index: dict[int, int] = {}
    verts: list[int] = []

    def at(v: int) -> int:
        j = index.get(v)
        if j is None:
            j = len(verts)
            index[v] = j
            verts.append(v)
        return j

    mult: list[int] = []
    grouped: dict[int, tuple[list[list[int]], list[int]]] = {}
    for inst, neg in batch:
        vs = inst.vertices
        if neg in vs:
            raise ValueError(f"negative vertex {neg} lies inside motif {vs}")
        rows = []
        for v in vs:
            j = at(v)
            while len(mult) <= j:
                mult.append(0)
            mult[j] += 1
            rows.append(j)
        jn = at(neg)
        while len(mult) <= jn:
            mult.append(0)
        members, negs = grouped.setdefault(len(vs), ([], []))
        members.append(rows)
        negs.append(jn)

    arrays = {
        order: (np.asarray(m, dtype=np.intp), np.asarray(l, dtype=np.intp))
        for order, (m, l) in grouped.items()
    }
    return verts, np.asarray(mult, dtype=np.float64), arrays


def _forward_stack(params: ModelParams, x: np.ndarray):
    enc = [x]
    h = x
    for w, b in zip(params.enc_w, params.enc_b):
        h = np.tanh(h @ w.T + b)
        enc.append(h)
    dec = [h]
    for w, b in zip(params.dec_w, params.dec_b):
        h = np.tanh(h @ w.T + b)
        dec.append(h)
    return enc, dec


def _finite_or_raise(name: str, value: float) -> float:
    if not math.isfinite(value):
        raise FloatingPointError(f"loss term {name} is not finite")
    return value


@dataclass
class Gradients:
    enc_w: list[np.ndarray]
    enc_b: list[np.ndarray]
    dec_w: list[np.ndarray]
    dec_b: list[np.ndarray]


def _batch_eval(
    params: ModelParams,
    batch: Batch,
    inputs: CoOccurrence,
    cfg: TrainConfig,
    want_grads: bool,
) -> tuple[LossBreakdown, Gradients | None]:
    verts, mult, grouped = _batch_layout(batch)
    raw = inputs.dense_rows(verts)
    x = transform_inputs(raw, cfg.input_transform)
    z = np.where(raw > 0, cfg.beta, 1.0)
    enc, dec = _forward_stack(params, x)
    y = enc[-1]
    recon = dec[-1]

    weighted = (x - recon) * z
    l_2nd = _finite_or_raise(
        "second_order", float(mult @ np.einsum("ij,ij->i", weighted, weighted))
    )

    l_1st = 0.0
    d_y_hinge = np.zeros_like(y) if want_grads else None
    for order, (m_idx, l_idx) in grouped.items():
        mu = balance_factor(order)
        ym = y[m_idx]                      # (entries, order, dim)
        yl = y[l_idx]                      # (entries, dim)
        pair_terms = np.zeros(len(m_idx))
        pairs = list(combinations(range(order), 2))
        for a, b in pairs:
            diff = ym[:, a] - ym[:, b]
            pair_terms += np.einsum("ed,ed->e", diff, diff)
        to_neg = ym - yl[:, None, :]
        neg_terms = np.einsum("eod,eod->e", to_neg, to_neg)
        slack = cfg.margin + pair_terms - mu * neg_terms
        active = slack > 0
        l_1st += float(slack[active].sum())
        if want_grads and active.any():
            w_act = active.astype(np.float64)[:, None]
            for a, b in pairs:
                g = 2.0 * (ym[:, a] - ym[:, b]) * w_act
                np.add.at(d_y_hinge, m_idx[:, a], g)
                np.add.at(d_y_hinge, m_idx[:, b], -g)
            g_neg = 2.0 * to_neg * w_act[:, :, None]
            for a in range(order):
                np.add.at(d_y_hinge, m_idx[:, a], -mu * g_neg[:, a])
            np.add.at(d_y_hinge, l_idx, mu * g_neg.sum(axis=1))
    l_1st = _finite_or_raise("first_order", l_1st)

    l_reg = _finite_or_raise(
        "regularization", float(sum(np.sum(w * w) for w in params.weight_matrices()))
    )
    total = _finite_or_raise(
        "total", l_2nd + cfg.alpha * l_1st + cfg.gamma * l_reg
    )
    loss = LossBreakdown(l_2nd, l_1st, l_reg, total)
    if not want_grads:
        return loss, None

    # Backward pass. Reconstruction error flows through the decoder into y,
    # where the hinge gradient joins; both flow through the encoder.
    grad = Gradients(
        enc_w=[np.zeros_like(w) for w in params.enc_w],
        enc_b=[np.zeros_like(b) for b in params.enc_b],
        dec_w=[np.zeros_like(w) for w in params.dec_w],
        dec_b=[np.zeros_like(b) for b in params.dec_b],
    )
    upstream = 2.0 * mult[:, None] * (recon - x) * z * z
    for k in reversed(range(len(params.dec_w))):
        delta = upstream * (1.0 - dec[k + 1] ** 2)
        grad.dec_w[k] = delta.T @ dec[k]
        grad.dec_b[k] = delta.sum(axis=0)
        upstream = delta @ params.dec_w[k]

    upstream = upstream + cfg.alpha * d_y_hinge
    for k in reversed(range(len(params.enc_w))):
        delta = upstream * (1.0 - enc[k + 1] ** 2)
        grad.enc_w[k] = delta.T @ enc[k]
        grad.enc_b[k] = delta.sum(axis=0)
        upstream = delta @ params.enc_w[k]

    for gw, w in zip(grad.enc_w, params.enc_w):
        gw += 2.0 * cfg.gamma * w
    for gw, w in zip(grad.dec_w, params.dec_w):
        gw += 2.0 * cfg.gamma * w
    return loss, grad


def batch_loss(
    params: ModelParams, batch: Batch, inputs: CoOccurrence, cfg: TrainConfig
) -> LossBreakdown:
    """Joint loss of one batch of (motif instance, negative vertex) pairs."""
    loss, _ = _batch_eval(params, batch, inputs, cfg, want_grads=False)
    return loss


def batch_gradients(
    params: ModelParams, batch: Batch, inputs: CoOccurrence, cfg: TrainConfig
) -> tuple[LossBreakdown, Gradients]:
    """Loss plus exact analytic gradients of the batch total w.r.t. every parameter."""
    loss, grad = _batch_eval(params, batch, inputs, cfg, want_grads=True)
    assert grad is not None
    return loss, grad


def sample_negative_vertex(
    inputs: CoOccurrence, motif: MotifInstance, rng: SplitMix64
) -> int:
    """Draw a vertex outside the motif with probability proportional to its
    motif participation count; rejection on motif members."""
    cum = inputs.cumulative_participation()
    total = float(cum[-1]) if len(cum) else 0.0
    members = set(motif.vertices)
    outside = total - float(sum(inputs.participation[v] for v in members))
    if outside <= 0:
        raise ValueError("no vertex outside the motif participates in any instance")
    while True:
        v = int(np.searchsorted(cum, rng.random() * total, side="right"))
        if v not in members:
            return v


@dataclass
class Embeddings:
    """Per-vertex embedding vectors, row i for vertex i; entries in (-1, 1)."""

    vectors: np.ndarray

    @property
    def n(self) -> int:
        return self.vectors.shape[0]

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]


def all_embeddings(
    params: ModelParams, inputs: CoOccurrence, input_transform: str = "squash"
) -> Embeddings:
    """Encode every vertex's input row, in chunks to bound memory."""
    out = np.empty((inputs.n, params.dim))
    for start in range(0, inputs.n, 512):
        stop = min(start + 512, inputs.n)
        x = transform_inputs(inputs.dense_rows(range(start, stop)), input_transform)
        h = x
        for w, b in zip(params.enc_w, params.enc_b):
            h = np.tanh(h @ w.T + b)
        out[start:stop] = h
    return Embeddings(vectors=out)


@dataclass
class AdamState:
    """First/second moment estimates with bias correction."""

    m: list[np.ndarray]
    v: list[np.ndarray]
    step_count: int = 0

    @classmethod
    def for_params(cls, params: ModelParams) -> "AdamState":
        arrays = params.enc_w + params.enc_b + params.dec_w + params.dec_b
        return cls(
            m=[np.zeros_like(a) for a in arrays],
            v=[np.zeros_like(a) for a in arrays],
        )

    def apply(self, params: ModelParams, grads: Gradients, learning_rate: float) -> None:
        self.step_count += 1
        t = self.step_count
        targets = params.enc_w + params.enc_b + params.dec_w + params.dec_b
        gradients = grads.enc_w + grads.enc_b + grads.dec_w + grads.dec_b
        for p, g, m, v in zip(targets, gradients, self.m, self.v):
            m *= ADAM_BETA1
            m += (1.0 - ADAM_BETA1) * g
            v *= ADAM_BETA2
            v += (1.0 - ADAM_BETA2) * g * g
            m_hat = m / (1.0 - ADAM_BETA1**t)
            v_hat = v / (1.0 - ADAM_BETA2**t)
            p -= learning_rate * m_hat / (np.sqrt(v_hat) + ADAM_EPS)


@dataclass
class TrainResult:
    embeddings: Embeddings
    history: list[LossBreakdown]
    params: ModelParams


def train(
    instances: Sequence[MotifInstance],
    inputs: CoOccurrence,
    cfg: TrainConfig,
    initial_params: ModelParams | None = None,
) -> TrainResult:
    """Run the training loop: per iteration draw a batch of motifs, one
    negative per motif, and apply one Adam update.

    Batches are drawn without replacement within a batch when the batch fits
    into the instance list, with replacement otherwise; draws are repeated
    independently across iterations. Deterministic for a fixed
    (instances, inputs, cfg, initial_params).
    """
    cfg.validate()
    if not instances:
        raise ValueError("cannot train without motif instances")
    if initial_params is not None:
        if initial_params.layer_dims != cfg.layer_dims(inputs.n):
            raise ValueError("initial parameters do not match the configured layer dims")
        params = initial_params.copy()
    else:
        params = init_params(cfg.layer_dims(inputs.n), derive_seed(cfg.seed, "init"))
    rng = SplitMix64(derive_seed(cfg.seed, "train"))
    adam = AdamState.for_params(params)
    history: list[LossBreakdown] = []
    population = len(instances)

    for iteration in range(1, cfg.iterations + 1):
        if cfg.batch_size <= population:
            chosen = rng.sample_indices(population, cfg.batch_size)
        else:
            chosen = [rng.randrange(population) for _ in range(cfg.batch_size)]
        batch = []
        for i in chosen:
            inst = instances[i]
            batch.append((inst, sample_negative_vertex(inputs, inst, rng)))
        try:
            loss, grads = batch_gradients(params, batch, inputs, cfg)
        except FloatingPointError as exc:
            raise TrainingDiverged(iteration, str(exc)) from exc
        history.append(loss)
        adam.apply(params, grads, cfg.learning_rate)

    embeddings = all_embeddings(params, inputs, cfg.input_transform)
    return TrainResult(embeddings=embeddings, history=history, params=params)


def save_embeddings(
    embeddings: Embeddings, original_ids: Sequence[int], path: str | Path
) -> None:
    """Write "n d" header then one "<original id> <d floats>" line per vertex."""
    if len(original_ids) != embeddings.n:
        raise ValueError("id list length does not match embedding count")
    lines = [f"{embeddings.n} {embeddings.dim}\n"]
    for oid, row in zip(original_ids, embeddings.vectors):
        lines.append(f"{oid} " + " ".join(repr(float(v)) for v in row) + "\n")
    Path(path).write_text("".join(lines), encoding="utf-8")


def load_embeddings(path: str | Path) -> tuple[list[int], np.ndarray]:
    """Read a file written by :func:`save_embeddings`; returns (ids, vectors)."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read embeddings {path}: {exc}") from exc
    lines = text.splitlines()
    if not lines:
        raise DataError(f"embedding file {path} is empty")
    try:
        n, dim = map(int, lines[0].split())
    except ValueError:
        raise DataError(f"embedding file {path} has a malformed header") from None
    if len(lines) - 1 != n:
        raise DataError(f"embedding file {path} promises {n} rows, has {len(lines) - 1}")
    ids: list[int] = []
    vectors = np.empty((n, dim))
    for r, line in enumerate(lines[1:]):
        tokens = line.split()
        if len(tokens) != dim + 1:
            raise DataError(f"embedding row {r} has {len(tokens) - 1} values, expected {dim}")
        ids.append(int(tokens[0]))
        vectors[r] = [float(t) for t in tokens[1:]]
    return ids, vectors


def save_loss_history(history: Iterable[LossBreakdown], path: str | Path) -> None:
    """CSV with header iteration,l_2nd,l_1st,l_reg,total."""
    lines = ["iteration,l_2nd,l_1st,l_reg,total\n"]
    for i, loss in enumerate(history, start=1):
        lines.append(
            f"{i},{loss.second_order!r},{loss.first_order!r},"
            f"{loss.regularization!r},{loss.total!r}\n"
        )
    Path(path).write_text("".join(lines), encoding="utf-8")
