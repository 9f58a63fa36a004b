"""Command-line pipeline driver.

Subcommands: census, train, evaluate, sweep. Options resolve in order
defaults < config file (--config, flat key=value lines) < explicit flags,
and every command that writes into an output directory echoes its fully
resolved configuration there so the run can be reproduced byte-for-byte.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical divergence.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from dataclasses import dataclass
from pathlib import Path

from .embedder import (
    TrainConfig,
    load_embeddings,
    save_embeddings,
    save_loss_history,
    train,
)
from .errors import DataError, MotifEmbedError, TrainingDiverged
from .evaluation import (
    BaselineScorer,
    EmbeddingScorer,
    MetricsReport,
    evaluate,
    write_reports_csv,
    write_reports_json,
)
from .graph import (
    Graph,
    IngestReport,
    make_split,
    read_edge_list,
    read_split,
    write_split,
)
from .motifs import (
    MOTIF_CODES,
    MotifCatalog,
    census,
    enumerate_instances,
    format_instance,
    instances_of_type,
    sample_instances,
)
from .proximity import CoOccurrence


@dataclass
class RunConfig:
    """Resolved options for one command invocation."""

    input: str = ""
    out_dir: str = ""
    seed: int = 0
    motif_type: str = "M31"
    hide_fraction: float = 0.0
    dim: int = 128
    hidden_dims: str = ""
    alpha: float = 20.0
    beta: float = 30.0
    gamma: float = 1e-4
    margin: float = 30.0           # config key / flag name: lambda
    batch_size: int = 500
    learning_rate: float = 1e-3
    iters: int = 200
    ks: str = "10"
    baselines: str = "cn,jc,aa"
    weak_ties: bool = False
    max_motifs: int = 0
    input_transform: str = "squash"
    dump_instances: bool = False
    types: str = ",".join(MOTIF_CODES)
    motif_shapes: str = ""

    def train_config(self) -> TrainConfig:
        return TrainConfig(
            embed_dim=self.dim,
            hidden_dims=_parse_int_list(self.hidden_dims, "hidden_dims"),
            alpha=self.alpha,
            beta=self.beta,
            gamma=self.gamma,
            margin=self.margin,
            batch_size=self.batch_size,
            learning_rate=self.learning_rate,
            iterations=self.iters,
            seed=self.seed,
            input_transform=self.input_transform,
        )

    def catalog(self) -> MotifCatalog:
        if not self.motif_shapes:
            return MotifCatalog()
        overrides = {}
        for item in self.motif_shapes.split(","):
            code, _, shape = item.partition("=")
            if not shape:
                raise ValueError(f"motif_shapes entry {item!r} is not CODE=shape")
            overrides[code.strip()] = shape.strip()
        return MotifCatalog(overrides)


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


def _parse_int_list(text: str, what: str) -> tuple[int, ...]:
    if not text.strip():
        return ()
    try:
        return tuple(int(t) for t in text.split(","))
    except ValueError:
        raise ValueError(f"{what} must be comma-separated integers, got {text!r}") from None


# config key -> (dataclass field, parser)
_CONFIG_KEYS: dict[str, tuple[str, type | object]] = {
    "input": ("input", str),
    "out_dir": ("out_dir", str),
    "seed": ("seed", int),
    "motif_type": ("motif_type", str),
    "hide_fraction": ("hide_fraction", float),
    "dim": ("dim", int),
    "hidden_dims": ("hidden_dims", str),
    "alpha": ("alpha", float),
    "beta": ("beta", float),
    "gamma": ("gamma", float),
    "lambda": ("margin", float),
    "batch_size": ("batch_size", int),
    "learning_rate": ("learning_rate", float),
    "iters": ("iters", int),
    "ks": ("ks", str),
    "baselines": ("baselines", str),
    "weak_ties": ("weak_ties", _parse_bool),
    "max_motifs": ("max_motifs", int),
    "input_transform": ("input_transform", str),
    "dump_instances": ("dump_instances", _parse_bool),
    "types": ("types", str),
    "motif_shapes": ("motif_shapes", str),
}


def _read_config_file(path: str) -> dict[str, str]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read config file {path}: {exc}") from exc
    values: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        key, sep, value = stripped.partition("=")
        if not sep:
            raise ValueError(f"config line {lineno}: expected key=value, got {stripped!r}")
        key = key.strip()
        if key not in _CONFIG_KEYS:
            raise ValueError(f"config line {lineno}: unknown key {key!r}")
        values[key] = value.strip()
    return values


def resolve_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    if getattr(args, "config", None):
        for key, raw in _read_config_file(args.config).items():
            field, parse = _CONFIG_KEYS[key]
            setattr(cfg, field, parse(raw))
    for key, (field, _) in _CONFIG_KEYS.items():
        flag_value = getattr(args, field, None)
        if flag_value is not None:
            setattr(cfg, field, flag_value)
    return cfg


def _format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def config_text(cfg: RunConfig) -> str:
    lines = []
    for key in sorted(_CONFIG_KEYS):
        field, _ = _CONFIG_KEYS[key]
        lines.append(f"{key}={_format_value(getattr(cfg, field))}\n")
    return "".join(lines)


def _echo_config(cfg: RunConfig, out_dir: Path, command: str) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / f"{command}.config.txt").write_text(config_text(cfg), encoding="utf-8")


def _require(cfg: RunConfig, *fields: str) -> None:
    for f in fields:
        if not getattr(cfg, f):
            flag = "--" + f.replace("_", "-")
            raise UsageError(f"{flag} is required")


class UsageError(Exception):
    pass


def _load_graph(cfg: RunConfig) -> tuple[Graph, IngestReport]:
    g, report = read_edge_list(cfg.input)
    print(f"loaded {cfg.input}: {g.n} vertices, {g.m} edges")
    return g, report


def _select_instances(train_graph: Graph, cfg: RunConfig):
    """Instances of the configured type(s) on the train graph, optionally capped."""
    catalog = cfg.catalog()
    codes = [c.strip() for c in cfg.motif_type.split(",") if c.strip()]
    if not codes:
        raise UsageError("--motif-type must name at least one motif code")
    instances = []
    for code in codes:
        if code not in catalog.by_code:
            raise UsageError(f"unknown motif type {code!r}")
        mtype = catalog.by_code[code]
        if 0 < cfg.max_motifs:
            found = sample_instances(train_graph, mtype, cfg.max_motifs, cfg.seed, catalog)
        else:
            found = instances_of_type(train_graph, mtype, catalog)
        if not found:
            raise DataError(f"graph contains no instances of motif type {code}")
        instances.extend(found)
    return instances


def cmd_census(cfg: RunConfig) -> int:
    _require(cfg, "input")
    g, report = _load_graph(cfg)
    result = census(g, cfg.catalog())
    rows = result.rows()
    print("motif_type,total_count,avg_participation")
    for code, count, avg in rows:
        print(f"{code},{count},{avg!r}")
    if cfg.out_dir:
        out = Path(cfg.out_dir)
        _echo_config(cfg, out, "census")
        csv_lines = ["motif_type,total_count,avg_participation\n"]
        csv_lines += [f"{code},{count},{avg!r}\n" for code, count, avg in rows]
        (out / "census.csv").write_text("".join(csv_lines), encoding="utf-8")
        if cfg.dump_instances:
            catalog = cfg.catalog()
            with (out / "instances.txt").open("w", encoding="utf-8") as fh:
                for order in (3, 4):
                    for inst in enumerate_instances(g, order, catalog):
                        original = tuple(report.original_ids[v] for v in inst.vertices)
                        fh.write(format_instance(inst._replace(vertices=original)) + "\n")
        print(f"wrote {out / 'census.csv'}")
    return 0


def _train_pipeline(cfg: RunConfig) -> None:
    g, report = _load_graph(cfg)
    out = Path(cfg.out_dir)
    _echo_config(cfg, out, "train")

    if cfg.hide_fraction > 0:
        split = make_split(g, cfg.hide_fraction, cfg.seed)
        write_split(split, report, out)
        train_graph = split.train_graph
        print(
            f"hid {len(split.positives)} edges"
            + (f" (shortfall {split.shortfall})" if split.shortfall else "")
        )
    else:
        train_graph = g

    instances = _select_instances(train_graph, cfg)
    print(f"selected {len(instances)} motif instances of type {cfg.motif_type}")
    inputs = CoOccurrence.build(instances, train_graph.n)
    isolated = inputs.motif_isolated()
    if isolated:
        print(f"{len(isolated)} vertices participate in no selected motif")

    result = train(instances, inputs, cfg.train_config())
    save_embeddings(result.embeddings, report.original_ids, out / "embeddings.txt")
    save_loss_history(result.history, out / "loss_history.csv")
    if result.history:
        print(
            f"trained {len(result.history)} iterations: "
            f"total loss {result.history[0].total!r} -> {result.history[-1].total!r}"
        )
    print(f"wrote {out / 'embeddings.txt'}")


def cmd_train(cfg: RunConfig) -> int:
    _require(cfg, "input", "out_dir")
    _train_pipeline(cfg)
    return 0


def _load_run_embeddings(cfg: RunConfig, g: Graph, report: IngestReport):
    path = Path(cfg.out_dir) / "embeddings.txt"
    if not path.exists():
        raise DataError(f"missing embeddings file {path}")
    ids, vectors = load_embeddings(path)
    if len(ids) != g.n:
        raise DataError(
            f"embeddings cover {len(ids)} vertices but the graph has {g.n}"
        )
    dense = [0] * g.n
    for row, oid in enumerate(ids):
        if oid not in report.id_map:
            raise DataError(f"embedding row for unknown vertex id {oid}")
        dense[report.id_map[oid]] = row
    return vectors[dense]


def _evaluate_pipeline(cfg: RunConfig) -> list[MetricsReport]:
    g, report = _load_graph(cfg)
    out = Path(cfg.out_dir)
    split = read_split(g, report, out)
    if not split.positives:
        raise DataError("split contains no hidden positive edges")
    vectors = _load_run_embeddings(cfg, g, report)

    ks = list(_parse_int_list(cfg.ks, "ks"))
    threshold = 3 if cfg.weak_ties else None
    scorers = [EmbeddingScorer(vectors)]
    for method in [b.strip() for b in cfg.baselines.split(",") if b.strip()]:
        scorers.append(BaselineScorer(split.train_graph, method))

    reports = [
        evaluate(s, split, ks, cfg.seed, weak_tie_threshold=threshold) for s in scorers
    ]
    _echo_config(cfg, out, "evaluate")
    write_reports_json(reports, out / "metrics.json")
    write_reports_csv(reports, out / "metrics.csv")
    for r in reports:
        print(f"{r.method}: auc={r.auc:.4f} avg_rank={r.avg_rank:.2f}")
    print(f"wrote {out / 'metrics.json'}")
    return reports


def cmd_evaluate(cfg: RunConfig) -> int:
    _require(cfg, "input", "out_dir")
    _evaluate_pipeline(cfg)
    return 0


def cmd_sweep(cfg: RunConfig) -> int:
    _require(cfg, "input", "out_dir")
    codes = [c.strip() for c in cfg.types.split(",") if c.strip()]
    if not codes:
        raise UsageError("--types must name at least one motif code")
    out = Path(cfg.out_dir)
    _echo_config(cfg, out, "sweep")

    model_rows: list[MetricsReport] = []
    for code in codes:
        sub = dataclasses.replace(cfg, motif_type=code, out_dir=str(out / code))
        print(f"--- motif type {code} ---")
        _train_pipeline(sub)
        reports = _evaluate_pipeline(sub)
        model = next(r for r in reports if r.method == "model")
        model = dataclasses.replace(model, method=code)
        model_rows.append(model)
    write_reports_csv(model_rows, out / "sweep.csv")
    print(f"wrote {out / 'sweep.csv'}")
    return 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems exit 1, not argparse's default 2
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="motifembed", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in (
        ("census", cmd_census),
        ("train", cmd_train),
        ("evaluate", cmd_evaluate),
        ("sweep", cmd_sweep),
    ):
        p = sub.add_parser(name)
        p.set_defaults(run=fn)
        p.add_argument("--config", help="flat key=value config file")
        p.add_argument("--input", help="edge-list file")
        p.add_argument("--out-dir", dest="out_dir", help="output directory")
        p.add_argument("--seed", type=int)
        p.add_argument("--motif-type", dest="motif_type",
                       help="motif code, or comma list for a multi-type union")
        p.add_argument("--hide-fraction", dest="hide_fraction", type=float)
        p.add_argument("--dim", type=int, help="embedding dimension")
        p.add_argument("--hidden-dims", dest="hidden_dims",
                       help="comma list of extra encoder layer sizes")
        p.add_argument("--alpha", type=float)
        p.add_argument("--beta", type=float)
        p.add_argument("--gamma", type=float)
        p.add_argument("--lambda", dest="margin", type=float, help="hinge margin")
        p.add_argument("--batch-size", dest="batch_size", type=int)
        p.add_argument("--learning-rate", dest="learning_rate", type=float)
        p.add_argument("--iters", type=int)
        p.add_argument("--ks", help="comma list of K values for PrecisionK")
        p.add_argument("--baselines", help="comma list from cn,jc,aa (may be empty)")
        p.add_argument("--weak-ties", dest="weak_ties",
                       action=argparse.BooleanOptionalAction, default=None)
        p.add_argument("--max-motifs", dest="max_motifs", type=int,
                       help="cap instances per type via uniform sampling (0 = all)")
        p.add_argument("--input-transform", dest="input_transform",
                       choices=["squash", "binary"])
        p.add_argument("--dump-instances", dest="dump_instances",
                       action=argparse.BooleanOptionalAction, default=None)
        p.add_argument("--types", help="comma list of motif codes for sweep")
        p.add_argument("--motif-shapes", dest="motif_shapes",
                       help="override code=shape assignments, e.g. M43=cycle4")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = resolve_config(args)
        return args.run(cfg)
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except TrainingDiverged as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except MotifEmbedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
