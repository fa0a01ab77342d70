"""Command-line front end: ``fcalattice {concepts,lattice,validate,bench}``."""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import oracle
from .bench import format_bench, random_context, run_bench
from .context import FormalContext, iter_bits, parse_cxt, parse_object_list
from .engine import BACKENDS, default_workers, enumerate_concepts, stats_report
from .errors import FCAError, TooLarge
from .lattice import build_lattice, export_concepts_tsv, export_dot, export_graphml, validate_lattice


@dataclass
class RunConfig:
    input: Path | None = None
    format: str = "objlist"
    sep: str = ","
    workers: int = 1
    backend: str = "process"
    out: Path | None = None
    dot: Path | None = None
    graphml: Path | None = None
    stats: Path | None = None
    labels: str = "full"
    bench_workers: list[int] = field(default_factory=lambda: [1, 2, 4])
    repeat: int = 5
    random: tuple[int, int] | None = None
    density: float = 0.3
    seed: int | None = 0

    def __post_init__(self):
        if self.workers < 1:
            raise ValueError("--workers must be >= 1")
        if self.repeat < 1:
            raise ValueError("--repeat must be >= 1")
        if len(self.sep) != 1:
            raise ValueError("--sep must be a single character")
        if any(w < 1 for w in self.bench_workers):
            raise ValueError("--bench-workers entries must be >= 1")


def load_context(cfg: RunConfig) -> FormalContext:
    if cfg.input is None:
        if cfg.random is None:
            raise FCAError("no input: pass --input PATH (or --random GxM)")
        g, m = cfg.random
        return random_context(g, m, cfg.density, cfg.seed)
    try:
        text = Path(cfg.input).read_text(encoding="utf-8")
    except OSError as exc:
        raise FCAError(f"cannot read {cfg.input}: {exc.strerror or exc}") from None
    try:
        if cfg.format == "cxt":
            return parse_cxt(text)
        return parse_object_list(text, cfg.sep)
    except FCAError as exc:
        raise FCAError(f"{cfg.input}: {exc}") from None


def _write(path: Path | None, text: str) -> None:
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")


def _enumerate(cfg: RunConfig, ctx: FormalContext):
    concepts, evidence, stats = enumerate_concepts(ctx, cfg.workers, backend=cfg.backend)
    _write(cfg.stats, json.dumps(stats_report(stats), indent=2) + "\n")
    return concepts, evidence, stats


def cmd_concepts(cfg: RunConfig) -> int:
    ctx = load_context(cfg)
    concepts, _, stats = _enumerate(cfg, ctx)
    _write(cfg.out, export_concepts_tsv(concepts, ctx))
    print(f"{stats.total_concepts} concepts, {stats.iterations} iterations")
    return 0


def cmd_lattice(cfg: RunConfig) -> int:
    ctx = load_context(cfg)
    concepts, evidence, stats = _enumerate(cfg, ctx)
    graph = build_lattice(concepts, evidence, ctx)
    _write(cfg.out, export_concepts_tsv(concepts, ctx))
    dot = export_dot(graph, cfg.labels)
    if cfg.dot is None:
        sys.stdout.write(dot)
    else:
        _write(cfg.dot, dot)
    _write(cfg.graphml, export_graphml(graph))
    print(
        f"{len(graph.vertices)} concepts, {len(graph.edges)} edges, {stats.iterations} iterations",
        file=sys.stderr if cfg.dot is None else sys.stdout,
    )
    return 0


def cmd_validate(cfg: RunConfig) -> int:
    ctx = load_context(cfg)
    if ctx.n_objects > oracle.MAX_OBJECTS:
        raise TooLarge(
            f"{ctx.n_objects} objects exceed the oracle limit of {oracle.MAX_OBJECTS}; "
            "validate a smaller sub-context"
        )
    concepts, evidence, stats = _enumerate(cfg, ctx)
    graph = build_lattice(concepts, evidence, ctx)
    truth = oracle.brute_force_concepts(ctx)
    truth_covers = oracle.brute_force_covers(truth)
    engine_sets = {(frozenset(iter_bits(c.extent)), frozenset(iter_bits(c.intent))) for c in concepts}
    closure_intents = oracle.next_closure(ctx)
    checks = [
        ("concepts match brute force", engine_sets == set(truth)),
        ("intents match NextClosure", {b for _, b in engine_sets} == set(closure_intents)),
        ("iterations equal lattice height",
         stats.iterations == oracle.lattice_height(truth, truth_covers)),
    ]
    report = validate_lattice(graph, ctx, oracle_limit=oracle.MAX_OBJECTS)
    checks.append(("lattice graph valid", report.ok))
    for name, ok in checks:
        print(f"{'PASS' if ok else 'FAIL'}  {name}")
    for v in report.violations:
        print(f"      {v}")
    return 0 if all(ok for _, ok in checks) else 1


def cmd_bench(cfg: RunConfig) -> int:
    ctx = load_context(cfg)
    table = run_bench(ctx, cfg.bench_workers, cfg.repeat, cfg.backend)
    print(f"context: {ctx.n_objects} objects x {ctx.n_attributes} attributes")
    print(format_bench(table))
    _write(cfg.stats, json.dumps(table, indent=2) + "\n")
    return 0


COMMANDS = {
    "concepts": cmd_concepts,
    "lattice": cmd_lattice,
    "validate": cmd_validate,
    "bench": cmd_bench,
}


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of integers, got {text!r}")


def _dims(text: str) -> tuple[int, int]:
    try:
        g, m = text.lower().split("x")
        return int(g), int(m)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected GxM such as 1000x20, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", type=Path, help="context file")
    common.add_argument("--format", choices=["objlist", "cxt"], default="objlist")
    common.add_argument("--sep", default=",", help="object-list separator (default ',')")
    common.add_argument("--workers", type=int, default=default_workers())
    common.add_argument("--backend", choices=BACKENDS, default="process")
    common.add_argument("--out", type=Path, help="concepts TSV output")
    common.add_argument("--stats", type=Path, help="JSON statistics output")
    common.add_argument("--random", type=_dims, metavar="GxM",
                        help="use a random context instead of --input")
    common.add_argument("--density", type=float, default=0.3)
    common.add_argument("--seed", type=int, default=0)

    parser = argparse.ArgumentParser(prog="fcalattice", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("concepts", parents=[common], help="enumerate all formal concepts")
    lat = sub.add_parser("lattice", parents=[common], help="build and export the concept lattice")
    lat.add_argument("--dot", type=Path, help="DOT output (stdout when omitted)")
    lat.add_argument("--graphml", type=Path)
    lat.add_argument("--labels", choices=["full", "sizes"], default="full")
    sub.add_parser("validate", parents=[common], help="check the engine against the oracles")
    bench = sub.add_parser("bench", parents=[common], help="time enumeration per worker count")
    bench.add_argument("--bench-workers", type=_int_list, default=[1, 2, 4])
    bench.add_argument("--repeat", type=int, default=5)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(
            input=args.input,
            format=args.format,
            sep=args.sep,
            workers=args.workers,
            backend=args.backend,
            out=args.out,
            dot=getattr(args, "dot", None),
            graphml=getattr(args, "graphml", None),
            stats=args.stats,
            labels=getattr(args, "labels", "full"),
            bench_workers=getattr(args, "bench_workers", [1, 2, 4]),
            repeat=getattr(args, "repeat", 5),
            random=args.random,
            density=args.density,
            seed=args.seed,
        )
        return COMMANDS[args.command](cfg)
    except (FCAError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
