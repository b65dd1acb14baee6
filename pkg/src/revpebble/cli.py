"""Command-line interface.

Exit codes: 0 success / strategy found, 2 no strategy (or invalid strategy
for ``validate``), 1 usage or I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import os
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from .encode import Mode
from .graph import DagError, gen_and_tree, gen_random_dag, parse_dag, render_dag
from .render import render_ascii, render_svg
from .schedule import emit_schedule
from .search import DEFAULT_TIMEOUT_MS, best_found, min_pebbles, min_steps
from .solve import SolverError, solve_embedded, solve_external
from .strategy import IntegrityError, PebblingStrategy, bennett, validate

EXIT_OK, EXIT_ERROR, EXIT_NOT_FOUND = 0, 1, 2

BENCH_HEADER = ["design", "pi", "po", "nodes", "bennett_P", "bennett_K", "pebbling_P", "pebbling_K", "runtime_s", "pct_P", "x_K"]
BENCH_NOTE = (
    "Bennett baseline: compute all nodes, uncompute all non-outputs (P = nodes, K = 2*nodes - outputs)."
)


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    input: Path | None = None
    mode: Mode = Mode.SEQUENTIAL
    pebbles: int | None = None
    k_max: int | None = None
    timeout_ms: int = DEFAULT_TIMEOUT_MS
    solver_cmd: str | None = None
    output: Path | None = None
    fmt: str | None = None
    strict: bool = False
    seed: int = 0

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        solver = getattr(args, "solver", None)
        if getattr(args, "embedded", False):
            solver = None
        elif solver is None:
            solver = os.environ.get("PEBBLE_SOLVER") or None
        path = getattr(args, "input", None)
        return cls(
            input=Path(path) if path else None,
            mode=Mode.parse(getattr(args, "mode", "seq")),
            pebbles=getattr(args, "pebbles", None),
            k_max=getattr(args, "k_max", None),
            timeout_ms=getattr(args, "timeout", DEFAULT_TIMEOUT_MS),
            solver_cmd=solver,
            output=Path(args.output) if getattr(args, "output", None) else None,
            fmt=getattr(args, "format", None),
            strict=getattr(args, "strict", False),
            seed=getattr(args, "seed", 0),
        )

    def backend(self):
        if self.solver_cmd:
            cmd = self.solver_cmd
            return lambda cnf, timeout_ms: solve_external(cnf, cmd, timeout_ms)
        return solve_embedded


def _read_dag(path: Path):
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    g, stripped = parse_dag(text)
    if stripped:
        print(f"warning: {path}: stripped {stripped} dead node(s)", file=sys.stderr)
    return g


def _read_strategy(path: str) -> PebblingStrategy:
    try:
        return PebblingStrategy.from_json(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.output is None:
        sys.stdout.write(text)
    else:
        cfg.output.write_text(text, encoding="utf-8")


def cmd_solve(cfg: RunConfig) -> int:
    if cfg.pebbles is None:
        raise UsageError("--pebbles is required")
    g = _read_dag(cfg.input)
    outcome = min_steps(g, cfg.pebbles, cfg.mode, cfg.k_max, cfg.timeout_ms, cfg.backend())
    if not outcome.found:
        print(f"no strategy with P={cfg.pebbles}: {outcome.status.value} ({outcome.diagnostic})", file=sys.stderr)
        return EXIT_NOT_FOUND
    summary = f"P={outcome.pebbles} K={outcome.steps} time={outcome.total_time_ms:.0f}"
    document = outcome.strategy.to_json(g) + "\n"
    if cfg.output is None:
        sys.stdout.write(document)
        print(summary, file=sys.stderr)
    else:
        cfg.output.write_text(document, encoding="utf-8")
        print(summary)
    return EXIT_OK


def cmd_min_pebbles(cfg: RunConfig) -> int:
    g = _read_dag(cfg.input)
    frontier = min_pebbles(g, cfg.mode, cfg.timeout_ms, cfg.k_max, cfg.backend())
    buf = io.StringIO()
    if cfg.fmt == "csv":
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["P", "K", "status", "time_ms"])
        for o in frontier:
            w.writerow([o.pebbles, o.steps if o.found else "", o.status.value, f"{o.total_time_ms:.0f}"])
    else:
        for o in frontier:
            k = f"K={o.steps}" if o.found else f"({o.diagnostic})"
            buf.write(f"P={o.pebbles} {o.status.value} {k} time={o.total_time_ms:.0f}\n")
    _emit(cfg, buf.getvalue())
    return EXIT_OK if best_found(frontier) else EXIT_NOT_FOUND


def cmd_bennett(cfg: RunConfig) -> int:
    g = _read_dag(cfg.input)
    _emit(cfg, bennett(g).to_json(g) + "\n")
    return EXIT_OK


def cmd_validate(cfg: RunConfig, strategy_path: str) -> int:
    g = _read_dag(cfg.input)
    violation = validate(g, _read_strategy(strategy_path), strict=cfg.strict)
    if violation is not None:
        print(f"invalid: {violation}")
        return EXIT_NOT_FOUND
    print("ok")
    return EXIT_OK


def cmd_schedule(cfg: RunConfig, strategy_path: str) -> int:
    g = _read_dag(cfg.input)
    sched = emit_schedule(g, _read_strategy(strategy_path))
    _emit(cfg, sched.to_json() + "\n" if cfg.fmt == "json" else sched.to_text())
    return EXIT_OK


def cmd_render(cfg: RunConfig, strategy_path: str) -> int:
    g = _read_dag(cfg.input)
    s = _read_strategy(strategy_path)
    violation = validate(g, s)
    if violation is not None:
        raise IntegrityError(f"invalid strategy: {violation}")
    _emit(cfg, render_svg(s, g) if cfg.fmt == "svg" else render_ascii(s, g))
    return EXIT_OK


def bench_rows(directory: Path, cfg: RunConfig) -> list[list[str]]:
    rows = []
    for path in sorted(directory.glob("*.dag")):
        try:
            g = _read_dag(path)
        except (UsageError, DagError) as exc:
            print(f"warning: skipping {path.name}: {exc}", file=sys.stderr)
            continue
        base = bennett(g)
        start = time.monotonic()
        best = best_found(min_pebbles(g, cfg.mode, cfg.timeout_ms, cfg.k_max, cfg.backend()))
        runtime = time.monotonic() - start
        row = [path.stem, str(g.num_primary_inputs), str(len(g.outputs)), str(len(g.nodes)), str(base.peak), str(base.steps)]
        if best is None:
            row += ["", "", f"{runtime:.2f}", "", ""]
        else:
            pct = 100.0 * (1 - best.pebbles / base.peak)
            row += [str(best.pebbles), str(best.steps), f"{runtime:.2f}", f"{pct:.2f}", f"{best.steps / base.steps:.2f}"]
        rows.append(row)
    return rows


def bench_footer(rows: list[list[str]]) -> list[str]:
    pct = [float(r[9]) for r in rows if r[9]]
    xk = [float(r[10]) for r in rows if r[10]]

    def avg(xs):
        return f"{sum(xs) / len(xs):.2f}" if xs else "n/a"

    return [
        f"Average percentage reduction of pebbles = {avg(pct)}",
        f"Average multiplicative factor for the number of steps = {avg(xk)}",
        BENCH_NOTE,
    ]


def format_bench_text(rows: list[list[str]]) -> str:
    table = [BENCH_HEADER] + rows
    widths = [max(len(r[i]) for r in table) for i in range(len(BENCH_HEADER))]
    lines = ["  ".join(cell.rjust(w) if i else cell.ljust(w) for i, (cell, w) in enumerate(zip(r, widths))) for r in table]
    return "\n".join(lines + bench_footer(rows)) + "\n"


def format_bench_csv(rows: list[list[str]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(BENCH_HEADER)
    w.writerows(rows)
    return buf.getvalue()


def cmd_bench(cfg: RunConfig) -> int:
    if cfg.input is None or not cfg.input.is_dir():
        raise UsageError(f"{cfg.input} is not a directory")
    rows = bench_rows(cfg.input, cfg)
    if cfg.fmt == "csv":
        sys.stdout.write(format_bench_csv(rows))
    else:
        sys.stdout.write(format_bench_text(rows))
    if cfg.output is not None:
        cfg.output.write_text(format_bench_csv(rows), encoding="utf-8")
    return EXIT_OK


def cmd_gen(cfg: RunConfig, args: argparse.Namespace) -> int:
    if args.kind == "and":
        g = gen_and_tree(args.inputs)
    else:
        g = gen_random_dag(args.nodes, args.max_deps, cfg.seed)
    _emit(cfg, render_dag(g))
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="revpebble", description="SAT-based reversible pebbling.")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, *, search=False, output=True, formats=None):
        if search:
            p.add_argument("--mode", choices=["seq", "par", "sequential", "parallel"], default="seq")
            p.add_argument("--timeout", type=int, default=DEFAULT_TIMEOUT_MS, metavar="MS")
            p.add_argument("--k-max", type=int, default=None, metavar="N")
            backend = p.add_mutually_exclusive_group()
            backend.add_argument("--solver", metavar="CMD", help="external DIMACS solver (default: $PEBBLE_SOLVER)")
            backend.add_argument("--embedded", action="store_true", help="force the built-in solver")
        if output:
            p.add_argument("-o", "--output", metavar="PATH")
        if formats:
            p.add_argument("--format", choices=formats, default=formats[0])

    p = sub.add_parser("solve", help="minimum-step strategy for a pebble budget")
    p.add_argument("input")
    p.add_argument("--pebbles", type=int, required=True, metavar="N")
    common(p, search=True)

    p = sub.add_parser("min-pebbles", help="sweep pebble budgets downwards")
    p.add_argument("input")
    common(p, search=True, formats=["text", "csv"])

    p = sub.add_parser("bennett", help="Bennett baseline strategy")
    p.add_argument("input")
    common(p)

    p = sub.add_parser("validate", help="check a strategy against a DAG")
    p.add_argument("input")
    p.add_argument("strategy")
    p.add_argument("--strict", action="store_true")

    p = sub.add_parser("schedule", help="gate schedule for a strategy")
    p.add_argument("input")
    p.add_argument("strategy")
    common(p, formats=["text", "json"])

    p = sub.add_parser("render", help="pebbling grid figure")
    p.add_argument("input")
    p.add_argument("strategy")
    common(p, formats=["ascii", "svg"])

    p = sub.add_parser("bench", help="Bennett vs. pebbling table over a directory of .dag files")
    p.add_argument("input", metavar="DIR")
    common(p, search=True, formats=["text", "csv"])

    p = sub.add_parser("gen", help="generate DAGs")
    p.add_argument("kind", choices=["and", "random"])
    p.add_argument("--inputs", type=int, default=9)
    p.add_argument("--nodes", type=int, default=8)
    p.add_argument("--max-deps", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    common(p)
    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_ERROR
    logging.basicConfig(level=logging.WARNING - 10 * args.verbose, format="%(levelname)s %(name)s: %(message)s")
    cfg = RunConfig.from_args(args)
    try:
        match args.command:
            case "solve":
                return cmd_solve(cfg)
            case "min-pebbles":
                return cmd_min_pebbles(cfg)
            case "bennett":
                return cmd_bennett(cfg)
            case "validate":
                return cmd_validate(cfg, args.strategy)
            case "schedule":
                return cmd_schedule(cfg, args.strategy)
            case "render":
                return cmd_render(cfg, args.strategy)
            case "bench":
                return cmd_bench(cfg)
            case "gen":
                return cmd_gen(cfg, args)
    except (UsageError, DagError, ValueError, IntegrityError, SolverError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
