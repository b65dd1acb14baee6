#!/usr/bin/env python3
"""Pebbles-vs-steps frontier for a DAG file, with one SVG grid per budget."""

import argparse
import csv
import sys
from pathlib import Path

from revpebble.encode import Mode
from revpebble.graph import parse_dag
from revpebble.render import render_svg
from revpebble.schedule import op_counts
from revpebble.search import min_pebbles


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("dag")
    ap.add_argument("--mode", default="seq")
    ap.add_argument("--timeout", type=int, default=120_000, help="per budget, ms")
    ap.add_argument("--figures", type=Path, help="directory for SVG grids")
    args = ap.parse_args()

    g, _ = parse_dag(Path(args.dag).read_text())
    frontier = min_pebbles(g, Mode.parse(args.mode), args.timeout)
    w = csv.writer(sys.stdout)
    w.writerow(["P", "K", "status", "time_ms", "op_counts"])
    for o in frontier:
        counts = " ".join(f"{k}:{v}" for k, v in op_counts(g, o.strategy).items()) if o.found else ""
        w.writerow([o.pebbles, o.steps if o.found else "", o.status.value, f"{o.total_time_ms:.0f}", counts])
        if o.found and args.figures:
            args.figures.mkdir(parents=True, exist_ok=True)
            (args.figures / f"pebbles_{o.pebbles:03d}.svg").write_text(render_svg(o.strategy, g))


if __name__ == "__main__":
    main()
