#!/usr/bin/env python3
"""Six-node example: Bennett vs. minimum-step strategies for every pebble budget."""

from pathlib import Path

from revpebble.graph import parse_dag
from revpebble.render import render_ascii
from revpebble.schedule import emit_schedule
from revpebble.search import min_pebbles
from revpebble.strategy import bennett, oracle_min_steps

DAG = Path(__file__).resolve().parents[1] / "data" / "fig2.dag"


def main():
    g, _ = parse_dag(DAG.read_text())
    base = bennett(g)
    print(f"Bennett: P={base.peak} K={base.steps}")
    print(render_ascii(base, g))
    for outcome in min_pebbles(g):
        if not outcome.found:
            print(f"P={outcome.pebbles}: {outcome.status.value} ({outcome.diagnostic})")
            continue
        sched = emit_schedule(g, outcome.strategy)
        print(f"P={outcome.pebbles}: K={outcome.steps} (oracle {oracle_min_steps(g, outcome.pebbles)}), "
              f"{sched.qubit_total} qubits, {outcome.total_time_ms:.0f} ms")
        print(render_ascii(outcome.strategy, g))


if __name__ == "__main__":
    main()
