#!/usr/bin/env python3
"""Fit a 9-input AND onto a 16-qubit device: Bennett needs 17 qubits."""

import argparse

from revpebble.graph import gen_and_tree
from revpebble.schedule import emit_schedule
from revpebble.search import min_steps
from revpebble.strategy import bennett, oracle_min_steps


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--qubits", type=int, default=16)
    ap.add_argument("--inputs", type=int, default=9)
    args = ap.parse_args()

    g = gen_and_tree(args.inputs)
    base = emit_schedule(g, bennett(g))
    print(f"Bennett: {len(base.gates)} gates on {base.qubit_total} qubits")
    pebbles = args.qubits - g.num_primary_inputs
    out = min_steps(g, pebbles)
    if not out.found:
        print(f"no strategy with {pebbles} ancillae: {out.diagnostic}")
        return
    sched = emit_schedule(g, out.strategy)
    print(f"{pebbles} ancillae: {len(sched.gates)} gates on {sched.qubit_total} qubits "
          f"(oracle minimum {oracle_min_steps(g, pebbles)})")
    print(sched.to_text())


if __name__ == "__main__":
    main()
