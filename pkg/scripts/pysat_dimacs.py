#!/usr/bin/env python3
"""DIMACS-in, SAT-competition-out wrapper around a python-sat solver.

Usage: pysat_dimacs.py [--solver NAME] FILE.cnf
Exit code 10 for SAT, 20 for UNSAT.
"""

import argparse
import sys

from pysat.formula import CNF
from pysat.solvers import Solver


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--solver", default="cadical153")
    ap.add_argument("cnf")
    args = ap.parse_args()
    formula = CNF(from_file=args.cnf)
    with Solver(name=args.solver, bootstrap_with=formula.clauses) as s:
        if s.solve():
            print("s SATISFIABLE")
            model = s.get_model() or []
            seen = {abs(l) for l in model}
            model += [-v for v in range(1, formula.nv + 1) if v not in seen]
            print("v " + " ".join(map(str, model)) + " 0")
            return 10
        print("s UNSATISFIABLE")
        return 20


if __name__ == "__main__":
    sys.exit(main())
