"""CNF encoding of the fixed-horizon reversible pebbling decision problem."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .graph import Dag


class Mode(str, Enum):
    SEQUENTIAL = "sequential"
    PARALLEL = "parallel"

    @classmethod
    def parse(cls, value: "str | Mode") -> "Mode":
        if isinstance(value, Mode):
            return value
        aliases = {"seq": cls.SEQUENTIAL, "par": cls.PARALLEL}
        return aliases.get(value) or cls(value)


@dataclass
class VarMap:
    """Pebble variables ``p[v, i]`` occupy the contiguous prefix ``1..|V|(K+1)``."""

    names: list[str]
    steps: int
    next_aux: int = 0

    def __post_init__(self):
        self._col = {name: j for j, name in enumerate(self.names)}
        if self.next_aux == 0:
            self.next_aux = self.num_pebble_vars + 1

    @property
    def num_pebble_vars(self) -> int:
        return len(self.names) * (self.steps + 1)

    def pebble(self, name: str, time: int) -> int:
        if not 0 <= time <= self.steps:
            raise IndexError(f"time {time} outside 0..{self.steps}")
        return time * len(self.names) + self._col[name] + 1

    def new_aux(self) -> int:
        v = self.next_aux
        self.next_aux += 1
        return v

    def decode(self, var: int) -> tuple[str, int] | None:
        if not 1 <= var <= self.num_pebble_vars:
            return None
        time, col = divmod(var - 1, len(self.names))
        return self.names[col], time


@dataclass
class CnfInstance:
    num_vars: int
    clauses: list[list[int]]
    varmap: VarMap
    mode: Mode = Mode.SEQUENTIAL
    pebbles: int = 0
    # clause count per family: "init", "final", "move", "cardinality", "change", "amo"
    families: dict[str, int] = field(default_factory=dict)

    @property
    def steps(self) -> int:
        return self.varmap.steps

    def check(self) -> None:
        for clause in self.clauses:
            if not clause:
                raise ValueError("empty clause")
            if len(set(clause)) != len(clause):
                raise ValueError(f"duplicate literal in {clause}")
            for lit in clause:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise ValueError(f"literal {lit} out of range")


def emit_cardinality(lits: list[int], bound: int, varmap: VarMap, clauses: list[list[int]]) -> None:
    """Append a sequential-counter encoding of ``sum(lits) <= bound``.

    Counter ``s[i][j]`` is implied true when at least ``j+1`` of the first
    ``i+1`` literals hold; ``(n-1) * bound`` auxiliaries in total.
    """
    if bound < 0:
        raise ValueError("bound must be nonnegative")
    n = len(lits)
    if bound >= n:
        return
    if bound == 0:
        clauses.extend([-x] for x in lits)
        return
    s = [[varmap.new_aux() for _ in range(bound)] for _ in range(n - 1)]
    clauses.append([-lits[0], s[0][0]])
    for j in range(1, bound):
        clauses.append([-s[0][j]])
    for i in range(1, n - 1):
        x = lits[i]
        clauses.append([-x, s[i][0]])
        clauses.append([-s[i - 1][0], s[i][0]])
        for j in range(1, bound):
            clauses.append([-x, -s[i - 1][j - 1], s[i][j]])
            clauses.append([-s[i - 1][j], s[i][j]])
        clauses.append([-x, -s[i - 1][bound - 1]])
    clauses.append([-lits[n - 1], -s[n - 2][bound - 1]])


def move_clauses(before: int, after: int, dep_before: int, dep_after: int) -> list[list[int]]:
    """CNF of ``(before xor after) -> (dep_before and dep_after)``."""
    return [
        [before, -after, dep_before],
        [-before, after, dep_before],
        [before, -after, dep_after],
        [-before, after, dep_after],
    ]


def build_cnf(g: Dag, pebbles: int, steps: int, mode: Mode | str = Mode.SEQUENTIAL) -> CnfInstance:
    """CNF satisfiable iff ``g`` has a strategy with ``steps`` transitions and at most ``pebbles`` pebbles.

    Idle transitions are permitted, which makes satisfiability monotone in ``steps``.
    """
    if pebbles < 1:
        raise ValueError("pebbles must be positive")
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    mode = Mode.parse(mode)
    names = g.names
    vm = VarMap(names, steps)
    p = vm.pebble
    clauses: list[list[int]] = []
    families: dict[str, int] = {}

    def section(key, emit):
        start = len(clauses)
        emit()
        families[key] = families.get(key, 0) + len(clauses) - start

    section("init", lambda: clauses.extend([-p(v, 0)] for v in names))
    section("final", lambda: clauses.extend([p(v, steps) if v in g.outputs else -p(v, steps)] for v in names))

    def moves():
        for i in range(steps):
            for v, w in g.edges:
                clauses.extend(move_clauses(p(v, i), p(v, i + 1), p(w, i), p(w, i + 1)))

    section("move", moves)

    def cardinality():
        for i in range(steps + 1):
            emit_cardinality([p(v, i) for v in names], pebbles, vm, clauses)

    section("cardinality", cardinality)

    if mode is Mode.SEQUENTIAL:
        for i in range(steps):
            flags = []
            start = len(clauses)
            for v in names:
                a, b, c = p(v, i), p(v, i + 1), vm.new_aux()
                clauses += [[-c, a, b], [-c, -a, -b], [c, -a, b], [c, a, -b]]
                flags.append(c)
            families["change"] = families.get("change", 0) + len(clauses) - start
            section("amo", lambda: emit_cardinality(flags, 1, vm, clauses))

    return CnfInstance(vm.next_aux - 1, clauses, vm, mode, pebbles, families)


def to_dimacs(cnf: CnfInstance) -> str:
    lines = [f"p cnf {cnf.num_vars} {len(cnf.clauses)}"]
    lines += [" ".join(map(str, clause)) + " 0" for clause in cnf.clauses]
    return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> tuple[int, list[list[int]]]:
    """Minimal DIMACS reader: returns ``(num_vars, clauses)``."""
    num_vars = None
    clauses: list[list[int]] = []
    current: list[int] = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"bad header {line!r}")
            num_vars = int(parts[2])
            continue
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(current)
                current = []
            else:
                current.append(lit)
    if current:
        clauses.append(current)
    if num_vars is None:
        raise ValueError("missing 'p cnf' header")
    return num_vars, clauses
