"""Pebbling strategies: data model, rule checking, decoding, baselines and an exact oracle."""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from enum import Enum

from .encode import CnfInstance, Mode
from .graph import Dag, topological_order

ORACLE_MAX_NODES = 12


class IntegrityError(RuntimeError):
    """A decoded or supplied strategy breaks the pebbling rules."""


@dataclass(frozen=True)
class PebblingStrategy:
    configs: tuple[frozenset[str], ...]
    mode: Mode = Mode.SEQUENTIAL
    pebbles_declared: int = 0

    def __post_init__(self):
        object.__setattr__(self, "configs", tuple(frozenset(c) for c in self.configs))
        object.__setattr__(self, "mode", Mode.parse(self.mode))

    @property
    def steps(self) -> int:
        return len(self.configs) - 1

    @property
    def peak(self) -> int:
        return max((len(c) for c in self.configs), default=0)

    def compressed(self) -> "PebblingStrategy":
        """Drop idle transitions."""
        configs = [self.configs[0]]
        for c in self.configs[1:]:
            if c != configs[-1]:
                configs.append(c)
        return PebblingStrategy(tuple(configs), self.mode, self.pebbles_declared)

    def to_json(self, g: Dag | None = None) -> str:
        order = g.ordered if g is not None else sorted
        doc = {
            "mode": self.mode.value,
            "pebbles": self.pebbles_declared,
            "configs": [order(c) for c in self.configs],
        }
        return json.dumps(doc, indent=None)

    @classmethod
    def from_json(cls, text: str) -> "PebblingStrategy":
        doc = json.loads(text)
        try:
            return cls(tuple(frozenset(c) for c in doc["configs"]), doc.get("mode", "sequential"), int(doc["pebbles"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed strategy document: {exc}") from exc


class MoveKind(str, Enum):
    PEBBLE = "Pebble"
    UNPEBBLE = "Unpebble"


@dataclass(frozen=True)
class Move:
    kind: MoveKind
    node: str
    step: int

    def __str__(self) -> str:
        return f"{self.kind.value} {self.node} @{self.step}"


@dataclass(frozen=True)
class Violation:
    rule: str
    step: int
    message: str

    def __str__(self) -> str:
        return f"step {self.step}: {self.rule}: {self.message}"


# rule names reported by validate()
INITIAL = "initial-empty"
UNKNOWN = "unknown-node"
CARDINALITY = "cardinality"
LEGALITY = "move-legality"
MULTI = "one-move-per-step"
IDLE = "idle-step"
FINAL = "final-outputs"


def validate(g: Dag, s: PebblingStrategy, strict: bool = False) -> Violation | None:
    """Check ``s`` against the game rules; returns the first violation or None.

    Non-strict mode tolerates idle transitions. Sequential strategies may
    change at most one node per transition (exactly one when strict).
    """
    if not s.configs:
        return Violation(INITIAL, 0, "strategy has no configurations")
    known = set(g.names)
    for i, config in enumerate(s.configs):
        stray = config - known
        if stray:
            return Violation(UNKNOWN, i, f"unknown node(s) {sorted(stray)}")
        if i == 0 and config:
            return Violation(INITIAL, 0, f"initial configuration is not empty: {g.ordered(config)}")
        if len(config) > s.pebbles_declared:
            return Violation(CARDINALITY, i, f"{len(config)} pebbles exceed bound {s.pebbles_declared}")
        if i == 0:
            continue
        prev = s.configs[i - 1]
        changed = prev ^ config
        if not changed and strict:
            return Violation(IDLE, i, "configuration repeats the previous one")
        if s.mode is Mode.SEQUENTIAL and len(changed) > 1:
            return Violation(MULTI, i, f"{len(changed)} nodes changed: {g.ordered(changed)}")
        for v in g.ordered(changed):
            missing = [w for w in g.deps(v) if w not in prev or w not in config]
            if missing:
                verb = "pebbled" if v in config else "unpebbled"
                return Violation(LEGALITY, i, f"{v} {verb} while {missing} not held across the step")
    last = s.configs[-1]
    if last != g.outputs:
        return Violation(FINAL, len(s.configs) - 1, f"final configuration {g.ordered(last)} != outputs {g.ordered(g.outputs)}")
    return None


def decode_model(g: Dag, cnf: CnfInstance, model) -> PebblingStrategy:
    vm = cnf.varmap
    configs = tuple(frozenset(v for v in g.names if model[vm.pebble(v, i)]) for i in range(vm.steps + 1))
    s = PebblingStrategy(configs, cnf.mode, cnf.pebbles)
    violation = validate(g, s)
    if violation is not None:
        raise IntegrityError(f"decoded model is not a valid strategy: {violation}")
    return s


def bennett(g: Dag) -> PebblingStrategy:
    """Compute everything in topological order, then uncompute non-outputs in reverse."""
    order = topological_order(g)
    configs = [frozenset()]
    current: set[str] = set()
    for v in order:
        current.add(v)
        configs.append(frozenset(current))
    for v in reversed(order):
        if v not in g.outputs:
            current.discard(v)
            configs.append(frozenset(current))
    return PebblingStrategy(tuple(configs), Mode.SEQUENTIAL, len(g.nodes))


def oracle_min_steps(g: Dag, pebbles: int, mode: Mode | str = Mode.SEQUENTIAL) -> int | None:
    """Exact minimum number of transitions by breadth-first search over configurations."""
    n = len(g.nodes)
    if n > ORACLE_MAX_NODES:
        raise ValueError(f"oracle limited to {ORACLE_MAX_NODES} nodes, graph has {n}")
    mode = Mode.parse(mode)
    bit = {name: 1 << i for i, name in enumerate(g.names)}
    dep_mask = [sum(bit[d] for d in node.deps) for node in g.nodes]
    target = sum(bit[o] for o in g.outputs)
    dist = {0: 0}
    queue = deque([0])
    while queue:
        state = queue.popleft()
        if state == target:
            return dist[state]
        free = [i for i in range(n) if state & dep_mask[i] == dep_mask[i]]
        for nxt in _successors(state, free, dep_mask, mode):
            if nxt not in dist and nxt.bit_count() <= pebbles:
                dist[nxt] = dist[state] + 1
                queue.append(nxt)
    return None


def _successors(state, free, dep_mask, mode):
    if mode is Mode.SEQUENTIAL:
        for i in free:
            yield state ^ (1 << i)
        return
    # any nonempty set of flippable nodes that excludes its own dependencies
    def extend(k, flips, blocked):
        if k == len(free):
            if flips:
                yield state ^ flips
            return
        yield from extend(k + 1, flips, blocked)
        i = free[k]
        if not (blocked >> i) & 1 and not dep_mask[i] & flips:
            yield from extend(k + 1, flips | (1 << i), blocked | dep_mask[i])

    yield from extend(0, 0, 0)


def replay(moves: list[Move], steps: int | None = None) -> list[frozenset[str]]:
    """Configurations reached by applying ``moves`` from the empty set.

    ``steps`` pads trailing idle transitions that carry no moves.
    """
    configs = [frozenset()]
    current: set[str] = set()
    for step in sorted({m.step for m in moves}):
        for m in (m for m in moves if m.step == step):
            if m.kind is MoveKind.PEBBLE:
                current.add(m.node)
            else:
                current.discard(m.node)
        while len(configs) < step:
            configs.append(configs[-1])
        configs.append(frozenset(current))
    while steps is not None and len(configs) <= steps:
        configs.append(configs[-1])
    return configs


def to_moves(s: PebblingStrategy, g: Dag | None = None) -> list[Move]:
    """Moves between consecutive configurations; ties within a step follow declaration order."""
    order = g.ordered if g is not None else sorted
    moves = []
    for i in range(1, len(s.configs)):
        prev, cur = s.configs[i - 1], s.configs[i]
        for v in order(prev ^ cur):
            moves.append(Move(MoveKind.PEBBLE if v in cur else MoveKind.UNPEBBLE, v, i))
    return moves
