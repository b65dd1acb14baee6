"""Dependency DAGs: parsing, validation, canonical text form and generators.

Nodes are operations; an edge ``w -> v`` means ``v`` reads the value of ``w``.
Primary inputs are never nodes, only counted.
"""

from __future__ import annotations

import heapq
import logging
import random
import re
from dataclasses import dataclass, field
from functools import cached_property

log = logging.getLogger(__name__)

_NAME_RE = re.compile(r"[^\s:#]+")


class DagError(ValueError):
    """Raised for structurally invalid graphs."""


class DagSyntaxError(DagError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Node:
    name: str
    label: str | None = None
    deps: tuple[str, ...] = ()


@dataclass(frozen=True)
class Dag:
    nodes: tuple[Node, ...]
    outputs: frozenset[str]
    num_primary_inputs: int = 0
    _index: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "outputs", frozenset(self.outputs))
        index = {}
        for i, node in enumerate(self.nodes):
            if node.name in index:
                raise DagError(f"duplicate node {node.name!r}")
            index[node.name] = i
        object.__setattr__(self, "_index", index)
        for node in self.nodes:
            for dep in node.deps:
                if dep == node.name:
                    raise DagError(f"self-loop on node {node.name!r}")
                if dep not in index:
                    raise DagError(f"node {node.name!r} depends on unknown node {dep!r}")
            if len(set(node.deps)) != len(node.deps):
                raise DagError(f"node {node.name!r} lists a dependency twice")
        if not self.outputs:
            raise DagError("no outputs declared")
        for out in sorted(self.outputs):
            if out not in index:
                raise DagError(f"output {out!r} is not a declared node")
        if self.num_primary_inputs < 0:
            raise DagError("num_primary_inputs must be nonnegative")
        _check_acyclic(self)

    def __len__(self) -> int:
        return len(self.nodes)

    @property
    def names(self) -> list[str]:
        return [n.name for n in self.nodes]

    def index(self, name: str) -> int:
        return self._index[name]

    def node(self, name: str) -> Node:
        return self.nodes[self._index[name]]

    def deps(self, name: str) -> tuple[str, ...]:
        return self.nodes[self._index[name]].deps

    def label(self, name: str) -> str | None:
        return self.nodes[self._index[name]].label

    @cached_property
    def edges(self) -> list[tuple[str, str]]:
        """``(v, w)`` pairs with ``w`` in ``deps(v)``."""
        return [(n.name, d) for n in self.nodes for d in n.deps]

    @cached_property
    def sinks(self) -> frozenset[str]:
        used = {d for n in self.nodes for d in n.deps}
        return frozenset(n.name for n in self.nodes if n.name not in used)

    @cached_property
    def depth(self) -> dict[str, int]:
        """Longest dependency path ending at each node, counted in nodes."""
        out: dict[str, int] = {}
        for name in topological_order(self):
            out[name] = 1 + max((out[d] for d in self.deps(name)), default=0)
        return out

    def ordered(self, names) -> list[str]:
        """Sort a collection of node names by declaration order."""
        return sorted(names, key=self._index.__getitem__)


def _check_acyclic(g: Dag) -> None:
    if len(topological_order(g)) != len(g.nodes):
        raise DagError("cycle detected")


def topological_order(g: Dag) -> list[str]:
    """Kahn's algorithm; ready nodes are released in declaration order."""
    index = {n.name: i for i, n in enumerate(g.nodes)}
    dependents: list[list[int]] = [[] for _ in g.nodes]
    missing = [0] * len(g.nodes)
    for i, node in enumerate(g.nodes):
        for d in node.deps:
            dependents[index[d]].append(i)
            missing[i] += 1
    ready = [i for i, m in enumerate(missing) if m == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        i = heapq.heappop(ready)
        order.append(g.nodes[i].name)
        for j in dependents[i]:
            missing[j] -= 1
            if missing[j] == 0:
                heapq.heappush(ready, j)
    return order


def output_cone(g: Dag) -> set[str]:
    seen: set[str] = set()
    stack = list(g.outputs)
    while stack:
        name = stack.pop()
        if name in seen:
            continue
        seen.add(name)
        stack.extend(g.deps(name))
    return seen


def strip_dead(g: Dag) -> tuple[Dag, int]:
    """Drop nodes outside every output cone; returns the graph and the drop count."""
    cone = output_cone(g)
    if len(cone) == len(g.nodes):
        return g, 0
    kept = tuple(n for n in g.nodes if n.name in cone)
    return Dag(kept, g.outputs, g.num_primary_inputs), len(g.nodes) - len(kept)


def parse_dag(text: str) -> tuple[Dag, int]:
    """Parse the line-oriented DAG format.

    Returns the validated graph with dead nodes removed, together with the
    number of nodes that were stripped.
    """
    nodes: list[Node] = []
    seen: dict[str, int] = {}
    outputs: list[tuple[str, int, int]] = []
    inputs = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        tokens = [(m.group(), m.start() + 1) for m in re.finditer(r":|[^\s:]+", line)]
        if not tokens:
            continue
        keyword, kcol = tokens[0]
        rest = tokens[1:]
        if keyword == "node":
            if not rest or not _NAME_RE.fullmatch(rest[0][0]):
                raise DagSyntaxError("expected node name", lineno, rest[0][1] if rest else len(line) + 1)
            name, ncol = rest[0]
            rest = rest[1:]
            label = None
            if rest and rest[0][0] == ":":
                if len(rest) < 2 or rest[1][0] == ":":
                    raise DagSyntaxError("expected label after ':'", lineno, rest[0][1])
                label = rest[1][0]
                rest = rest[2:]
            for tok, col in rest:
                if tok == ":":
                    raise DagSyntaxError("unexpected ':'", lineno, col)
            if name in seen:
                raise DagSyntaxError(f"duplicate node {name!r}", lineno, ncol)
            seen[name] = lineno
            nodes.append(Node(name, label, tuple(tok for tok, _ in rest)))
        elif keyword == "output":
            if len(rest) != 1 or rest[0][0] == ":":
                raise DagSyntaxError("expected exactly one output name", lineno, kcol)
            outputs.append((rest[0][0], lineno, rest[0][1]))
        elif keyword == "inputs":
            if len(rest) != 1 or not rest[0][0].isdigit():
                raise DagSyntaxError("expected a nonnegative integer", lineno, rest[0][1] if rest else kcol)
            inputs = int(rest[0][0])
        else:
            raise DagSyntaxError(f"unknown keyword {keyword!r}", lineno, kcol)

    for name, lineno, col in outputs:
        if name not in seen:
            raise DagSyntaxError(f"output {name!r} is not a declared node", lineno, col)
    g = Dag(tuple(nodes), frozenset(o[0] for o in outputs), inputs)
    g, stripped = strip_dead(g)
    if stripped:
        log.warning("stripped %d dead node(s) outside all output cones", stripped)
    return g, stripped


def render_dag(g: Dag) -> str:
    """Canonical text form; ``parse_dag(render_dag(g))[0] == g``."""
    lines = []
    for n in g.nodes:
        parts = ["node", n.name]
        if n.label is not None:
            parts += [":", n.label]
        parts += list(n.deps)
        lines.append(" ".join(parts))
    lines += [f"output {o}" for o in g.ordered(g.outputs)]
    lines.append(f"inputs {g.num_primary_inputs}")
    return "\n".join(lines) + "\n"


def gen_and_tree(num_inputs: int) -> Dag:
    """Balanced binary AND tree over ``num_inputs`` primary inputs.

    Leaves are split in halves (larger half first), so the tree has
    ``num_inputs - 1`` nodes and depth ``ceil(log2(num_inputs))``.
    """
    if num_inputs < 2:
        raise ValueError("an AND tree needs at least 2 inputs")
    nodes: list[Node] = []

    def build(n: int) -> str | None:
        # returns the node name, or None for a bare primary input
        if n == 1:
            return None
        left = build((n + 1) // 2)
        right = build(n // 2)
        name = f"g{len(nodes) + 1}"
        nodes.append(Node(name, "AND", tuple(x for x in (left, right) if x is not None)))
        return name

    root = build(num_inputs)
    return Dag(tuple(nodes), frozenset([root]), num_inputs)


def gen_random_dag(num_nodes: int, max_deps: int, seed: int) -> Dag:
    """Random DAG; node ``i`` reads up to ``max_deps`` earlier nodes, sinks are outputs.

    The primary-input count is nominal (``max_deps``).
    """
    if num_nodes < 1 or max_deps < 1:
        raise ValueError("num_nodes and max_deps must be positive")
    rng = random.Random(seed)
    nodes = []
    for i in range(num_nodes):
        k = rng.randint(0, min(max_deps, i))
        deps = sorted(rng.sample(range(i), k))
        nodes.append(Node(f"n{i}", None, tuple(f"n{d}" for d in deps)))
    used = {d for n in nodes for d in n.deps}
    outputs = frozenset(n.name for n in nodes if n.name not in used)
    return Dag(tuple(nodes), outputs, max_deps)
