"""Reversible-circuit schedules derived from pebbling strategies."""

from __future__ import annotations

import heapq
import json
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum

from .graph import Dag
from .strategy import IntegrityError, MoveKind, PebblingStrategy, to_moves, validate

UNLABELED = "_unlabeled"


class Direction(str, Enum):
    COMPUTE = "compute"
    UNCOMPUTE = "uncompute"


@dataclass(frozen=True)
class Gate:
    node: str
    label: str | None
    target: int
    direction: Direction
    controls: tuple[int, ...] = ()

    def __str__(self) -> str:
        label = f" {self.label}" if self.label else ""
        return f"{self.direction.value} {self.node}{label} -> q{self.target}"


@dataclass
class Schedule:
    """Single-target gates on qubits ``0..qubit_total-1``.

    Qubits below ``num_primary_inputs`` hold the primary inputs; ancillae
    follow. ``ancilla_assignment`` keys are ``(node, lifetime)`` where
    ``lifetime`` counts how often the node was pebbled before.
    """

    gates: list[Gate]
    qubit_total: int
    num_primary_inputs: int
    ancilla_assignment: dict[tuple[str, int], int] = field(default_factory=dict)
    op_counts: dict[str, int] = field(default_factory=dict)

    @property
    def num_ancillae(self) -> int:
        return self.qubit_total - self.num_primary_inputs

    def to_text(self) -> str:
        counts = " ".join(f"{k}={v}" for k, v in self.op_counts.items())
        lines = [
            f"# qubits={self.qubit_total} inputs={self.num_primary_inputs} ancillae={self.num_ancillae} gates={len(self.gates)}",
            f"# counts {counts}",
        ]
        lines += [str(g) for g in self.gates]
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        doc = {
            "qubit_total": self.qubit_total,
            "num_primary_inputs": self.num_primary_inputs,
            "op_counts": self.op_counts,
            "gates": [
                {"direction": g.direction.value, "node": g.node, "label": g.label, "target": g.target, "controls": list(g.controls)}
                for g in self.gates
            ],
        }
        return json.dumps(doc, indent=2)


def _require_valid(g: Dag, s: PebblingStrategy) -> None:
    violation = validate(g, s)
    if violation is not None:
        raise IntegrityError(f"invalid strategy: {violation}")


def emit_schedule(g: Dag, s: PebblingStrategy) -> Schedule:
    """Turn each move into a gate; pebbles take the lowest free ancilla."""
    _require_valid(g, s)
    base = g.num_primary_inputs
    free: list[int] = []
    next_fresh = base
    held: dict[str, int] = {}
    lifetimes: Counter[str] = Counter()
    assignment: dict[tuple[str, int], int] = {}
    gates = []
    for move in to_moves(s, g):
        v = move.node
        controls = tuple(held[d] for d in g.deps(v))
        if move.kind is MoveKind.PEBBLE:
            if free:
                q = heapq.heappop(free)
            else:
                q = next_fresh
                next_fresh += 1
            held[v] = q
            assignment[(v, lifetimes[v])] = q
            lifetimes[v] += 1
            gates.append(Gate(v, g.label(v), q, Direction.COMPUTE, controls))
        else:
            q = held.pop(v)
            heapq.heappush(free, q)
            gates.append(Gate(v, g.label(v), q, Direction.UNCOMPUTE, controls))
    return Schedule(gates, next_fresh, base, assignment, op_counts(g, s))


def op_counts(g: Dag, s: PebblingStrategy) -> dict[str, int]:
    """Gate count per node label (compute and uncompute both count)."""
    counts: Counter[str] = Counter()
    for move in to_moves(s, g):
        counts[g.label(move.node) or UNLABELED] += 1
    return dict(sorted(counts.items()))


def memory_profile(s: PebblingStrategy) -> list[int]:
    """Number of pebbles held at each configuration."""
    return [len(c) for c in s.configs]
