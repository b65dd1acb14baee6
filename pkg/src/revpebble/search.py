"""Iterative deepening over the step count and the minimum-pebble sweep."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

from .encode import CnfInstance, Mode, build_cnf
from .graph import Dag
from .solve import SolveResult, Status, solve_embedded
from .strategy import PebblingStrategy, decode_model

log = logging.getLogger(__name__)

DEFAULT_TIMEOUT_MS = 120_000

Backend = Callable[[CnfInstance, float], SolveResult]


class SearchStatus(str, Enum):
    FOUND = "FOUND"
    EXHAUSTED_K = "EXHAUSTED_K"
    TIMEOUT = "TIMEOUT"


@dataclass
class SearchOutcome:
    pebbles: int
    steps: int
    status: SearchStatus
    strategy: PebblingStrategy | None = None
    total_time_ms: float = 0.0
    diagnostic: str = ""
    # (steps, verdict) for every probe issued, in order
    probes: list[tuple[int, Status]] = field(default_factory=list)

    @property
    def found(self) -> bool:
        return self.status is SearchStatus.FOUND


def lower_bound_steps(g: Dag, mode: Mode | str = Mode.SEQUENTIAL) -> int:
    """A sound lower bound on the number of transitions of any strategy."""
    mode = Mode.parse(mode)
    if mode is Mode.SEQUENTIAL:
        return 2 * len(g.nodes) - len(g.outputs)
    return max(g.depth[o] for o in g.outputs)


def min_pebbles_needed(g: Dag) -> int:
    """Cheap necessary pebble count: a node plus all its deps, and all outputs at the end."""
    return max(max(len(n.deps) + 1 for n in g.nodes), len(g.outputs))


def min_steps(
    g: Dag,
    pebbles: int,
    mode: Mode | str = Mode.SEQUENTIAL,
    k_max: int | None = None,
    timeout_ms: float | None = DEFAULT_TIMEOUT_MS,
    backend: Backend = solve_embedded,
) -> SearchOutcome:
    """Smallest step count admitting a strategy with at most ``pebbles`` pebbles.

    Probes K = lower bound, lower bound + 1, ... up to ``k_max`` (default
    ``4 * |V|``). ``timeout_ms`` bounds the whole loop.
    """
    if pebbles < 1:
        raise ValueError("pebbles must be positive")
    mode = Mode.parse(mode)
    if k_max is None:
        k_max = 4 * len(g.nodes)
    start = time.monotonic()
    k = lower_bound_steps(g, mode)

    def elapsed():
        return (time.monotonic() - start) * 1000.0

    need = min_pebbles_needed(g)
    if pebbles < need:
        return SearchOutcome(
            pebbles, k, SearchStatus.EXHAUSTED_K, total_time_ms=elapsed(),
            diagnostic=f"infeasible: at least {need} pebbles are required",
        )
    probes = []
    while k <= k_max:
        remaining = None if timeout_ms is None else timeout_ms - elapsed()
        if remaining is not None and remaining <= 0:
            return SearchOutcome(pebbles, k, SearchStatus.TIMEOUT, None, elapsed(), "time budget exhausted", probes)
        cnf = build_cnf(g, pebbles, k, mode)
        result = backend(cnf, remaining)
        probes.append((k, result.status))
        log.debug("P=%d K=%d -> %s (%d vars, %d clauses)", pebbles, k, result.status.value, cnf.num_vars, len(cnf.clauses))
        if result.status is Status.SAT:
            strategy = decode_model(g, cnf, result.model)
            return SearchOutcome(pebbles, k, SearchStatus.FOUND, strategy, elapsed(), "", probes)
        if result.status is Status.TIMEOUT:
            return SearchOutcome(pebbles, k, SearchStatus.TIMEOUT, None, elapsed(), "time budget exhausted", probes)
        k += 1
    return SearchOutcome(pebbles, k_max, SearchStatus.EXHAUSTED_K, None, elapsed(), f"no strategy with K <= {k_max}", probes)


def min_pebbles(
    g: Dag,
    mode: Mode | str = Mode.SEQUENTIAL,
    per_point_timeout_ms: float | None = DEFAULT_TIMEOUT_MS,
    k_max: int | None = None,
    backend: Backend = solve_embedded,
) -> list[SearchOutcome]:
    """Sweep the pebble budget down from ``|V|`` until no strategy is found.

    The returned frontier ends with the first failing point; the best
    budget is the last FOUND entry.
    """
    frontier = []
    for p in range(len(g.nodes), 0, -1):
        outcome = min_steps(g, p, mode, k_max, per_point_timeout_ms, backend)
        frontier.append(outcome)
        log.info("P=%d: %s K=%d (%.0f ms)", p, outcome.status.value, outcome.steps, outcome.total_time_ms)
        if not outcome.found:
            break
    return frontier


def best_found(frontier: list[SearchOutcome]) -> SearchOutcome | None:
    found = [o for o in frontier if o.found]
    return found[-1] if found else None
