"""SAT backends: an embedded CDCL core and an external DIMACS solver process."""

from __future__ import annotations

import heapq
import os
import shlex
import subprocess
import tempfile
import time
from dataclasses import dataclass, field
from enum import Enum

from .encode import CnfInstance, to_dimacs


class Status(str, Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"
    TIMEOUT = "TIMEOUT"


@dataclass
class SolveStats:
    decisions: int = 0
    propagations: int = 0
    conflicts: int = 0
    restarts: int = 0
    time_ms: float = 0.0


@dataclass
class SolveResult:
    status: Status
    model: dict[int, bool] | None = None
    stats: SolveStats = field(default_factory=SolveStats)

    @property
    def sat(self) -> bool:
        return self.status is Status.SAT


class SolverError(RuntimeError):
    pass


class SolverSpawnError(SolverError):
    pass


class SolverOutputError(SolverError):
    pass


class ModelIntegrityError(SolverError):
    """A backend returned a model that falsifies some clause."""


def verify_model(clauses, model: dict[int, bool]) -> list[int] | None:
    """Return the first clause falsified by ``model``, or None."""
    for clause in clauses:
        if not any(model.get(abs(lit), False) == (lit > 0) for lit in clause):
            return clause
    return None


def _luby(x: int) -> int:
    """Element ``x`` (0-based) of the Luby restart sequence 1 1 2 1 1 2 4 ..."""
    size, seq = 1, 0
    while size < x + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != x:
        size = (size - 1) >> 1
        seq -= 1
        x %= size
    return 1 << seq


class CdclSolver:
    """Conflict-driven clause learning with two watched literals.

    Literals are packed as ``2*var + sign`` internally. Branching is VSIDS
    with phase saving; restarts follow the Luby sequence; learned clauses
    are pruned by LBD.
    """

    restart_unit = 64
    var_decay = 0.95

    def __init__(self, num_vars: int, clauses):
        self.n = num_vars
        size = 2 * num_vars + 2
        self.val = [0] * size
        self.level = [0] * (num_vars + 1)
        self.reason: list = [None] * (num_vars + 1)
        self.polarity = [1] * (num_vars + 1)  # 1 = prefer negative literal
        self.activity = [0.0] * (num_vars + 1)
        self.var_inc = 1.0
        self.seen = [False] * (num_vars + 1)
        self.watches: list[list] = [[] for _ in range(size)]
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.learnts: list[list[int]] = []
        self.lbd: dict[int, int] = {}
        self.stats = SolveStats()
        self.ok = True
        self.heap = [(0.0, v) for v in range(1, num_vars + 1)]
        heapq.heapify(self.heap)

        units = []
        for clause in clauses:
            lits = set()
            taut = False
            for lit in clause:
                packed = 2 * lit if lit > 0 else -2 * lit + 1
                if packed ^ 1 in lits:
                    taut = True
                    break
                lits.add(packed)
            if taut:
                continue
            lits = sorted(lits)
            if not lits:
                self.ok = False
            elif len(lits) == 1:
                units.append(lits[0])
            else:
                self.watches[lits[0]].append(lits)
                self.watches[lits[1]].append(lits)
        for lit in units:
            v = self.val[lit]
            if v == -1:
                self.ok = False
            elif v == 0:
                self._assign(lit, None)

    def _assign(self, lit: int, reason) -> None:
        self.val[lit] = 1
        self.val[lit ^ 1] = -1
        v = lit >> 1
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(lit)

    def _propagate(self):
        val = self.val
        watches = self.watches
        trail = self.trail
        level = self.level
        reason = self.reason
        dl = len(self.trail_lim)
        qhead = self.qhead
        conflict = None
        while qhead < len(trail) and conflict is None:
            false_lit = trail[qhead] ^ 1
            qhead += 1
            ws = watches[false_lit]
            kept = []
            idx = 0
            nws = len(ws)
            while idx < nws:
                c = ws[idx]
                idx += 1
                if not c:
                    continue
                if c[0] == false_lit:
                    c[0] = c[1]
                    c[1] = false_lit
                first = c[0]
                if val[first] == 1:
                    kept.append(c)
                    continue
                for k in range(2, len(c)):
                    lk = c[k]
                    if val[lk] != -1:
                        c[1] = lk
                        c[k] = false_lit
                        watches[lk].append(c)
                        break
                else:
                    kept.append(c)
                    if val[first] == -1:
                        conflict = c
                        kept.extend(ws[idx:])
                        break
                    val[first] = 1
                    val[first ^ 1] = -1
                    v = first >> 1
                    level[v] = dl
                    reason[v] = c
                    trail.append(first)
            watches[false_lit] = kept
        self.stats.propagations += qhead - self.qhead
        self.qhead = len(trail) if conflict is not None else qhead
        return conflict

    def _bump(self, v: int) -> None:
        act = self.activity
        act[v] += self.var_inc
        if act[v] > 1e100:
            for i in range(1, self.n + 1):
                act[i] *= 1e-100
            self.var_inc *= 1e-100
            self._rebuild_heap()
        elif self.val[2 * v] == 0:
            heapq.heappush(self.heap, (-act[v], v))

    def _rebuild_heap(self) -> None:
        act = self.activity
        self.heap = [(-act[v], v) for v in range(1, self.n + 1) if self.val[2 * v] == 0]
        heapq.heapify(self.heap)

    def _analyze(self, confl):
        seen = self.seen
        level = self.level
        reason = self.reason
        trail = self.trail
        dl = len(self.trail_lim)
        learnt = [0]
        path = 0
        p = -1
        idx = len(trail) - 1
        c = confl
        while True:
            for q in (c if p == -1 else c[1:]):
                v = q >> 1
                if not seen[v] and level[v] > 0:
                    self._bump(v)
                    seen[v] = True
                    if level[v] >= dl:
                        path += 1
                    else:
                        learnt.append(q)
            while not seen[trail[idx] >> 1]:
                idx -= 1
            p = trail[idx]
            idx -= 1
            v = p >> 1
            c = reason[v]
            seen[v] = False
            path -= 1
            if path == 0:
                break
        learnt[0] = p ^ 1

        # drop literals implied by the rest of the clause (local minimisation)
        out = [learnt[0]]
        for q in learnt[1:]:
            r = reason[q >> 1]
            if r is None or any(not seen[x >> 1] and level[x >> 1] > 0 for x in r[1:]):
                out.append(q)
        for q in learnt:
            seen[q >> 1] = False

        if len(out) == 1:
            back = 0
        else:
            best = 1
            for i in range(2, len(out)):
                if level[out[i] >> 1] > level[out[best] >> 1]:
                    best = i
            out[1], out[best] = out[best], out[1]
            back = level[out[1] >> 1]
        return out, back

    def _backtrack(self, lvl: int) -> None:
        if len(self.trail_lim) <= lvl:
            return
        val = self.val
        pol = self.polarity
        act = self.activity
        heap = self.heap
        start = self.trail_lim[lvl]
        for lit in self.trail[start:]:
            v = lit >> 1
            val[lit] = 0
            val[lit ^ 1] = 0
            pol[v] = lit & 1
            self.reason[v] = None
            heapq.heappush(heap, (-act[v], v))
        del self.trail[start:]
        del self.trail_lim[lvl:]
        self.qhead = len(self.trail)

    def _decide(self) -> int:
        val = self.val
        act = self.activity
        heap = self.heap
        while heap:
            key, v = heapq.heappop(heap)
            if val[2 * v] == 0 and -key == act[v]:
                return 2 * v + self.polarity[v]
        # stale entries exhausted: fall back to a scan
        for v in range(1, self.n + 1):
            if val[2 * v] == 0:
                return 2 * v + self.polarity[v]
        return -1

    def _locked(self, c) -> bool:
        return self.reason[c[0] >> 1] is c and self.val[c[0]] == 1

    def _reduce_db(self) -> None:
        lbd = self.lbd
        self.learnts.sort(key=lambda c: lbd[id(c)])
        half = len(self.learnts) // 2
        keep = []
        for i, c in enumerate(self.learnts):
            if i >= half and lbd[id(c)] > 2 and not self._locked(c):
                del lbd[id(c)]
                c.clear()
            else:
                keep.append(c)
        self.learnts = keep

    def solve(self, deadline: float | None = None) -> Status:
        if not self.ok:
            return Status.UNSAT
        if self._propagate() is not None:
            self.ok = False
            return Status.UNSAT
        stats = self.stats
        max_learnts = max(2000, len(self.watches) // 2)
        restart_no = 0
        budget = _luby(restart_no) * self.restart_unit
        since_restart = 0
        while True:
            confl = self._propagate()
            if confl is not None:
                stats.conflicts += 1
                since_restart += 1
                if not self.trail_lim:
                    self.ok = False
                    return Status.UNSAT
                learnt, back = self._analyze(confl)
                self._backtrack(back)
                if len(learnt) == 1:
                    self._assign(learnt[0], None)
                else:
                    self.watches[learnt[0]].append(learnt)
                    self.watches[learnt[1]].append(learnt)
                    self.lbd[id(learnt)] = len({self.level[q >> 1] for q in learnt})
                    self.learnts.append(learnt)
                    self._assign(learnt[0], learnt)
                self.var_inc /= self.var_decay
                if stats.conflicts % 256 == 0 and deadline is not None and time.monotonic() > deadline:
                    self._backtrack(0)
                    return Status.TIMEOUT
            else:
                if since_restart >= budget:
                    stats.restarts += 1
                    restart_no += 1
                    budget = _luby(restart_no) * self.restart_unit
                    since_restart = 0
                    self._backtrack(0)
                    continue
                if len(self.learnts) - len(self.trail) >= max_learnts:
                    self._reduce_db()
                    max_learnts = int(max_learnts * 1.1)
                lit = self._decide()
                if lit < 0:
                    return Status.SAT
                stats.decisions += 1
                if stats.decisions % 2048 == 0 and deadline is not None and time.monotonic() > deadline:
                    self._backtrack(0)
                    return Status.TIMEOUT
                self.trail_lim.append(len(self.trail))
                self._assign(lit, None)

    def model(self) -> dict[int, bool]:
        return {v: self.val[2 * v] == 1 for v in range(1, self.n + 1)}


def solve_clauses(num_vars: int, clauses, timeout_ms: float | None = None) -> SolveResult:
    start = time.monotonic()
    deadline = None if timeout_ms is None else start + timeout_ms / 1000.0
    solver = CdclSolver(num_vars, clauses)
    status = solver.solve(deadline)
    stats = solver.stats
    stats.time_ms = (time.monotonic() - start) * 1000.0
    if status is not Status.SAT:
        return SolveResult(status, None, stats)
    model = solver.model()
    bad = verify_model(clauses, model)
    if bad is not None:
        raise ModelIntegrityError(f"embedded solver model falsifies clause {bad}")
    return SolveResult(status, model, stats)


def solve_embedded(cnf: CnfInstance, timeout_ms: float | None = 120_000) -> SolveResult:
    return solve_clauses(cnf.num_vars, cnf.clauses, timeout_ms)


def parse_competition_output(text: str, num_vars: int, returncode: int | None = None):
    """Parse SAT-competition style solver output into ``(status, model)``."""
    status = None
    values: dict[int, bool] = {}
    for line in text.splitlines():
        line = line.strip()
        if line.startswith("s "):
            verdict = line[2:].strip().upper()
            if verdict == "SATISFIABLE":
                status = Status.SAT
            elif verdict == "UNSATISFIABLE":
                status = Status.UNSAT
            elif verdict in ("UNKNOWN", "INDETERMINATE"):
                status = Status.TIMEOUT
            else:
                raise SolverOutputError(f"unrecognised verdict line {line!r}")
        elif line.startswith("v ") or line == "v":
            for tok in line[1:].split():
                try:
                    lit = int(tok)
                except ValueError:
                    raise SolverOutputError(f"bad model token {tok!r}") from None
                if lit:
                    values[abs(lit)] = lit > 0
    if status is None:
        if returncode == 10:
            status = Status.SAT
        elif returncode == 20:
            status = Status.UNSAT
        else:
            raise SolverOutputError("no 's' verdict line in solver output")
    if returncode in (10, 20) and status is not {10: Status.SAT, 20: Status.UNSAT}[returncode]:
        raise SolverOutputError(f"verdict {status.value} contradicts exit code {returncode}")
    if status is not Status.SAT:
        return status, None
    if not values:
        raise SolverOutputError("SAT verdict without model lines")
    return status, {v: values.get(v, False) for v in range(1, num_vars + 1)}


def solve_external(cnf: CnfInstance, solver_cmd: str, timeout_ms: float | None = 120_000) -> SolveResult:
    """Run ``solver_cmd <file.cnf>`` and read back a verified model."""
    argv = shlex.split(solver_cmd)
    if not argv:
        raise SolverSpawnError("empty solver command")
    start = time.monotonic()
    with tempfile.TemporaryDirectory(prefix="revpebble-") as tmp:
        path = os.path.join(tmp, "instance.cnf")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(to_dimacs(cnf))
        try:
            proc = subprocess.run(
                argv + [path],
                capture_output=True,
                text=True,
                timeout=None if timeout_ms is None else timeout_ms / 1000.0,
            )
        except subprocess.TimeoutExpired:
            return SolveResult(Status.TIMEOUT, None, SolveStats(time_ms=(time.monotonic() - start) * 1000.0))
        except OSError as exc:
            raise SolverSpawnError(f"cannot run {argv[0]!r}: {exc}") from exc
    stats = SolveStats(time_ms=(time.monotonic() - start) * 1000.0)
    status, model = parse_competition_output(proc.stdout, cnf.num_vars, proc.returncode)
    if model is not None:
        bad = verify_model(cnf.clauses, model)
        if bad is not None:
            raise ModelIntegrityError(f"external model falsifies clause {bad}")
    return SolveResult(status, model, stats)
