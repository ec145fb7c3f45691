"""Incremental CDCL SAT solver with assumptions and unsatisfiable cores.

Two watched literals, VSIDS branching with phase saving, 1UIP learning,
geometric restarts and activity-based learned clause reduction. On an
unsatisfiable call under assumptions the solver returns the subset of the
assumptions that took part in the final conflict.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, TextIO


class Interrupted(Exception):
    """A solve call passed its deadline."""


@dataclass(frozen=True)
class SolveOutcome:
    """``sat`` with a model (signed literal per variable) or a core."""

    sat: bool
    model: Optional[tuple[int, ...]] = None
    core: Optional[frozenset[int]] = None

    def __bool__(self) -> bool:
        return self.sat

    def value(self, lit: int) -> bool:
        return (self.model[abs(lit) - 1] > 0) == (lit > 0)


class _Clause:
    __slots__ = ("lits", "learnt", "activity")

    def __init__(self, lits: list[int], learnt: bool = False):
        self.lits = lits
        self.learnt = learnt
        self.activity = 0.0


class _VarHeap:
    """Max-heap of variables keyed by activity, with position index."""

    def __init__(self, activity: list[float]):
        self.act = activity
        self.heap: list[int] = []
        self.pos: dict[int, int] = {}

    def __len__(self):
        return len(self.heap)

    def __contains__(self, v):
        return v in self.pos

    def _up(self, i):
        heap, pos, act = self.heap, self.pos, self.act
        v = heap[i]
        a = act[v]
        while i > 0:
            p = (i - 1) >> 1
            u = heap[p]
            if act[u] > a or (act[u] == a and u < v):
                break
            heap[i] = u
            pos[u] = i
            i = p
        heap[i] = v
        pos[v] = i

    def _down(self, i):
        heap, pos, act = self.heap, self.pos, self.act
        n = len(heap)
        v = heap[i]
        a = act[v]
        while True:
            c = 2 * i + 1
            if c >= n:
                break
            r = c + 1
            if r < n and (act[heap[r]] > act[heap[c]] or (act[heap[r]] == act[heap[c]] and heap[r] < heap[c])):
                c = r
            u = heap[c]
            if act[u] < a or (act[u] == a and u > v):
                heap[i] = u
                pos[u] = i
                i = c
            else:
                break
        heap[i] = v
        pos[v] = i

    def push(self, v):
        if v in self.pos:
            return
        self.heap.append(v)
        self.pos[v] = len(self.heap) - 1
        self._up(len(self.heap) - 1)

    def increased(self, v):
        i = self.pos.get(v)
        if i is not None:
            self._up(i)

    def pop(self) -> int:
        heap = self.heap
        top = heap[0]
        last = heap.pop()
        del self.pos[top]
        if heap:
            heap[0] = last
            self.pos[last] = 0
            self._down(0)
        return top


class Solver:
    """Incremental SAT solver.

    Clauses are only ever added. ``solve`` may be called any number of times
    with different assumptions; learned clauses are kept across calls.

    Args:
        clauses: initial clauses (iterables of non-zero ints).
        seed: seeds the initial branching order; equal seeds give equal runs.
        minimize_cores: shrink every core by iterative deletion.
    """

    restart_first = 100
    restart_inc = 1.5
    var_decay = 0.95
    clause_decay = 0.999

    def __init__(self, clauses: Iterable[Iterable[int]] = (), n_vars: int = 0, seed: int = 0,
                 minimize_cores: bool = False):
        self.seed = seed
        self.minimize_cores = minimize_cores
        self._rng = random.Random(seed)
        self.n_vars = 0
        self._val: dict[int, int] = {}
        self._level: list[int] = [0]
        self._reason: list[Optional[_Clause]] = [None]
        self._activity: list[float] = [0.0]
        self._phase: list[bool] = [False]
        self._watches: dict[int, list[_Clause]] = {}
        self._trail: list[int] = []
        self._trail_lim: list[int] = []
        self._qhead = 0
        self._clauses: list[_Clause] = []
        self._learnts: list[_Clause] = []
        self._heap = _VarHeap(self._activity)
        self._var_inc = 1.0
        self._cla_inc = 1.0
        self._max_learnts = 0.0
        self._ok = True
        self.calls = 0
        self.conflicts = 0
        self.decisions = 0
        self.propagations = 0
        self.ensure_vars(n_vars)
        for c in clauses:
            self.add_clause(c)

    # ----------------------------------------------------------------- setup
    def ensure_vars(self, n: int) -> None:
        while self.n_vars < n:
            self.n_vars += 1
            v = self.n_vars
            self._val[v] = 0
            self._val[-v] = 0
            self._level.append(0)
            self._reason.append(None)
            self._activity.append(self._rng.random() * 1e-5 if self.seed else 0.0)
            self._phase.append(False)
            self._watches[v] = []
            self._watches[-v] = []
            self._heap.push(v)

    def new_var(self) -> int:
        self.ensure_vars(self.n_vars + 1)
        return self.n_vars

    @property
    def okay(self) -> bool:
        """False once the clause set is known to be unsatisfiable."""
        return self._ok

    def add_clause(self, lits: Iterable[int]) -> None:
        """Conjoin a clause. The empty clause makes the solver permanently UNSAT."""
        lits = list(dict.fromkeys(int(l) for l in lits))
        if any(l == 0 for l in lits):
            raise ValueError("0 is not a literal")
        if lits:
            self.ensure_vars(max(abs(l) for l in lits))
        if not self._ok:
            return
        if self._trail_lim:
            self._cancel_until(0)
        val = self._val
        if any(-l in lits for l in lits):
            return
        if any(val[l] > 0 for l in lits):
            return
        lits = [l for l in lits if val[l] == 0]
        if not lits:
            self._ok = False
            return
        if len(lits) == 1:
            self._enqueue(lits[0], None)
            if self._propagate() is not None:
                self._ok = False
            return
        c = _Clause(lits)
        self._clauses.append(c)
        self._watches[lits[0]].append(c)
        self._watches[lits[1]].append(c)

    # --------------------------------------------------------------- search
    def _enqueue(self, lit: int, reason: Optional[_Clause]) -> None:
        v = abs(lit)
        self._val[lit] = 1
        self._val[-lit] = -1
        self._level[v] = len(self._trail_lim)
        self._reason[v] = reason
        self._trail.append(lit)

    def _propagate(self) -> Optional[_Clause]:
        val = self._val
        watches = self._watches
        trail = self._trail
        level = self._level
        reason = self._reason
        dl = len(self._trail_lim)
        confl = None
        while self._qhead < len(trail):
            p = trail[self._qhead]
            self._qhead += 1
            self.propagations += 1
            false_lit = -p
            ws = watches[false_lit]
            kept = []
            n = len(ws)
            i = 0
            while i < n:
                c = ws[i]
                i += 1
                lits = c.lits
                if lits[0] == false_lit:
                    lits[0] = lits[1]
                    lits[1] = false_lit
                first = lits[0]
                if val[first] > 0:
                    kept.append(c)
                    continue
                for k in range(2, len(lits)):
                    lk = lits[k]
                    if val[lk] >= 0:
                        lits[1] = lk
                        lits[k] = false_lit
                        watches[lk].append(c)
                        break
                else:
                    kept.append(c)
                    if val[first] < 0:
                        confl = c
                        kept.extend(ws[i:])
                        break
                    # inline enqueue
                    v = first if first > 0 else -first
                    val[first] = 1
                    val[-first] = -1
                    level[v] = dl
                    reason[v] = c
                    trail.append(first)
            watches[false_lit] = kept
            if confl is not None:
                self._qhead = len(trail)
                return confl
        return None

    def _cancel_until(self, lvl: int) -> None:
        if len(self._trail_lim) <= lvl:
            return
        val = self._val
        phase = self._phase
        heap = self._heap
        start = self._trail_lim[lvl]
        for i in range(len(self._trail) - 1, start - 1, -1):
            lit = self._trail[i]
            v = abs(lit)
            val[lit] = 0
            val[-lit] = 0
            self._reason[v] = None
            phase[v] = lit > 0
            if v not in heap.pos:
                heap.push(v)
        del self._trail[start:]
        del self._trail_lim[lvl:]
        self._qhead = len(self._trail)

    def _bump_var(self, v: int) -> None:
        act = self._activity
        act[v] += self._var_inc
        if act[v] > 1e100:
            for u in range(1, self.n_vars + 1):
                act[u] *= 1e-100
            self._var_inc *= 1e-100
        self._heap.increased(v)

    def _bump_clause(self, c: _Clause) -> None:
        c.activity += self._cla_inc
        if c.activity > 1e20:
            for lc in self._learnts:
                lc.activity *= 1e-20
            self._cla_inc *= 1e-20

    def _analyze(self, confl: _Clause) -> tuple[list[int], int]:
        level = self._level
        reason = self._reason
        trail = self._trail
        dl = len(self._trail_lim)
        seen = set()
        learnt = [0]
        counter = 0
        p = 0
        idx = len(trail) - 1
        c = confl
        while True:
            if c.learnt:
                self._bump_clause(c)
            for q in (c.lits if p == 0 else c.lits[1:]):
                v = abs(q)
                if v not in seen and level[v] > 0:
                    seen.add(v)
                    self._bump_var(v)
                    if level[v] >= dl:
                        counter += 1
                    else:
                        learnt.append(q)
            while abs(trail[idx]) not in seen:
                idx -= 1
            p = trail[idx]
            idx -= 1
            seen.discard(abs(p))
            counter -= 1
            if counter == 0:
                break
            c = reason[abs(p)]
        learnt[0] = -p

        # drop literals implied by the rest of the clause (local minimization)
        keep = [learnt[0]]
        for q in learnt[1:]:
            r = reason[abs(q)]
            if r is None or any(abs(u) not in seen and level[abs(u)] > 0 for u in r.lits[1:]):
                keep.append(q)
        learnt = keep

        if len(learnt) == 1:
            return learnt, 0
        best = 1
        for i in range(2, len(learnt)):
            if level[abs(learnt[i])] > level[abs(learnt[best])]:
                best = i
        learnt[1], learnt[best] = learnt[best], learnt[1]
        return learnt, level[abs(learnt[1])]

    def _analyze_final(self, failed: int) -> set[int]:
        """Assumptions responsible for ``failed`` (an assumption) being false."""
        core = {failed}
        if not self._trail_lim:
            return core
        seen = {abs(failed)}
        reason = self._reason
        level = self._level
        for i in range(len(self._trail) - 1, self._trail_lim[0] - 1, -1):
            x = self._trail[i]
            v = abs(x)
            if v in seen:
                r = reason[v]
                if r is None:
                    core.add(x)
                else:
                    for q in r.lits[1:]:
                        if level[abs(q)] > 0:
                            seen.add(abs(q))
        return core

    def _reduce_db(self) -> None:
        reason = self._reason
        locked = set()
        for lit in self._trail:
            r = reason[abs(lit)]
            if r is not None and r.learnt:
                locked.add(id(r))
        self._learnts.sort(key=lambda c: c.activity)
        half = len(self._learnts) // 2
        keep, drop = [], set()
        for i, c in enumerate(self._learnts):
            if i < half and len(c.lits) > 2 and id(c) not in locked:
                drop.add(id(c))
            else:
                keep.append(c)
        self._learnts = keep
        for lit, ws in self._watches.items():
            if ws:
                self._watches[lit] = [c for c in ws if id(c) not in drop]

    def _pick_branch(self) -> int:
        heap = self._heap
        val = self._val
        while heap.heap:
            v = heap.pop()
            if val[v] == 0:
                return v if self._phase[v] else -v
        return 0

    def _search(self, budget: int, assumptions: list[int], deadline: Optional[float]):
        """Returns True (sat), a core set (unsat) or None (restart)."""
        conflicts = 0
        val = self._val
        while True:
            confl = self._propagate()
            if confl is not None:
                self.conflicts += 1
                conflicts += 1
                if not self._trail_lim:
                    self._ok = False
                    return set()
                learnt, bt = self._analyze(confl)
                self._cancel_until(bt)
                if len(learnt) == 1:
                    self._enqueue(learnt[0], None)
                else:
                    c = _Clause(learnt, learnt=True)
                    self._learnts.append(c)
                    self._watches[learnt[0]].append(c)
                    self._watches[learnt[1]].append(c)
                    self._bump_clause(c)
                    self._enqueue(learnt[0], c)
                self._var_inc /= self.var_decay
                self._cla_inc /= self.clause_decay
                if deadline is not None and conflicts % 64 == 0 and time.monotonic() > deadline:
                    self._cancel_until(0)
                    raise Interrupted
                continue
            if conflicts >= budget:
                self._cancel_until(0)
                return None
            if len(self._learnts) - len(self._trail) >= self._max_learnts:
                self._reduce_db()
                self._max_learnts *= 1.1
            next_lit = 0
            while len(self._trail_lim) < len(assumptions):
                a = assumptions[len(self._trail_lim)]
                if val[a] > 0:
                    self._trail_lim.append(len(self._trail))
                elif val[a] < 0:
                    return self._analyze_final(a)
                else:
                    next_lit = a
                    break
            if next_lit == 0:
                self.decisions += 1
                next_lit = self._pick_branch()
                if next_lit == 0:
                    return True
            self._trail_lim.append(len(self._trail))
            self._enqueue(next_lit, None)

    def solve(self, assumptions: Sequence[int] = (), deadline: Optional[float] = None) -> SolveOutcome:
        """Decide the clause set under ``assumptions``.

        Returns Sat with a total model or Unsat with a core contained in the
        assumptions; an empty core means the clauses alone are unsatisfiable.

        Raises:
            Interrupted: when ``deadline`` (``time.monotonic`` scale) passes.
        """
        self.calls += 1
        assumptions = list(dict.fromkeys(int(a) for a in assumptions))
        if assumptions:
            self.ensure_vars(max(abs(a) for a in assumptions))
        core = self._solve(assumptions, deadline)
        if core is None:
            model = tuple(v if self._val[v] > 0 else -v for v in range(1, self.n_vars + 1))
            self._cancel_until(0)
            return SolveOutcome(True, model=model)
        if self.minimize_cores and core:
            core = self._shrink(core, deadline)
        return SolveOutcome(False, core=frozenset(core))

    def _solve(self, assumptions: list[int], deadline: Optional[float]) -> Optional[set[int]]:
        if not self._ok:
            return set()
        self._cancel_until(0)
        if self._propagate() is not None:
            self._ok = False
            return set()
        self._max_learnts = max(len(self._clauses) / 3.0, 100.0)
        budget = float(self.restart_first)
        while True:
            res = self._search(int(budget), assumptions, deadline)
            if res is True:
                return None
            if res is not None:
                self._cancel_until(0)
                return res
            budget *= self.restart_inc

    def _shrink(self, core: set[int], deadline: Optional[float]) -> set[int]:
        core = set(core)
        for lit in sorted(core, key=lambda l: (abs(l), l)):
            if lit not in core:
                continue
            trial = [a for a in sorted(core, key=lambda l: (abs(l), l)) if a != lit]
            sub = self._solve(trial, deadline)
            if sub is None:
                self._cancel_until(0)
            else:
                core = set(sub)
                if not core:
                    break
        return core


def parse_dimacs(stream: TextIO | str) -> tuple[int, list[list[int]]]:
    """Read a DIMACS CNF file; returns ``(n_vars, clauses)``."""
    text = stream if isinstance(stream, str) else stream.read()
    n_vars = 0
    clauses: list[list[int]] = []
    current: list[int] = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line[0] in "c%":
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) < 4 or parts[1] != "cnf":
                raise ValueError(f"bad header: {line!r}")
            n_vars = int(parts[2])
            continue
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(current)
                current = []
            else:
                current.append(lit)
                n_vars = max(n_vars, abs(lit))
    if current:
        clauses.append(current)
    return n_vars, clauses
