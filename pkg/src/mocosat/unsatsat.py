"""Core-guided (UNSAT-SAT) MOCO engine and its stratified wrapper.

The search is confined to a fence: objective ``i`` may not exceed
``fence[i]``. All non-dominated solutions inside the fence are enumerated,
each one followed by a clause blocking everything it weakly dominates. When
the fenced formula becomes unsatisfiable, the core names the walls that need
to move; an empty core ends the search.
"""

from __future__ import annotations

import logging
from typing import Iterable, Optional, Sequence

from .common import Callback, EngineConfig, expired, notify
from .encoding import EncodedInstance, encode
from .model import (
    Archive,
    Clause,
    ContractError,
    MocoInstance,
    Objective,
    ObjectiveVector,
    ParetoResult,
    SolutionTuple,
    Stats,
    Status,
    nondominated,
)
from .sat import Interrupted, Solver

log = logging.getLogger(__name__)


def next_value(enc: EncodedInstance, i: int, v: int, use_my_next: bool = True) -> Optional[int]:
    if not use_my_next:
        return v + 1 if v < enc.upper_bounds[i] else None
    return enc.my_next(i, v)


def fence_assumptions(enc: EncodedInstance, fence: Sequence[int],
                      use_my_next: bool = True) -> dict[int, list[tuple[int, int]]]:
    """Assumption literals enforcing ``f_i <= fence[i]``.

    Maps each literal ``-o(i, k)`` to the walls ``(i, k)`` it encodes, where
    ``k`` is the next value above ``fence[i]``. Objectives whose fence has
    reached the upper bound contribute nothing.
    """
    out: dict[int, list[tuple[int, int]]] = {}
    for i, lam in enumerate(fence):
        k = next_value(enc, i, lam, use_my_next)
        if k is None:
            continue
        lit = enc.order_var(i, k)
        if lit is None:
            continue
        out.setdefault(-lit, []).append((i, k))
    return out


def blocking_clause(enc: EncodedInstance, y: Sequence[int]) -> Clause:
    """Clause excluding every solution whose cost vector is weakly above ``y``.

    Objectives at 0 drop out; the origin gives the empty clause.
    """
    lits = []
    for i, yi in enumerate(y):
        if yi <= 0:
            continue
        lit = enc.order_var(i, yi)
        if lit is not None and -lit not in lits:
            lits.append(-lit)
    return tuple(lits)


def bump_fence(fence: Sequence[int], core: Iterable[int],
               walls: dict[int, list[tuple[int, int]]]) -> list[int]:
    """Advance every wall named by a core literal to the value it blocked."""
    core = list(core)
    if not core:
        raise ContractError("bump_fence needs a non-empty core")
    new = list(fence)
    for lit in core:
        for i, k in walls.get(lit, ()):
            new[i] = max(new[i], k)
    if new == list(fence):
        raise ContractError("core does not name any fence wall")
    return new


class UnsatSatEngine:
    """One run of the core-guided algorithm on a normalized instance."""

    def __init__(self, instance: MocoInstance, config: EngineConfig,
                 callback: Optional[Callback] = None, deadline: Optional[float] = None):
        self.instance = instance
        self.config = config
        self.callback = callback
        self.deadline = deadline
        self.enc = encode(instance)
        self.solver = Solver(self.enc.cnf, n_vars=self.enc.n_vars, seed=config.seed)
        self.fence = [0] * instance.m
        self.archive = Archive()
        self.staging = Archive()
        self.stats = Stats()

    def _costs(self, x: SolutionTuple) -> ObjectiveVector:
        return self.instance.costs(x)

    def seed_archive(self, entries: Iterable[tuple[SolutionTuple, ObjectiveVector]]) -> None:
        """Start from known feasible solutions (their dominance cones are blocked)."""
        for x, _ in entries:
            y = self._costs(x)
            if self.archive.insert(x, y):
                self.solver.add_clause(blocking_clause(self.enc, y))

    def _sat(self, assumptions):
        if expired(self.deadline):
            raise Interrupted
        self.stats.sat_calls += 1
        return self.solver.solve(assumptions, deadline=self.deadline)

    def inner_enumerate(self, assumptions: Sequence[int]) -> frozenset[int]:
        """Enumerate fenced solutions until UNSAT; returns the final core."""
        target = self.staging if self.config.anytime_strict else self.archive
        while True:
            out = self._sat(assumptions)
            if not out:
                return out.core
            x = self.enc.project(out.model)
            y = self._costs(x)
            target.insert(x, y)
            self.solver.add_clause(blocking_clause(self.enc, y))
            if not self.config.anytime_strict:
                self._announce()
            notify(self.callback, "inner", x=x, y=y, archive=self._working_vectors())

    def _announce(self) -> None:
        entries = self.archive.entries()
        notify(self.callback, "archive", vectors=[y for _, y in entries], solutions=[x for x, _ in entries])

    def _working_vectors(self) -> list[ObjectiveVector]:
        if self.config.anytime_strict:
            return nondominated(self.archive.vectors() + self.staging.vectors())
        return self.archive.vectors()

    def _flush_staging(self) -> None:
        if len(self.staging):
            for x, y in self.staging.entries():
                self.archive.insert(x, y)
            self.staging = Archive()
            self._announce()

    def run(self) -> Status:
        try:
            while True:
                self.stats.iterations += 1
                notify(self.callback, "outer", fence=list(self.fence), archive=self.archive.vectors())
                walls = fence_assumptions(self.enc, self.fence, self.config.use_my_next)
                core = self.inner_enumerate(sorted(walls, key=abs))
                self._flush_staging()
                if not core:
                    return Status.COMPLETE
                self.stats.cores += 1
                self.fence = bump_fence(self.fence, core, walls)
                notify(self.callback, "fence", fence=list(self.fence), core=sorted(core))
        except Interrupted:
            log.debug("core-guided run interrupted at fence %s", self.fence)
            return Status.TIMEOUT

    def result(self, status: Status) -> ParetoResult:
        archive = self.archive
        if status is not Status.COMPLETE and not self.config.anytime_strict:
            archive = _sweep(archive)
        self.stats.stop()
        return ParetoResult.from_archive(archive, status, self.stats, self.instance.offsets)


def _sweep(archive: Archive) -> Archive:
    out = Archive()
    for x, y in archive.entries():
        out.insert(x, y)
    return out


def solve(instance: MocoInstance, config: Optional[EngineConfig] = None,
          callback: Optional[Callback] = None) -> ParetoResult:
    """Exact Pareto front with the core-guided algorithm."""
    config = config or EngineConfig()
    engine = UnsatSatEngine(instance.normalized(), config, callback, config.deadline())
    status = engine.run()
    return engine.result(status)


def weight_partitions(obj: Objective, ratio: float = 8.0, cap: int = 16) -> list[list[tuple[int, int]]]:
    """Split objective terms into partitions by decreasing weight.

    A new partition starts when the next distinct weight is more than
    ``ratio`` times smaller than the previous one, or when the current
    partition would exceed ``cap`` literals. Equal weights stay together.
    """
    by_weight: dict[int, list[tuple[int, int]]] = {}
    for w, l in obj.terms:
        by_weight.setdefault(w, []).append((w, l))
    parts: list[list[tuple[int, int]]] = []
    prev = None
    for w in sorted(by_weight, reverse=True):
        group = by_weight[w]
        if (not parts or prev / w > ratio or len(parts[-1]) + len(group) > cap):
            parts.append([])
        parts[-1].extend(group)
        prev = w
    return parts


def stratified_solve(instance: MocoInstance, config: Optional[EngineConfig] = None,
                     callback: Optional[Callback] = None) -> ParetoResult:
    """Core-guided search revealing objective literals by weight partition.

    Each round solves the instance with only the revealed literals counted;
    its archive seeds the next round. The last round counts every literal,
    so a completed run returns the exact front.
    """
    config = config or EngineConfig()
    norm = instance.normalized()
    deadline = config.deadline()
    parts = [weight_partitions(o, config.strat_ratio, config.strat_cap) for o in norm.objectives]
    rounds = max(1, max(len(p) for p in parts))
    stats = Stats()
    carried: list[tuple[SolutionTuple, ObjectiveVector]] = []
    for r in range(rounds):
        objectives = [
            Objective([t for part in p[: r + 1] for t in part], 0) for p in parts
        ]
        round_inst = MocoInstance(norm.n_vars, norm.constraints, objectives)
        notify(callback, "round", round=r, rounds=rounds)
        engine = UnsatSatEngine(round_inst, config, callback, deadline)
        engine.seed_archive(carried)
        status = engine.run()
        stats.sat_calls += engine.stats.sat_calls
        stats.cores += engine.stats.cores
        stats.iterations += engine.stats.iterations
        carried = engine.archive.entries() + engine.staging.entries()
        if status is not Status.COMPLETE:
            break
    final = Archive()
    for x, _ in carried:
        final.insert(x, norm.costs(x))
    stats.stop()
    status = Status.COMPLETE if r == rounds - 1 and status is Status.COMPLETE else Status.TIMEOUT
    return ParetoResult.from_archive(final, status, stats, norm.offsets)
