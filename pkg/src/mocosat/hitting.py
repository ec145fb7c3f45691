"""Hitting-set (relaxation) MOCO engine.

Starts from the empty relaxation and repeatedly solves the relaxed problem
exactly. Each point of the relaxed front is checked against the real
constraints under unit assumptions copied from the point; the cores of the
failed checks are negated and added to the relaxation. When every relaxed
point is feasible, the relaxed front is the answer.
"""

from __future__ import annotations

import time
from typing import Callable, Iterable, Optional, Sequence

from . import unsatsat
from .common import Callback, EngineConfig, expired, notify
from .encoding import encode
from .model import (
    Archive,
    Clause,
    ContractError,
    MocoInstance,
    ParetoResult,
    PbConstraint,
    SolutionTuple,
    Stats,
    Status,
)
from .sat import Interrupted, Solver

InnerEngine = Callable[..., ParetoResult]


def model_assumptions(x: SolutionTuple) -> list[int]:
    """One unit assumption per variable, with the polarity taken from ``x``."""
    return [v if b else -v for v, b in enumerate(x, 1)]


def check_feasible(solver: Solver, x: SolutionTuple, deadline=None) -> Optional[frozenset[int]]:
    """None when ``x`` satisfies the formula loaded in ``solver``, else a core."""
    out = solver.solve(model_assumptions(x), deadline=deadline)
    if out:
        return None
    return out.core


def tighten(relaxed: list[Clause], diagnosis: Iterable[frozenset[int]]) -> list[Clause]:
    """Relaxation conjoined with the negation of every core."""
    diagnosis = list(diagnosis)
    if not diagnosis:
        raise ContractError("tighten needs a non-empty diagnosis")
    added = []
    for core in dict.fromkeys(diagnosis):
        clause = tuple(sorted((-l for l in core), key=lambda l: (abs(l), l)))
        if clause not in added:
            added.append(clause)
    return relaxed + added


def relaxed_instance(instance: MocoInstance, relaxed: Sequence[Clause]) -> MocoInstance:
    return MocoInstance(instance.n_vars, [PbConstraint.clause(c) for c in relaxed], instance.objectives)


def solve(instance: MocoInstance, config: Optional[EngineConfig] = None,
          callback: Optional[Callback] = None, inner: Optional[InnerEngine] = None) -> ParetoResult:
    """Exact Pareto front by iterated relaxation.

    ``inner`` solves each relaxed instance exactly; defaults to the
    core-guided engine.
    """
    config = config or EngineConfig()
    inner = inner or unsatsat.solve
    norm = instance.normalized()
    deadline = config.deadline()
    stats = Stats()
    feas = Solver(encode(norm, with_objectives=False).cnf, n_vars=norm.n_vars, seed=config.seed,
                  minimize_cores=config.minimize_cores)
    relaxed: list[Clause] = []
    best = Archive()  # feasible points of the latest relaxed front
    iteration = 0
    try:
        while True:
            if config.max_iterations is not None and iteration >= config.max_iterations:
                notify(callback, "cap", iteration=iteration)
                break
            if expired(deadline):
                raise Interrupted
            iteration += 1
            stats.iterations = iteration
            sub_cfg = EngineConfig(seed=config.seed, use_my_next=config.use_my_next,
                                   timeout=None if deadline is None else max(0.0, deadline - time.monotonic()))
            front = inner(relaxed_instance(norm, relaxed), sub_cfg)
            stats.sat_calls += front.stats.sat_calls
            if not front.complete:
                raise Interrupted
            diagnosis: list[frozenset[int]] = []
            feasible = Archive()
            for x in front.arg_front:
                stats.sat_calls += 1
                core = check_feasible(feas, x, deadline)
                if core is None:
                    feasible.insert(x, norm.costs(x))
                elif not core:
                    # the constraints alone are unsatisfiable
                    notify(callback, "infeasible", iteration=iteration)
                    stats.stop()
                    return ParetoResult.from_archive(Archive(), Status.COMPLETE, stats, norm.offsets)
                else:
                    diagnosis.append(core)
            stats.cores += len(diagnosis)
            best = feasible
            entries = feasible.entries()
            notify(callback, "archive", vectors=[y for _, y in entries], solutions=[x for x, _ in entries])
            notify(callback, "relaxed", iteration=iteration,
                   models=list(front.arg_front),
                   front=[norm.costs(x) for x in front.arg_front],
                   diagnosis=list(diagnosis))
            if not diagnosis:
                stats.stop()
                return ParetoResult.from_archive(feasible, Status.COMPLETE, stats, norm.offsets)
            before = len(relaxed)
            relaxed = tighten(relaxed, diagnosis)
            notify(callback, "tighten", iteration=iteration, clauses=relaxed[before:])
    except Interrupted:
        pass
    stats.stop()
    return ParetoResult.from_archive(best, Status.TIMEOUT, stats, norm.offsets)
