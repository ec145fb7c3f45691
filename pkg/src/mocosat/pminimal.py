"""P-minimal model enumeration (SAT-UNSAT) baseline.

Each outer round takes any model not yet blocked and walks it down the
dominance order: under a per-chain selector, demand a model that weakly
dominates the current one and is strictly better somewhere. When that
becomes unsatisfiable the last model is Pareto-optimal; it is archived, its
dominance cone is blocked for good, and the selector is retired.
"""

from __future__ import annotations

from typing import Optional

from .common import Callback, EngineConfig, expired, notify
from .encoding import encode
from .model import Archive, ContractError, MocoInstance, ParetoResult, Stats, Status, strictly_dominates
from .sat import Interrupted, Solver
from .unsatsat import blocking_clause


def solve(instance: MocoInstance, config: Optional[EngineConfig] = None,
          callback: Optional[Callback] = None) -> ParetoResult:
    config = config or EngineConfig()
    norm = instance.normalized()
    deadline = config.deadline()
    enc = encode(norm)
    solver = Solver(enc.cnf, n_vars=enc.n_vars, seed=config.seed)
    archive = Archive()
    stats = Stats()

    def sat(assumptions=()):
        if expired(deadline):
            raise Interrupted
        stats.sat_calls += 1
        return solver.solve(assumptions, deadline=deadline)

    status = Status.COMPLETE
    try:
        while True:
            out = sat()
            if not out:
                break
            stats.iterations += 1
            x = enc.project(out.model)
            y = norm.costs(x)
            selector = solver.new_var()
            chain = [y]
            while True:
                for i, yi in enumerate(y):
                    k = enc.my_next(i, yi)
                    lit = enc.order_var(i, k) if k is not None else None
                    if lit is not None:
                        solver.add_clause([-selector, -lit])
                solver.add_clause([-selector, *blocking_clause(enc, y)])
                out = sat([selector])
                if not out:
                    break
                x = enc.project(out.model)
                y_new = norm.costs(x)
                if not strictly_dominates(y_new, y):
                    raise ContractError(f"chain step {y} -> {y_new} is not an improvement")
                y = y_new
                chain.append(y)
            solver.add_clause([-selector])
            archive.insert(x, y)
            solver.add_clause(blocking_clause(enc, y))
            entries = archive.entries()
            notify(callback, "archive", vectors=[y for _, y in entries],
                   solutions=[x for x, _ in entries], chain=chain)
    except Interrupted:
        status = Status.TIMEOUT
    stats.stop()
    return ParetoResult.from_archive(archive, status, stats, norm.offsets)
