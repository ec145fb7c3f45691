from __future__ import annotations

import itertools
import random

import pytest

from mocosat import hitting, unsatsat
from mocosat.common import EngineConfig
from mocosat.generators import gen_random_pb, gen_set_cover
from mocosat.model import MocoInstance, is_lower_bound_set, nondominated, weakly_dominates
from mocosat.oracle import exact_front
from mocosat.sat import Solver

ACCEPTANCE_LINES: list[str] = []


def all_tuples(n: int):
    return itertools.product((False, True), repeat=n)


def cost_front(instance: MocoInstance, img_front) -> list[tuple[int, ...]]:
    """Shift true objective vectors into the engines' offset-free cost space."""
    offsets = instance.normalized().offsets
    return sorted(tuple(v - o for v, o in zip(y, offsets)) for y in img_front)


def suite_instances(count: int = 200):
    """Seeded mix of set-cover and random-PB instances, 4..16 variables, m in {2, 3}."""
    for i in range(count):
        rng = random.Random(1000 + i)
        n = rng.randint(4, 16)
        m = rng.choice([2, 3])
        if i % 2 == 0:
            yield gen_set_cover(rng.randint(3, 8), n, m, density=0.4, weight_max=5, seed=i)
        else:
            yield gen_random_pb(n, m, n_constraints=rng.randint(1, 5), weight_max=5, seed=i)


def small_instances(count: int, max_vars: int = 10, seed: int = 0):
    rng = random.Random(seed)
    for i in range(count):
        n = rng.randint(3, max_vars)
        m = rng.choice([2, 3])
        if rng.random() < 0.5:
            yield gen_set_cover(rng.randint(2, 6), n, m, density=0.4, weight_max=4, seed=seed * 1000 + i)
        else:
            yield gen_random_pb(n, m, n_constraints=rng.randint(1, 4), weight_max=4, seed=seed * 1000 + i)


@pytest.fixture
def complementary():
    """One free variable; f1 = x, f2 = ~x."""
    from mocosat.model import Objective

    return MocoInstance(1, [], [Objective([(1, 1)]), Objective([(1, -1)])])


def oracle_costs(instance: MocoInstance) -> list[tuple[int, ...]]:
    """Oracle img-front in offset-free cost space."""
    return cost_front(instance, exact_front(instance).img_front)


def feasible_costs(instance: MocoInstance) -> list[tuple[int, ...]]:
    norm = instance.normalized()
    return [norm.costs(x) for x in all_tuples(norm.n_vars) if norm.feasible(x)]


def inner_loop_violations(instance: MocoInstance, config: EngineConfig | None = None) -> int:
    """Count inner iterations that change img-front(archive + unblocked models).

    The models still admitted by the working formula are the feasible
    assignments whose cost vector is not weakly dominated by any vector
    blocked so far.
    """
    costs = feasible_costs(instance)
    initial = nondominated(costs)
    blocked: list[tuple[int, ...]] = []
    violations = 0

    def callback(event, data):
        nonlocal violations
        if event != "inner":
            return
        blocked.append(tuple(data["y"]))
        remaining = [y for y in costs if not any(weakly_dominates(b, y) for b in blocked)]
        if nondominated(list(data["archive"]) + remaining) != initial:
            violations += 1

    result = unsatsat.solve(instance, config, callback)
    assert result.complete
    return violations


def outer_head_violations(instance: MocoInstance, config: EngineConfig | None = None) -> int:
    """Archive vectors at each outer-loop head that are not optimal or repeat."""
    front = set(oracle_costs(instance))
    violations = 0

    def callback(event, data):
        nonlocal violations
        if event == "outer":
            vectors = [tuple(y) for y in data["archive"]]
            violations += sum(1 for y in vectors if y not in front)
            violations += len(vectors) - len(set(vectors))

    result = unsatsat.solve(instance, config, callback)
    assert result.complete
    return violations


def hitting_trace(instance: MocoInstance, config: EngineConfig | None = None, inner=None) -> dict:
    """Run the hitting-set engine and check its per-iteration guarantees.

    Returns counts of lower-bound violations, infeasible final points,
    tightenings without a falsifying stored model, cap hits, and the result.
    """
    norm = instance.normalized()
    front = oracle_costs(instance)
    config = config or EngineConfig(max_iterations=2 ** norm.n_vars)
    stored: list[tuple[bool, ...]] = []
    out = {"lower_bound": 0, "progress": 0, "cap": 0, "iterations": 0}

    def falsified(clause, x):
        return not any(x[abs(l) - 1] == (l > 0) for l in clause)

    def callback(event, data):
        if event == "relaxed":
            out["iterations"] += 1
            if not is_lower_bound_set(data["front"], front):
                out["lower_bound"] += 1
            stored.extend(tuple(x) for x in data["models"])
        elif event == "tighten":
            if not data["clauses"]:
                out["progress"] += 1
            for c in data["clauses"]:
                if not any(falsified(c, x) for x in stored):
                    out["progress"] += 1
        elif event == "cap":
            out["cap"] += 1

    result = hitting.solve(instance, config, callback, inner=inner)
    out["infeasible"] = sum(1 for x in result.arg_front if not instance.feasible(x))
    out["result"] = result
    return out


def counter_violations(enc, inst) -> int:
    """Count models whose order literals disagree with [f_i(x) >= k]."""
    s = Solver(enc.cnf, n_vars=enc.n_vars)
    lits = sorted({l for d in enc.order_lits for l in d.values()}, key=abs)
    violations = 0
    for x in all_tuples(inst.n_vars):
        assumptions = [v if b else -v for v, b in enumerate(x, 1)]
        out = s.solve(assumptions)
        if not out:
            assert not inst.feasible(x)
            continue
        assert inst.feasible(x)
        for i, obj in enumerate(inst.objectives):
            f = obj.cost(x)
            for k in range(1, enc.upper_bounds[i] + 1):
                if out.value(enc.order_var(i, k)) != (f >= k):
                    violations += 1
        if lits:
            # no other model may disagree on any order literal
            sel = s.new_var()
            s.add_clause([-sel] + [-l if out.value(l) else l for l in lits])
            if s.solve(assumptions + [sel]):
                violations += 1
            s.add_clause([-sel])
    return violations


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
