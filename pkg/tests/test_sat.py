import itertools
import random

import pytest

from mocosat.sat import Interrupted, Solver, parse_dimacs


def truth_table_sat(n, clauses, assumptions=()):
    for bits in itertools.product((False, True), repeat=n):
        val = lambda l: bits[abs(l) - 1] == (l > 0)
        if all(val(a) for a in assumptions) and all(any(val(l) for l in c) for c in clauses):
            return True
    return False


def random_cnf(rng, n, m, k=3):
    out = []
    while len(out) < m:
        vs = rng.sample(range(1, n + 1), min(k, n))
        out.append([v if rng.random() < 0.5 else -v for v in vs])
    return out


def test_unit_clause_sat():
    s = Solver()
    s.add_clause([1])
    out = s.solve()
    assert out.sat and out.value(1)


def test_contradicting_units_give_empty_core():
    s = Solver()
    s.add_clause([1])
    s.add_clause([-1])
    out = s.solve()
    assert not out.sat and out.core == frozenset()
    assert not s.okay


def test_empty_clause_dominates_assumptions():
    s = Solver()
    s.add_clause([])
    out = s.solve([1])
    assert not out.sat and out.core == frozenset()


def test_core_under_assumptions():
    s = Solver([[-1, -2]])
    out = s.solve([1, 2])
    assert not out.sat and out.core and out.core <= {1, 2}
    out = s.solve([1])
    assert out.sat and out.value(1) and not out.value(2)


def test_conflict_independent_of_assumptions():
    s = Solver([[1], [-1]])
    out = s.solve([2])
    assert not out.sat and out.core == frozenset()


def test_contradictory_assumptions():
    s = Solver(n_vars=2)
    out = s.solve([1, -1])
    assert not out.sat and out.core == {1, -1}


def test_incremental_additions_keep_unsat_answers():
    s = Solver([[1, 2]])
    assert s.solve([-1, -2]).core == {-1, -2}
    s.add_clause([3])
    assert not s.solve([-1, -2])
    assert s.solve([-1]).value(2)


def test_differential_against_truth_table():
    rng = random.Random(11)
    for it in range(400):
        n = rng.randint(1, 10)
        clauses = random_cnf(rng, n, rng.randint(0, 5 * n), k=rng.randint(1, 3))
        s = Solver(clauses, n_vars=n, seed=it % 4)
        for _ in range(3):
            assumptions = list({v if rng.random() < 0.5 else -v for v in rng.sample(range(1, n + 1), rng.randint(0, min(4, n)))})
            out = s.solve(assumptions)
            assert out.sat == truth_table_sat(n, clauses, assumptions)
            if out.sat:
                assert all(any(out.value(l) for l in c) for c in clauses)
                assert all(out.value(a) for a in assumptions)
            else:
                assert out.core <= set(assumptions)
                # core soundness: a fresh solver with the core as units is UNSAT
                fresh = Solver(clauses + [[l] for l in out.core], n_vars=n)
                assert not fresh.solve()
                assert not truth_table_sat(n, clauses, out.core)
            extra = random_cnf(rng, n, 1)
            clauses.append(extra[0])
            s.add_clause(extra[0])


def test_core_soundness_on_larger_formulas():
    rng = random.Random(5)
    for _ in range(40):
        n = 40
        clauses = random_cnf(rng, n, 150)
        s = Solver(clauses)
        assumptions = [v if rng.random() < 0.5 else -v for v in rng.sample(range(1, n + 1), 15)]
        out = s.solve(assumptions)
        if not out.sat:
            assert out.core <= set(assumptions)
            assert not Solver(clauses + [[l] for l in out.core]).solve()


def test_minimized_cores_are_subset_minimal():
    rng = random.Random(9)
    checked = 0
    for _ in range(200):
        n = 8
        clauses = random_cnf(rng, n, 14, k=2)
        s = Solver(clauses, n_vars=n, minimize_cores=True)
        assumptions = [v if rng.random() < 0.5 else -v for v in range(1, n + 1)]
        out = s.solve(assumptions)
        if out.sat or not out.core:
            continue
        checked += 1
        assert not truth_table_sat(n, clauses, out.core)
        for lit in out.core:
            assert truth_table_sat(n, clauses, out.core - {lit})
    assert checked > 10


def test_determinism():
    rng = random.Random(2)
    clauses = random_cnf(rng, 60, 250)
    queries = [[v if rng.random() < 0.5 else -v for v in rng.sample(range(1, 61), 10)] for _ in range(10)]

    def run(seed):
        s = Solver(clauses, seed=seed)
        return [(o.sat, o.model, o.core) for o in (s.solve(q) for q in queries)]

    assert run(3) == run(3)
    assert run(0) == run(0)


def test_deadline_interrupts():
    rng = random.Random(0)
    s = Solver(random_cnf(rng, 200, 852))
    with pytest.raises(Interrupted):
        s.solve(deadline=0.0)


def test_parse_dimacs():
    n, clauses = parse_dimacs("c comment\np cnf 3 2\n1 -2 0\n2 3\n-1 0\n")
    assert n == 3
    assert clauses == [[1, -2], [2, 3, -1]]
    with pytest.raises(ValueError):
        parse_dimacs("p dnf 1 1\n1 0\n")
    s = Solver(clauses, n_vars=n)
    assert s.solve([2]).sat
