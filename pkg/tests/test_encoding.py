import itertools
import random

import pytest

from mocosat.encoding import VarPool, encode, encode_pb_constraint, subset_sums
from mocosat.model import ContractError, MocoInstance, Objective, PbConstraint
from mocosat.sat import Solver

from conftest import all_tuples, counter_violations, small_instances


def brute_subset_sums(weights):
    return sorted({sum(c) for r in range(len(weights) + 1) for c in itertools.combinations(weights, r)})


def single(weights, constraints=()):
    n = len(weights)
    return MocoInstance(n, constraints, [Objective([(w, v) for v, w in enumerate(weights, 1)])])


def models_of(cnf, n_vars, project):
    """All distinct projections of the models of ``cnf`` onto ``project`` vars."""
    s = Solver(cnf, n_vars=n_vars)
    seen = set()
    while True:
        out = s.solve()
        if not out:
            return seen
        proj = tuple(out.value(v) for v in project)
        seen.add(proj)
        s.add_clause([-v if b else v for v, b in zip(project, proj)])


def test_unit_objective():
    enc = encode(single([1]))
    assert enc.order_lits == [{1: 1}]
    assert enc.order_var(0, 1) == 1


def test_two_unit_weights():
    inst = single([1, 1])
    enc = encode(inst)
    o1, o2 = enc.order_var(0, 1), enc.order_var(0, 2)
    assert o1 != o2
    s = Solver(enc.cnf, n_vars=enc.n_vars)
    assert not s.solve([o2, -o1])
    out = s.solve([1, 2])
    assert out.value(o1) and out.value(o2)
    assert counter_violations(enc, inst) == 0


def test_equal_weights_share_order_literal():
    inst = single([2, 2])
    enc = encode(inst)
    assert enc.attainable_values[0] == [0, 2, 4]
    assert enc.order_var(0, 1) == enc.order_var(0, 2)
    s = Solver(enc.cnf, n_vars=enc.n_vars)
    for x in all_tuples(2):
        out = s.solve([v if b else -v for v, b in enumerate(x, 1)])
        assert out.value(enc.order_var(0, 1)) == out.value(enc.order_var(0, 2)) == any(x)


def test_order_var_absent_outside_range():
    enc = encode(single([1, 2]))
    assert enc.order_var(0, 0) is None
    assert enc.order_var(0, 4) is None
    assert enc.order_var(0, 3) is not None
    with pytest.raises(ContractError):
        enc.order_var(1, 1)


def test_constant_objective_has_no_counter():
    inst = MocoInstance(2, [], [Objective([]), Objective([(1, 1)])])
    enc = encode(inst)
    assert enc.order_lits[0] == {}
    assert enc.order_var(0, 1) is None
    assert enc.my_next(0, 0) is None


@pytest.mark.parametrize("weights, v, expected", [([2, 2], 0, 2), ([1], 1, None), ([3, 5], 3, 5), ([3, 5], 0, 3), ([3, 5], 5, 8)])
def test_my_next(weights, v, expected):
    enc = encode(single(weights))
    assert enc.my_next(0, v) == expected
    sums = brute_subset_sums(weights)
    oracle = min((s for s in sums if s > v), default=None)
    assert oracle == expected


def test_my_next_matches_brute_force():
    rng = random.Random(4)
    for _ in range(200):
        weights = [rng.randint(1, 9) for _ in range(rng.randint(1, 7))]
        enc = encode(single(weights))
        sums = brute_subset_sums(weights)
        assert enc.attainable_values[0] == sums
        for v in range(sum(weights) + 2):
            assert enc.my_next(0, v) == min((s for s in sums if s > v), default=None)


def test_my_next_falls_back_above_cap():
    inst = single([3, 5])
    enc = encode(inst, cap=1)
    assert enc.attainable_values[0] is None
    assert enc.my_next(0, 0) == 1
    assert enc.my_next(0, 7) == 8
    assert enc.my_next(0, 8) is None
    assert subset_sums([3, 5], cap=1) is None


def test_encode_requires_normalized():
    inst = MocoInstance(1, [], [Objective([(-1, 1)])])
    with pytest.raises(ContractError):
        encode(inst)


def test_clause_shaped_pb():
    assert encode_pb_constraint(PbConstraint([(1, 1), (1, 2)], ">=", 1), VarPool(2)) == [(1, 2)]


def test_trivially_false_and_true_pb():
    assert encode_pb_constraint(PbConstraint([(1, 1)], ">=", 2), VarPool(1)) == [()]
    assert encode_pb_constraint(PbConstraint([(1, 1)], ">=", 0), VarPool(1)) == []
    assert encode_pb_constraint(PbConstraint([(1, 1)], "<=", 3), VarPool(1)) == []


def test_at_most_one_weighted():
    c = PbConstraint([(2, 1), (2, 2)], "<=", 2)
    cnf = encode_pb_constraint(c, VarPool(2))
    got = models_of(cnf, 2, [1, 2])
    assert got == {x for x in all_tuples(2) if c.satisfied(x)}


def test_pb_projection_faithful_random():
    rng = random.Random(8)
    for _ in range(300):
        n = rng.randint(1, 6)
        terms = [(rng.randint(-5, 5), rng.choice([1, -1]) * rng.randint(1, n)) for _ in range(rng.randint(1, 6))]
        c = PbConstraint(terms, rng.choice([">=", "<=", "="]), rng.randint(-4, 8))
        pool = VarPool(n)
        cnf = encode_pb_constraint(c, pool)
        got = models_of(cnf, pool.top, list(range(1, n + 1)))
        assert got == {x for x in all_tuples(n) if c.satisfied(x)}, c


def test_counter_semantics_on_small_instances():
    for inst in small_instances(12, max_vars=8, seed=3):
        norm = inst.normalized()
        enc = encode(norm)
        assert counter_violations(enc, norm) == 0


def test_order_entailment():
    for inst in small_instances(15, max_vars=10, seed=5):
        enc = encode(inst.normalized())
        s = Solver(enc.cnf, n_vars=enc.n_vars)
        for i in range(enc.m):
            for k in range(1, enc.upper_bounds[i]):
                lo, hi = enc.order_var(i, k), enc.order_var(i, k + 1)
                if lo != hi:
                    assert not s.solve([hi, -lo])


def test_projection_faithfulness():
    for inst in small_instances(10, max_vars=9, seed=6):
        norm = inst.normalized()
        enc = encode(norm)
        got = models_of(enc.cnf, enc.n_vars, list(range(1, norm.n_vars + 1)))
        assert got == {x for x in all_tuples(norm.n_vars) if inst.feasible(x)}
