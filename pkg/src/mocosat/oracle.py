"""Exhaustive Pareto front by enumerating every assignment.

Constraints are evaluated directly on the PB terms, never through the CNF
encoding, so the oracle stays independent of the engines it checks.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .model import MocoInstance, ObjectiveVector, PbConstraint, Relation, SolutionTuple, nondominated

DEFAULT_CAP = 20
_CHUNK = 1 << 16


class OracleRefused(ValueError):
    pass


@dataclass
class OracleResult:
    img_front: list[ObjectiveVector]
    arg_front: list[SolutionTuple]
    feasible: list[tuple[SolutionTuple, ObjectiveVector]] = field(default_factory=list)
    n_feasible: int = 0


def _assignments(n: int, start: int, stop: int) -> np.ndarray:
    # row r encodes integer r with x1 as the most significant bit, so rows
    # come out in lexicographic order of the tuples
    idx = np.arange(start, stop, dtype=np.int64)
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    return ((idx[:, None] >> shifts[None, :]) & 1).astype(bool)


def _term_matrix(terms, n: int) -> tuple[np.ndarray, int]:
    """Coefficients over x plus constant: ``w * ~x == w - w * x``."""
    coef = np.zeros(n, dtype=np.int64)
    const = 0
    for w, lit in terms:
        if lit > 0:
            coef[lit - 1] += w
        else:
            coef[-lit - 1] -= w
            const += w
    return coef, const


def _satisfied(c: PbConstraint, xs: np.ndarray, n: int) -> np.ndarray:
    coef, const = _term_matrix(c.terms, n)
    lhs = xs.astype(np.int64) @ coef + const
    if c.relation is Relation.GE:
        return lhs >= c.bound
    if c.relation is Relation.LE:
        return lhs <= c.bound
    return lhs == c.bound


def exact_front(instance: MocoInstance, cap: int = DEFAULT_CAP, keep_feasible: int = 0) -> OracleResult:
    """Exact img-front and lexicographically smallest witness per vector.

    Vectors are true objective values (offsets included).

    Args:
        cap: refuse instances with more than this many variables.
        keep_feasible: also return up to this many feasible tuples.
    """
    n = instance.n_vars
    if n > cap:
        raise OracleRefused(f"{n} variables exceed the oracle cap of {cap}")
    objs = [_term_matrix(o.terms, n) for o in instance.objectives]
    witness: dict[ObjectiveVector, SolutionTuple] = {}
    feasible: list[tuple[SolutionTuple, ObjectiveVector]] = []
    n_feasible = 0
    for start in range(0, 1 << n, _CHUNK):
        xs = _assignments(n, start, min(1 << n, start + _CHUNK))
        ok = np.ones(len(xs), dtype=bool)
        for c in instance.constraints:
            ok &= _satisfied(c, xs, n)
        xs = xs[ok]
        n_feasible += len(xs)
        if not len(xs):
            continue
        xi = xs.astype(np.int64)
        ys = np.stack([xi @ coef + const + o.offset for (coef, const), o in zip(objs, instance.objectives)], axis=1)
        _, first = np.unique(ys, axis=0, return_index=True)
        for r in first:
            key = tuple(int(v) for v in ys[r])
            if key not in witness:
                witness[key] = tuple(bool(b) for b in xs[r])
        for row, y in zip(xs[: max(0, keep_feasible - len(feasible))], ys):
            feasible.append((tuple(bool(b) for b in row), tuple(int(v) for v in y)))
    img = nondominated(witness)
    return OracleResult(img, [witness[y] for y in img], feasible, n_feasible)
