"""PB-to-CNF translation and unary objective counters.

Every objective gets a weighted totalizer whose root outputs are order
literals: ``order_var(i, k)`` is true exactly when objective ``i`` (without
its offset) is at least ``k``. PB constraints go through a sequential
weighted counter.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .model import Clause, ContractError, MocoInstance, PbConstraint

DP_CELL_CAP = 10**6


class VarPool:
    """Hands out fresh variable ids above a watermark."""

    def __init__(self, top: int):
        self.top = top

    def new(self) -> int:
        self.top += 1
        return self.top


def subset_sums(weights: Sequence[int], cap: int = DP_CELL_CAP) -> Optional[list[int]]:
    """Sorted reachable subset sums of ``weights`` (0 included).

    Returns None when the DP table would exceed ``cap`` cells.
    """
    total = sum(weights)
    if (total + 1) * max(len(weights), 1) > cap:
        return None
    reach = 1
    for w in weights:
        reach |= reach << w
    return [s for s in range(total + 1) if reach >> s & 1]


def encode_pb_constraint(c: PbConstraint, pool: VarPool) -> list[Clause]:
    """CNF for a PB constraint; auxiliary variables come from ``pool``.

    The projection of the fragment's models onto the constraint's variables
    is exactly the constraint's solution set.
    """
    out: list[Clause] = []
    for norm in c.normalized():
        out.extend(_encode_ge(list(norm.terms), norm.bound, pool))
    return out


def _encode_ge(terms: list[tuple[int, int]], bound: int, pool: VarPool) -> list[Clause]:
    # terms are positive, saturated at bound, bound > 0
    total = sum(w for w, _ in terms)
    if total < bound:
        return [()]
    if all(w >= bound for w, _ in terms):
        return [tuple(l for _, l in terms)]
    # sum(w * l) >= bound  <=>  sum(w * ~l) <= total - bound
    return _seq_weighted_counter([(w, -l) for w, l in terms], total - bound, pool)


def _seq_weighted_counter(terms: list[tuple[int, int]], k: int, pool: VarPool) -> list[Clause]:
    """``sum(w * l) <= k`` via a sequential weighted counter.

    Register bit ``s[i][j]`` (j = 1..k) is forced true when the prefix sum up
    to term ``i`` is at least ``j``.
    """
    clauses: list[Clause] = []
    n = len(terms)
    prev: list[int] = []
    for i, (w, x) in enumerate(terms):
        if w > k:
            clauses.append((-x,))
            # prefix register is unchanged by a term that must be false
            continue
        last = i == n - 1
        if last:
            # only the overflow check is needed for the final term
            if prev and k - w + 1 >= 1:
                clauses.append((-x, -prev[k - w]))
            break
        cur = [pool.new() for _ in range(k)]
        for j in range(1, k + 1):
            if j <= w:
                clauses.append((-x, cur[j - 1]))
            if prev:
                clauses.append((-prev[j - 1], cur[j - 1]))
                if j + w <= k:
                    clauses.append((-x, -prev[j - 1], cur[j + w - 1]))
        if prev:
            clauses.append((-x, -prev[k - w]))
        prev = cur
    return clauses


@dataclass
class _Node:
    # value -> literal meaning "subtree sum >= value", for attainable values > 0
    outs: dict[int, int]

    @property
    def values(self) -> list[int]:
        return sorted(self.outs)


def _totalizer(terms: Sequence[tuple[int, int]], pool: VarPool, clauses: list[Clause]) -> dict[int, int]:
    if not terms:
        return {}
    nodes = [_Node({w: l}) for w, l in terms]
    while len(nodes) > 1:
        merged = []
        for j in range(0, len(nodes) - 1, 2):
            merged.append(_merge(nodes[j], nodes[j + 1], pool, clauses))
        if len(nodes) % 2:
            merged.append(nodes[-1])
        nodes = merged
    return nodes[0].outs


def _merge(left: _Node, right: _Node, pool: VarPool, clauses: list[Clause]) -> _Node:
    lv = [0] + left.values
    rv = [0] + right.values
    sums = sorted({a + b for a in lv for b in rv} - {0})
    outs = {s: pool.new() for s in sums}
    for s_lo, s_hi in zip(sums, sums[1:]):
        clauses.append((-outs[s_hi], outs[s_lo]))
    for ia, a in enumerate(lv):
        a_next = lv[ia + 1] if ia + 1 < len(lv) else None
        for ib, b in enumerate(rv):
            b_next = rv[ib + 1] if ib + 1 < len(rv) else None
            s = a + b
            if s > 0:
                up = [outs[s]]
                if a:
                    up.append(-left.outs[a])
                if b:
                    up.append(-right.outs[b])
                clauses.append(tuple(up))
            # left < a_next and right < b_next  =>  sum < next value above s
            t = bisect.bisect_right(sums, s)
            if t < len(sums):
                down = [-outs[sums[t]]]
                if a_next is not None:
                    down.append(left.outs[a_next])
                if b_next is not None:
                    down.append(right.outs[b_next])
                clauses.append(tuple(down))
    return _Node(outs)


@dataclass
class EncodedInstance:
    """CNF of an instance plus per-objective order literals.

    ``order_lits[i]`` maps each attainable positive value ``k`` of objective
    ``i`` to the literal for ``f_i >= k``.
    """

    instance: MocoInstance
    cnf: list[Clause]
    n_vars: int
    order_lits: list[dict[int, int]]
    upper_bounds: list[int]
    attainable_values: list[Optional[list[int]]] = field(default_factory=list)

    @property
    def m(self) -> int:
        return len(self.order_lits)

    def order_var(self, i: int, k: int) -> Optional[int]:
        """Literal for ``f_i >= k``, or None when ``k <= 0`` or ``k > UB_i``."""
        if not 0 <= i < self.m:
            raise ContractError(f"objective index {i} out of range")
        if k <= 0 or k > self.upper_bounds[i]:
            return None
        keys = self._keys(i)
        return self.order_lits[i][keys[bisect.bisect_left(keys, k)]]

    def _keys(self, i: int) -> list[int]:
        cache = self.__dict__.setdefault("_key_cache", {})
        if i not in cache:
            cache[i] = sorted(self.order_lits[i])
        return cache[i]

    def my_next(self, i: int, v: int) -> Optional[int]:
        """Smallest attainable value of objective ``i`` above ``v``."""
        if v < 0:
            raise ContractError("value must be non-negative")
        if v >= self.upper_bounds[i]:
            return None
        values = self.attainable_values[i]
        if values is None:
            return v + 1
        return values[bisect.bisect_right(values, v)]

    def project(self, model) -> tuple[bool, ...]:
        """Restrict a solver model to the instance variables."""
        return tuple(model[v - 1] > 0 for v in range(1, self.instance.n_vars + 1))


def encode(instance: MocoInstance, cap: int = DP_CELL_CAP, with_objectives: bool = True) -> EncodedInstance:
    """Encode constraints and one unary counter per objective.

    ``instance`` must be normalized (positive weights, ``>=`` constraints).
    """
    if not instance.is_normalized():
        raise ContractError("encode expects a normalized instance")
    pool = VarPool(instance.n_vars)
    cnf: list[Clause] = []
    for c in instance.constraints:
        cnf.extend(encode_pb_constraint(c, pool))
    order_lits, ubs, attainable = [], [], []
    for obj in instance.objectives if with_objectives else ():
        outs = _totalizer(list(obj.terms), pool, cnf)
        order_lits.append(outs)
        ubs.append(obj.upper_bound)
        attainable.append(subset_sums([w for w, _ in obj.terms], cap))
    return EncodedInstance(instance, cnf, pool.top, order_lits, ubs, attainable)
