"""Domain types shared by every engine: PB constraints, objectives, instances,
dominance relations and the non-dominated archive.

Literals follow the DIMACS convention: variable ``v`` is the positive integer
``v`` and its negation is ``-v``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

Literal = int
Clause = tuple[Literal, ...]
ObjectiveVector = tuple[int, ...]
SolutionTuple = tuple[bool, ...]


class ContractError(ValueError):
    """Raised when an operation is called outside of its precondition."""


def make_clause(lits: Iterable[Literal]) -> Clause:
    """Build a clause, dropping repeated literals.

    Raises:
        ContractError: on a zero literal or on a tautology (``l`` and ``-l``).
    """
    seen: dict[int, None] = {}
    for lit in lits:
        if lit == 0:
            raise ContractError("0 is not a literal")
        if -lit in seen:
            raise ContractError(f"tautological clause: contains {lit} and {-lit}")
        seen[lit] = None
    return tuple(seen)


def lit_value(lit: Literal, x: Sequence[bool]) -> bool:
    """Truth value of ``lit`` under a 0-indexed solution tuple."""
    v = x[abs(lit) - 1]
    return v if lit > 0 else not v


class Relation(str, Enum):
    GE = ">="
    LE = "<="
    EQ = "="


def _merge_terms(terms: Iterable[tuple[int, Literal]]) -> tuple[list[tuple[int, Literal]], int]:
    """Collapse terms to one positive-weight literal per variable.

    Returns the merged terms and the constant that was split off, so that
    ``sum(terms) == constant + sum(merged)`` under every assignment.
    """
    coef: dict[int, int] = {}
    constant = 0
    for w, lit in terms:
        if lit == 0:
            raise ContractError("0 is not a literal")
        v = abs(lit)
        if lit > 0:
            coef[v] = coef.get(v, 0) + w
        else:
            # w * ~x == w - w * x
            constant += w
            coef[v] = coef.get(v, 0) - w
    merged = []
    for v in sorted(coef):
        c = coef[v]
        if c > 0:
            merged.append((c, v))
        elif c < 0:
            # c * x == c + |c| * ~x
            constant += c
            merged.append((-c, -v))
    return merged, constant


@dataclass(frozen=True)
class PbConstraint:
    """``sum(w * lit) <relation> bound`` with arbitrary integer weights."""

    terms: tuple[tuple[int, Literal], ...]
    relation: Relation
    bound: int

    def __init__(self, terms, relation, bound):
        object.__setattr__(self, "terms", tuple((int(w), int(l)) for w, l in terms))
        object.__setattr__(self, "relation", Relation(relation))
        object.__setattr__(self, "bound", int(bound))

    @classmethod
    def clause(cls, lits: Iterable[Literal]) -> PbConstraint:
        return cls([(1, l) for l in make_clause(lits)], Relation.GE, 1)

    def variables(self) -> set[int]:
        return {abs(l) for _, l in self.terms}

    def lhs(self, x: Sequence[bool]) -> int:
        return sum(w for w, l in self.terms if lit_value(l, x))

    def satisfied(self, x: Sequence[bool]) -> bool:
        s = self.lhs(x)
        if self.relation is Relation.GE:
            return s >= self.bound
        if self.relation is Relation.LE:
            return s <= self.bound
        return s == self.bound

    def normalized(self) -> list[PbConstraint]:
        """Equivalent ``>=`` constraints with strictly positive weights.

        An equality yields two constraints. Weights are saturated at the bound.
        Trivially true constraints come back as an empty list.
        """
        if self.relation is Relation.EQ:
            parts = [(self.terms, self.bound), ([(-w, l) for w, l in self.terms], -self.bound)]
        elif self.relation is Relation.GE:
            parts = [(self.terms, self.bound)]
        else:
            parts = [([(-w, l) for w, l in self.terms], -self.bound)]
        out = []
        for terms, bound in parts:
            merged, constant = _merge_terms(terms)
            rhs = bound - constant
            if rhs <= 0:
                continue
            out.append(PbConstraint([(min(w, rhs), l) for w, l in merged], Relation.GE, rhs))
        return out


@dataclass(frozen=True)
class Objective:
    """Linear objective ``offset + sum(w * lit)`` to be minimized."""

    terms: tuple[tuple[int, Literal], ...]
    offset: int = 0

    def __init__(self, terms, offset=0):
        object.__setattr__(self, "terms", tuple((int(w), int(l)) for w, l in terms))
        object.__setattr__(self, "offset", int(offset))

    def value(self, x: Sequence[bool]) -> int:
        return self.offset + sum(w for w, l in self.terms if lit_value(l, x))

    def negated(self) -> Objective:
        """The objective to minimize when maximizing this one."""
        return Objective([(-w, l) for w, l in self.terms], -self.offset)

    def normalized(self) -> Objective:
        merged, constant = _merge_terms(self.terms)
        return Objective(merged, self.offset + constant)

    @property
    def upper_bound(self) -> int:
        """Largest attainable value of the offset-free part (normalized form)."""
        return sum(w for w, _ in self.terms)

    def cost(self, x: Sequence[bool]) -> int:
        """Value without the offset."""
        return self.value(x) - self.offset


@dataclass(frozen=True)
class MocoInstance:
    """A MOCO instance: ``n_vars`` Boolean variables, PB constraints, objectives."""

    n_vars: int
    constraints: tuple[PbConstraint, ...]
    objectives: tuple[Objective, ...]

    def __init__(self, n_vars, constraints, objectives):
        constraints = tuple(constraints)
        objectives = tuple(objectives)
        if not objectives:
            raise ContractError("an instance needs at least one objective")
        used = [abs(l) for c in constraints for _, l in c.terms]
        used += [abs(l) for o in objectives for _, l in o.terms]
        n_vars = max([int(n_vars), *used]) if used else int(n_vars)
        object.__setattr__(self, "n_vars", n_vars)
        object.__setattr__(self, "constraints", constraints)
        object.__setattr__(self, "objectives", objectives)

    @property
    def m(self) -> int:
        return len(self.objectives)

    def normalized(self) -> MocoInstance:
        constraints = [n for c in self.constraints for n in c.normalized()]
        return MocoInstance(self.n_vars, constraints, [o.normalized() for o in self.objectives])

    def is_normalized(self) -> bool:
        return all(
            c.relation is Relation.GE and all(w > 0 for w, _ in c.terms) for c in self.constraints
        ) and all(w > 0 for o in self.objectives for w, _ in o.terms)

    def feasible(self, x: Sequence[bool]) -> bool:
        return all(c.satisfied(x) for c in self.constraints)

    def evaluate(self, x: Sequence[bool]) -> ObjectiveVector:
        return tuple(o.value(x) for o in self.objectives)

    def costs(self, x: Sequence[bool]) -> ObjectiveVector:
        return tuple(o.cost(x) for o in self.objectives)

    @property
    def offsets(self) -> tuple[int, ...]:
        return tuple(o.offset for o in self.objectives)


def _check_len(a: Sequence[int], b: Sequence[int]) -> None:
    if len(a) != len(b):
        raise ContractError(f"vector length mismatch: {len(a)} != {len(b)}")


def weakly_dominates(a: Sequence[int], b: Sequence[int]) -> bool:
    _check_len(a, b)
    return all(ai <= bi for ai, bi in zip(a, b))


def strictly_dominates(a: Sequence[int], b: Sequence[int]) -> bool:
    _check_len(a, b)
    return all(ai <= bi for ai, bi in zip(a, b)) and tuple(a) != tuple(b)


def is_lower_bound_set(lower: Iterable[Sequence[int]], upper: Iterable[Sequence[int]]) -> bool:
    """True iff every vector in ``upper`` is weakly dominated by one in ``lower``."""
    lower = list(lower)
    return all(any(weakly_dominates(l, u) for l in lower) for u in upper)


def nondominated(vectors: Iterable[Sequence[int]]) -> list[ObjectiveVector]:
    """Deduplicated non-dominated subset, sorted lexicographically."""
    uniq = sorted({tuple(v) for v in vectors})
    front: list[ObjectiveVector] = []
    # lexicographic order: a vector can only be dominated by an earlier one
    for v in uniq:
        if not any(weakly_dominates(f, v) for f in front):
            front.append(v)
    return front


class Archive:
    """Mutually non-dominated set of ``(solution, vector)`` pairs.

    Ties on the objective vector keep the first witness.
    """

    def __init__(self) -> None:
        self._entries: dict[ObjectiveVector, SolutionTuple] = {}

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self):
        return iter(self._entries.items())

    def __contains__(self, y) -> bool:
        return tuple(y) in self._entries

    def vectors(self) -> list[ObjectiveVector]:
        return sorted(self._entries)

    def entries(self) -> list[tuple[SolutionTuple, ObjectiveVector]]:
        return [(self._entries[y], y) for y in sorted(self._entries)]

    def insert(self, x: SolutionTuple, y: Sequence[int]) -> bool:
        """Insert ``(x, y)`` evicting every entry weakly dominated by ``y``.

        Returns False (and leaves the archive unchanged) when an existing entry
        weakly dominates ``y``.
        """
        y = tuple(y)
        for other in self._entries:
            if weakly_dominates(other, y):
                return False
        for other in [o for o in self._entries if weakly_dominates(y, o)]:
            del self._entries[other]
        self._entries[y] = tuple(x)
        return True

    def copy(self) -> Archive:
        a = Archive()
        a._entries = dict(self._entries)
        return a


def archive_insert(archive: Archive, x: SolutionTuple, y: Sequence[int]) -> tuple[Archive, bool]:
    """Functional form of :meth:`Archive.insert`; the input archive is not touched."""
    out = archive.copy()
    accepted = out.insert(x, y)
    return out, accepted


class Status(str, Enum):
    COMPLETE = "complete"
    TIMEOUT = "timeout-partial"
    ERROR = "error"


@dataclass
class Stats:
    sat_calls: int = 0
    cores: int = 0
    iterations: int = 0
    wall_time: float = 0.0
    _start: float = field(default_factory=time.perf_counter, repr=False)

    def stop(self) -> None:
        self.wall_time = time.perf_counter() - self._start

    def as_dict(self) -> dict:
        return {
            "sat_calls": self.sat_calls,
            "cores": self.cores,
            "iterations": self.iterations,
            "wall_time": self.wall_time,
        }


@dataclass
class ParetoResult:
    """Engine output. Vectors in ``img_front`` include objective offsets."""

    arg_front: list[SolutionTuple]
    img_front: list[ObjectiveVector]
    status: Status
    stats: Stats
    offsets: tuple[int, ...] = ()

    @classmethod
    def from_archive(cls, archive: Archive, status: Status, stats: Stats, offsets) -> ParetoResult:
        """Build a result from offset-free archive vectors, sorted by vector."""
        offsets = tuple(offsets)
        arg, img = [], []
        for x, y in archive.entries():
            arg.append(x)
            img.append(tuple(v + o for v, o in zip(y, offsets)))
        return cls(arg, img, status, stats, offsets)

    @property
    def complete(self) -> bool:
        return self.status is Status.COMPLETE

    def to_json(self) -> dict:
        return {
            "status": self.status.value,
            "img_front": [list(y) for y in self.img_front],
            "arg_front": ["".join("1" if b else "0" for b in x) for x in self.arg_front],
            "offsets": list(self.offsets),
        }
