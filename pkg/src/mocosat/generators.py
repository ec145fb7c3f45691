"""Seeded instance generators: multi-objective set covering and random PB."""

from __future__ import annotations

import random

from .model import MocoInstance, Objective, PbConstraint


class GenerationError(RuntimeError):
    pass


def gen_set_cover(n_elements: int, n_sets: int, m: int = 2, density: float = 0.4,
                  weight_max: int = 5, seed: int = 0, max_tries: int = 1000) -> MocoInstance:
    """Multi-objective set covering.

    Variable ``j`` selects set ``j``. Each element must be covered by a
    selected set; each objective sums one cost per selected set, drawn
    uniformly from ``1..weight_max``. The incidence matrix is re-drawn until
    every element is coverable.
    """
    if not 0 < density <= 1:
        raise ValueError("density must be in (0, 1]")
    if n_elements < 1 or n_sets < 1 or m < 1 or weight_max < 1:
        raise ValueError("sizes must be positive")
    rng = random.Random(seed)
    for _ in range(max_tries):
        cover = [[j for j in range(1, n_sets + 1) if rng.random() < density] for _ in range(n_elements)]
        if all(cover):
            break
    else:
        raise GenerationError(f"no coverable matrix after {max_tries} draws")
    constraints = [PbConstraint.clause(sets) for sets in cover]
    objectives = [
        Objective([(rng.randint(1, weight_max), j) for j in range(1, n_sets + 1)]) for _ in range(m)
    ]
    return MocoInstance(n_sets, constraints, objectives)


def gen_random_pb(n_vars: int, m: int = 2, n_constraints: int = 3, weight_max: int = 5,
                  seed: int = 0, neg_prob: float = 0.2) -> MocoInstance:
    """Random PB instance: short clauses plus small weighted constraints.

    Objective literals are negated with probability ``neg_prob``, which
    exercises normalization offsets.
    """
    rng = random.Random(seed)
    constraints = []
    for _ in range(n_constraints):
        size = rng.randint(2, min(4, n_vars))
        vs = rng.sample(range(1, n_vars + 1), size)
        lits = [v if rng.random() < 0.7 else -v for v in vs]
        kind = rng.random()
        if kind < 0.5:
            constraints.append(PbConstraint.clause(lits))
        elif kind < 0.8:
            terms = [(rng.randint(1, 3), l) for l in lits]
            bound = rng.randint(1, max(1, sum(w for w, _ in terms) // 2))
            constraints.append(PbConstraint(terms, ">=", bound))
        else:
            terms = [(1, l) for l in lits]
            constraints.append(PbConstraint(terms, "<=", rng.randint(1, size - 1)))
    objectives = []
    for _ in range(m):
        terms = []
        for v in range(1, n_vars + 1):
            if rng.random() < 0.8:
                terms.append((rng.randint(1, weight_max), -v if rng.random() < neg_prob else v))
        objectives.append(Objective(terms))
    return MocoInstance(n_vars, constraints, objectives)
