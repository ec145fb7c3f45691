"""Exact SAT-based solvers for multi-objective combinatorial optimization."""

from .common import EngineConfig
from .engines import ENGINES, get_engine
from .model import (
    Archive,
    MocoInstance,
    Objective,
    ParetoResult,
    PbConstraint,
    Status,
    is_lower_bound_set,
    strictly_dominates,
    weakly_dominates,
)
from .oracle import exact_front

__all__ = [
    "ENGINES",
    "Archive",
    "EngineConfig",
    "MocoInstance",
    "Objective",
    "ParetoResult",
    "PbConstraint",
    "Status",
    "exact_front",
    "get_engine",
    "is_lower_bound_set",
    "strictly_dominates",
    "weakly_dominates",
]

__version__ = "0.1.0"
