"""Name -> engine lookup used by the CLI and the benchmark runner."""

from __future__ import annotations

from typing import Callable, Optional

from . import hitting, pminimal, unsatsat
from .common import Callback, EngineConfig
from .model import MocoInstance, ParetoResult

Engine = Callable[[MocoInstance, Optional[EngineConfig], Optional[Callback]], ParetoResult]

ENGINES: dict[str, Engine] = {
    "core-guided": unsatsat.solve,
    "core-guided-strat": unsatsat.stratified_solve,
    "hitting-sets": hitting.solve,
    "p-minimal": pminimal.solve,
}


def get_engine(name: str) -> Engine:
    try:
        return ENGINES[name]
    except KeyError:
        raise KeyError(f"unknown engine {name!r}; choose from {', '.join(ENGINES)}") from None
