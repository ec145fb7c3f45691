"""Configuration and progress-callback plumbing shared by the engines."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Any, Callable, Optional

Callback = Callable[[str, dict[str, Any]], None]


@dataclass
class EngineConfig:
    """Knobs shared by all engines.

    Attributes:
        anytime_strict: keep the public archive Pareto-optimal at every
            instant by staging inner-loop solutions.
        use_my_next: fence walls follow attainable objective values; when
            False the fence steps by one unit.
        strat_ratio: start a new weight partition when consecutive distinct
            weights differ by more than this factor.
        strat_cap: maximum number of literals per partition.
        seed: SAT solver seed.
        timeout: wall-clock budget in seconds (None for unlimited).
        minimize_cores: shrink feasibility cores in the hitting-set engine.
        max_iterations: hard cap on hitting-set relaxation rounds.
    """

    anytime_strict: bool = False
    use_my_next: bool = True
    strat_ratio: float = 8.0
    strat_cap: int = 16
    seed: int = 0
    timeout: Optional[float] = None
    minimize_cores: bool = True
    max_iterations: Optional[int] = None

    def deadline(self) -> Optional[float]:
        if self.timeout is None:
            return None
        return time.monotonic() + self.timeout


def expired(deadline: Optional[float]) -> bool:
    return deadline is not None and time.monotonic() >= deadline


def notify(callback: Optional[Callback], event: str, **data: Any) -> None:
    if callback is not None:
        callback(event, data)
