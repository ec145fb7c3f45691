"""Hypervolume and reference-front construction for front approximations."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .model import ContractError, ObjectiveVector, nondominated


@dataclass
class ReferenceFront:
    front: list[ObjectiveVector]
    ideal: Optional[ObjectiveVector]
    ref_point: Optional[ObjectiveVector]


@dataclass
class HvValue:
    raw: float
    normalized: float
    exact: bool = True


def reference_front(fronts: Iterable[Iterable[Sequence[int]]]) -> ReferenceFront:
    """Non-dominated union of several fronts with its normalization bounds.

    The ideal point is the componentwise minimum of the union; the reference
    point is the componentwise maximum plus one unit.
    """
    vectors = [tuple(v) for f in fronts for v in f]
    if vectors and len({len(v) for v in vectors}) != 1:
        raise ContractError("fronts mix vector dimensions")
    front = nondominated(vectors)
    if not front:
        return ReferenceFront([], None, None)
    arr = np.array(front)
    ideal = tuple(int(v) for v in arr.min(axis=0))
    ref = tuple(int(v) + 1 for v in arr.max(axis=0))
    return ReferenceFront(front, ideal, ref)


def _clip(front, ref_point) -> list[tuple]:
    ref = tuple(ref_point)
    out = []
    for y in front:
        y = tuple(min(a, r) for a, r in zip(y, ref))
        if all(a < r for a, r in zip(y, ref)):
            out.append(y)
    return out


def hv_2d(front: Iterable[Sequence[float]], ref_point: Sequence[float]) -> float:
    """Sweep-line hypervolume in two dimensions (minimization)."""
    pts = sorted(_clip(front, ref_point))
    volume = 0.0
    best_y = ref_point[1]
    for x, y in pts:
        if y < best_y:
            volume += (ref_point[0] - x) * (best_y - y)
            best_y = y
    return volume


def hv_sweep(front: Iterable[Sequence[float]], ref_point: Sequence[float]) -> float:
    """Dimension sweep down to the two-objective sweep line."""
    pts = _clip(front, ref_point)
    ref = tuple(ref_point)
    if len(ref) == 2:
        return hv_2d(pts, ref)
    if len(ref) == 1:
        return float(ref[0] - min(p[0] for p in pts)) if pts else 0.0
    pts.sort(key=lambda p: p[-1])
    volume = 0.0
    for j, p in enumerate(pts):
        upper = pts[j + 1][-1] if j + 1 < len(pts) else ref[-1]
        if upper > p[-1]:
            volume += (upper - p[-1]) * hv_sweep([q[:-1] for q in pts[: j + 1]], ref[:-1])
    return volume


def hv_slicing(front: Iterable[Sequence[float]], ref_point: Sequence[float]) -> float:
    """Hypervolume by recursive slicing along the last objective."""
    pts = _clip(front, ref_point)
    return _slice(pts, tuple(ref_point))


def _slice(pts: list[tuple], ref: tuple) -> float:
    if not pts:
        return 0.0
    d = len(ref)
    if d == 1:
        return float(ref[0] - min(p[0] for p in pts))
    pts = sorted(pts, key=lambda p: p[-1])
    volume = 0.0
    active: list[tuple] = []
    for j, p in enumerate(pts):
        active.append(p[:-1])
        upper = pts[j + 1][-1] if j + 1 < len(pts) else ref[-1]
        depth = upper - p[-1]
        if depth > 0:
            active = nondominated(active)
            volume += depth * _slice(active, ref[:-1])
    return volume


def hv_monte_carlo(front: Iterable[Sequence[float]], ref_point: Sequence[float],
                   lower: Sequence[float], samples: int = 10**6, seed: int = 0) -> tuple[float, float]:
    """Monte Carlo estimate of the hypervolume and its standard error.

    Samples uniformly from the box ``[lower, ref_point]``.
    """
    pts = np.array(_clip(front, ref_point), dtype=float)
    lo = np.asarray(lower, dtype=float)
    hi = np.asarray(ref_point, dtype=float)
    box = float(np.prod(hi - lo))
    if len(pts) == 0 or box == 0:
        return 0.0, 0.0
    rng = np.random.default_rng(seed)
    hits = 0
    done = 0
    while done < samples:
        k = min(200_000, samples - done)
        s = rng.uniform(lo, hi, size=(k, len(hi)))
        dom = np.zeros(k, dtype=bool)
        for p in pts:
            dom |= np.all(s >= p, axis=1)
        hits += int(dom.sum())
        done += k
    frac = hits / samples
    return box * frac, box * np.sqrt(frac * (1 - frac) / samples)


def raw_hypervolume(front: Iterable[Sequence[float]], ref_point: Sequence[float]) -> tuple[float, bool]:
    """Exact volume for up to four objectives, else a Monte Carlo estimate."""
    front = list(front)
    m = len(ref_point)
    if m <= 4:
        return hv_sweep(front, ref_point), True
    lower = np.min(np.array(front), axis=0) if front else ref_point
    return hv_monte_carlo(front, ref_point, lower)[0], False


def hypervolume(front: Iterable[Sequence[int]], ref_point: Sequence[int],
                ideal: Optional[Sequence[int]] = None) -> HvValue:
    """Raw hypervolume and its share of the box ``[ideal, ref_point]``.

    ``ideal`` defaults to the componentwise minimum of ``front``. A box with
    zero extent in some dimension normalizes to 1 when the raw volume is
    positive and to 0 otherwise.
    """
    front = [tuple(v) for v in front]
    if ideal is None:
        ideal = tuple(np.min(np.array(front), axis=0)) if front else tuple(ref_point)
    raw, exact = raw_hypervolume(front, ref_point)
    box = float(np.prod([r - i for r, i in zip(ref_point, ideal)]))
    if box <= 0:
        return HvValue(raw, 1.0 if raw > 0 else 0.0, exact)
    return HvValue(raw, min(1.0, max(0.0, raw / box)), exact)


def relative_hypervolume(front: Iterable[Sequence[int]], ref: ReferenceFront) -> float:
    """Hypervolume of ``front`` as a fraction of the reference front's.

    Both use the reference point of ``ref``; an exact front scores 1.
    """
    front = list(front)
    if ref.ref_point is None:
        return 1.0 if not front else 0.0
    total, _ = raw_hypervolume(ref.front, ref.ref_point)
    if total == 0:
        return 1.0
    mine, _ = raw_hypervolume(front, ref.ref_point)
    return min(1.0, max(0.0, mine / total))
