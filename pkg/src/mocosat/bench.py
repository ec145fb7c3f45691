"""Benchmark runner: engines x instances under time and memory limits.

Each run happens in a forked child. The child streams every archive change
to the parent, so a run that has to be killed still reports the solutions
it had found. After all runs of an instance finish, their fronts are merged
into a reference front and every run gets a hypervolume relative to it.
"""

from __future__ import annotations

import csv
import json
import logging
import multiprocessing as mp
import time
import traceback
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Optional

from .common import EngineConfig
from .engines import ENGINES, get_engine
from .generators import gen_random_pb, gen_set_cover
from .metrics import reference_front, relative_hypervolume
from .model import MocoInstance, Status, nondominated
from .opb import read_instance

log = logging.getLogger(__name__)

CSV_COLUMNS = ["instance", "engine", "status", "wall_time", "sat_calls", "cores", "front_size", "hv"]
DEFAULT_TIMEOUT = 3600.0
DEFAULT_MEMORY_MB = 10 * 1024
KILL_GRACE = 5.0


@dataclass
class RunReport:
    instance: str
    engine: str
    status: str
    wall_time: float
    sat_calls: int
    cores: int
    front_size: int
    hv: float = 0.0
    img_front: list = field(default_factory=list)
    arg_front: list = field(default_factory=list)
    trace: list = field(default_factory=list)

    def row(self) -> dict[str, Any]:
        return {k: getattr(self, k) for k in CSV_COLUMNS}


def _limit_memory(memory_mb: Optional[int]) -> None:
    if not memory_mb:
        return
    try:
        import resource

        limit = int(memory_mb) * 1024 * 1024
        resource.setrlimit(resource.RLIMIT_AS, (limit, limit))
    except (ImportError, ValueError, OSError):
        log.warning("could not apply a %s MB memory cap", memory_mb)


def _child(conn, instance: MocoInstance, engine: str, config: EngineConfig, memory_mb) -> None:
    _limit_memory(memory_mb)
    start = time.perf_counter()

    def callback(event, data):
        if event == "archive" and "solutions" in data:
            conn.send(("snap", time.perf_counter() - start, [list(x) for x in data["solutions"]]))

    try:
        result = get_engine(engine)(instance, config, callback)
        conn.send(("done", result.status.value, result.stats.as_dict(),
                   [list(x) for x in result.arg_front]))
    except MemoryError:
        conn.send(("error", "memory limit exceeded"))
    except Exception:  # noqa: BLE001 - any engine failure becomes an error row
        conn.send(("error", traceback.format_exc()))
    finally:
        conn.close()


def run_one(instance: MocoInstance, name: str, engine: str, config: EngineConfig,
            memory_mb: Optional[int] = DEFAULT_MEMORY_MB) -> RunReport:
    """Run one engine on one instance in a child process."""
    ctx = mp.get_context("fork")
    parent, child = ctx.Pipe(duplex=False)
    proc = ctx.Process(target=_child, args=(child, instance, engine, config, memory_mb), daemon=True)
    t0 = time.perf_counter()
    proc.start()
    child.close()
    limit = None if config.timeout is None else config.timeout + KILL_GRACE + 0.1 * config.timeout
    trace: list[tuple[float, list]] = []
    last_solutions: list = []
    outcome = None
    while outcome is None:
        remaining = None if limit is None else limit - (time.perf_counter() - t0)
        if remaining is not None and remaining <= 0:
            break
        try:
            ready = parent.poll(remaining if remaining is not None else 1.0)
        except (EOFError, OSError):
            break
        if not ready:
            if not proc.is_alive() and not parent.poll():
                break
            continue
        try:
            msg = parent.recv()
        except EOFError:
            break
        if msg[0] == "snap":
            trace.append((msg[1], msg[2]))
            last_solutions = msg[2]
        else:
            outcome = msg
    if proc.is_alive():
        proc.kill()
    proc.join()
    wall = time.perf_counter() - t0

    if outcome is not None and outcome[0] == "done":
        _, status, stats, arg = outcome
        solutions = arg
    elif outcome is not None:
        status, stats, solutions = Status.ERROR.value, {}, []
        log.error("%s on %s failed: %s", engine, name, outcome[1])
    else:
        status, stats, solutions = Status.TIMEOUT.value, {}, last_solutions
    arg_front, img_front = _front_of(instance, solutions)
    return RunReport(
        instance=name,
        engine=engine,
        status=status,
        wall_time=round(wall, 6),
        sat_calls=int(stats.get("sat_calls", 0)),
        cores=int(stats.get("cores", 0)),
        front_size=len(img_front),
        img_front=img_front,
        arg_front=arg_front,
        trace=[(t, _front_of(instance, s)[1]) for t, s in trace],
    )


def _front_of(instance: MocoInstance, solutions) -> tuple[list[str], list[list[int]]]:
    best: dict[tuple, str] = {}
    for x in solutions:
        y = instance.evaluate(x)
        best.setdefault(y, "".join("1" if b else "0" for b in x))
    img = nondominated(best)
    return [best[y] for y in img], [list(y) for y in img]


def _load_instances(items: list) -> list[tuple[str, MocoInstance]]:
    out = []
    for item in items:
        if isinstance(item, str):
            out.append((item, read_instance(item)))
            continue
        kind = item.get("generator")
        params = {k: v for k, v in item.items() if k not in ("generator", "name")}
        if kind == "set-cover":
            inst = gen_set_cover(**params)
        elif kind == "random-pb":
            inst = gen_random_pb(**params)
        else:
            raise ValueError(f"unknown generator {kind!r}")
        name = item.get("name") or f"{kind}-" + "-".join(f"{k}{v}" for k, v in sorted(params.items()))
        out.append((name, inst))
    return out


def score(reports: list[RunReport]) -> None:
    """Fill in hypervolumes and traces against each instance's reference front."""
    by_instance: dict[str, list[RunReport]] = {}
    for r in reports:
        by_instance.setdefault(r.instance, []).append(r)
    for runs in by_instance.values():
        ref = reference_front(r.img_front for r in runs if r.status != Status.ERROR.value)
        for r in runs:
            r.hv = relative_hypervolume(r.img_front, ref)
            r.trace = [{"t": round(t, 6), "hv": relative_hypervolume(front, ref)} for t, front in r.trace]


def run_suite(config: dict) -> list[RunReport]:
    """Run every configured engine on every configured instance.

    Recognized keys: ``instances`` (paths or generator dicts), ``engines``,
    ``timeout`` (seconds, default 3600), ``memory_mb`` (default 10240),
    ``seed``.
    """
    engines = config.get("engines", list(ENGINES))
    for e in engines:
        get_engine(e)
    timeout = float(config.get("timeout", DEFAULT_TIMEOUT))
    memory_mb = config.get("memory_mb", DEFAULT_MEMORY_MB)
    seed = int(config.get("seed", 0))
    reports = []
    for name, inst in _load_instances(config.get("instances", [])):
        for e in engines:
            cfg = EngineConfig(seed=seed, timeout=timeout)
            log.info("running %s on %s", e, name)
            reports.append(run_one(inst, name, e, cfg, memory_mb))
    score(reports)
    return reports


def write_reports(reports: list[RunReport], out_dir: str | Path) -> tuple[Path, Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / "results.csv"
    with csv_path.open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for r in reports:
            writer.writerow(r.row())
    json_path = out / "results.json"
    json_path.write_text(json.dumps([asdict(r) for r in reports], indent=1) + "\n")
    return csv_path, json_path
