import csv
import json

import pytest

from mocosat import bench
from mocosat.common import EngineConfig
from mocosat.engines import ENGINES
from mocosat.generators import gen_set_cover

GOLDEN_HEADER = "instance,engine,status,wall_time,sat_calls,cores,front_size,hv"
TIMING = {"wall_time"}

SC = {"generator": "set-cover", "n_elements": 5, "n_sets": 9, "m": 2, "seed": 3}


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_two_engines_complete_with_full_hv(tmp_path):
    reports = bench.run_suite({"instances": [SC], "engines": ["core-guided", "hitting-sets"], "timeout": 60})
    assert [r.status for r in reports] == ["complete", "complete"]
    assert all(r.hv == 1.0 for r in reports)
    assert reports[0].img_front == reports[1].img_front
    csv_path, json_path = bench.write_reports(reports, tmp_path)
    assert csv_path.read_text().splitlines()[0] == GOLDEN_HEADER
    doc = json.loads(json_path.read_text())
    assert doc[0]["trace"] and doc[0]["trace"][-1]["hv"] == 1.0


def test_timeout_zero_gives_partial_rows():
    reports = bench.run_suite({"instances": [SC], "engines": list(ENGINES), "timeout": 0})
    assert {r.status for r in reports} == {"timeout-partial"}
    assert all(0.0 <= r.hv <= 1.0 for r in reports)


def test_csv_deterministic_apart_from_timing(tmp_path):
    config = {"instances": [SC, {"generator": "random-pb", "n_vars": 8, "seed": 1}], "timeout": 60}
    rows = []
    for k in range(2):
        path, _ = bench.write_reports(bench.run_suite(config), tmp_path / str(k))
        rows.append([{c: v for c, v in r.items() if c not in TIMING} for r in read_rows(path)])
    assert rows[0] == rows[1]
    assert len(rows[0]) == 2 * len(ENGINES)


def test_engine_failure_becomes_error_row(monkeypatch):
    def broken(instance, config=None, callback=None):
        raise RuntimeError("boom")

    monkeypatch.setitem(ENGINES, "broken", broken)
    inst = gen_set_cover(4, 6, seed=0)
    report = bench.run_one(inst, "x", "broken", EngineConfig(timeout=10), memory_mb=None)
    assert report.status == "error"
    assert report.front_size == 0


def test_killed_run_keeps_last_snapshot(monkeypatch):
    def stubborn(instance, config=None, callback=None):
        x = (True,) * instance.n_vars
        callback("archive", {"vectors": [instance.costs(x)], "solutions": [x]})
        while True:
            pass

    monkeypatch.setitem(ENGINES, "stubborn", stubborn)
    monkeypatch.setattr(bench, "KILL_GRACE", 0.2)
    inst = gen_set_cover(4, 6, seed=0)
    report = bench.run_one(inst, "x", "stubborn", EngineConfig(timeout=0.1), memory_mb=None)
    assert report.status == "timeout-partial"
    assert report.img_front == [list(inst.evaluate((True,) * 6))]


def test_unknown_engine_and_generator():
    with pytest.raises(KeyError):
        bench.run_suite({"instances": [], "engines": ["nope"]})
    with pytest.raises(ValueError):
        bench.run_suite({"instances": [{"generator": "nope"}], "engines": ["core-guided"]})
