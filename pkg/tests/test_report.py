import csv
import io
import json

from hindman_lab.claims import ClaimConfig
from hindman_lab.report import (CSV_FIELDS, REPORT_VERSION, dumps, exit_status, read_json, records, replay,
                                run_campaign, strip_timing, to_csv, write_json)

CFG = ClaimConfig(bound=1 << 8, horizon=24, unique31_max=9, unique32_max=8, unique33_max=8,
                  stabilization_indices=3, polarity_indices=2, polarity_span=3, grid_p=6, grid_q=6,
                  transport_bits=7)
RUNS = [("c31", "builtin:singletons"), ("c33:flip=3", "builtin:default"), ("parity", "builtin:default")]


def test_campaign_shape_and_status():
    doc = run_campaign(RUNS, CFG)
    assert doc["report_version"] == REPORT_VERSION
    assert doc["config"]["bound"] == 1 << 8
    assert [r["coloring"] for r in doc["runs"]] == ["c31", "c33:flip=3", "parity"]
    assert doc["runs"][0]["status"] == "verified"
    assert doc["runs"][1]["status"] == "violated"
    assert doc["status"] == "violated" and exit_status(doc) == 1
    for rec in records(doc):
        assert set(rec) == {"claim", "coloring", "catalog", "bound", "status", "data", "counterexample",
                            "wall_time"}


def test_workers_do_not_change_report():
    one = run_campaign(RUNS, CFG, workers=1)
    two = run_campaign(RUNS, CFG, workers=2)
    assert dumps(strip_timing(one)) == dumps(strip_timing(two))


def test_only_filter_and_exit_codes():
    doc = run_campaign([("c31", "builtin:singletons")], CFG, only=["s31-definition"])
    assert [r["claim"] for r in records(doc)] == ["s31-definition"]
    assert exit_status(doc) == 0
    fake = {"runs": [{"claims": [{"status": "exhausted"}, {"status": "exhausted"}]}]}
    assert exit_status(fake) == 4


def test_json_csv_and_replay(tmp_path):
    doc = run_campaign(RUNS[1:2], CFG, only=["s33-definition", "s33-uniqueness"])
    path = tmp_path / "r.json"
    write_json(doc, path)
    back = read_json(path)
    assert back == json.loads(dumps(doc))
    rows = list(csv.DictReader(io.StringIO(to_csv(back))))
    assert len(rows) == 2 and list(rows[0]) == list(CSV_FIELDS)
    assert json.loads(rows[0]["counterexample"]) == back["runs"][0]["claims"][0]["counterexample"]
    replays = replay(back)
    assert replays and all(r["reproduced"] for r in replays)


def test_strip_timing_nested():
    assert strip_timing({"a": [{"wall_time": 1, "b": 2}], "wall_time": 3}) == {"a": [{"b": 2}]}
