"""Verification campaigns: run claim suites, assemble versioned reports, replay violations."""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .claims import EXHAUSTED, VERIFIED, VIOLATED, ClaimConfig, _combine, claims_for, run_claim

REPORT_VERSION = 1
TIMING_FIELDS = ("wall_time",)
CSV_FIELDS = ("coloring", "catalog", "claim", "bound", "status", "wall_time", "data", "counterexample")

# every builtin catalog for the first coloring, the sized one for the blocked
# decompositions, and both relation lists for the Sigma-2 coloring
DEFAULT_CAMPAIGN: tuple[tuple[str, str], ...] = (
    ("c31", "builtin:default"), ("c31", "builtin:mixed"), ("c31", "builtin:sized"),
    ("c31", "builtin:singletons"), ("c31", "builtin:finite"),
    ("c32:k=1", "builtin:sized"), ("c32:k=2", "builtin:sized"),
    ("c33", "builtin:default"), ("c33", "builtin:mixed"),
    ("c34", "builtin:default"), ("c34", "builtin:mixed"),
)


def _task(args: tuple) -> dict:
    cid, catalog, claim, cfg = args
    return run_claim(cid, catalog, claim, cfg)


def run_tasks(tasks: Sequence[tuple], workers: int = 1) -> list[dict]:
    """Run ``(cid, catalog, claim, cfg)`` tasks; results keep task order."""
    if workers <= 1 or len(tasks) <= 1:
        return [_task(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_task, tasks))


def run_campaign(runs: Iterable[tuple[str, str]], cfg: ClaimConfig = ClaimConfig(), workers: int = 1,
                 only: Optional[Sequence[str]] = None) -> dict:
    """Run every claim of every ``(coloring id, catalog ref)`` pair.

    ``only`` restricts to the named claims.  The document is identical for any
    worker count apart from the wall-time fields.
    """
    runs = list(runs)
    tasks = []
    for cid, catalog in runs:
        for claim in claims_for(cid):
            if only is None or claim in only:
                tasks.append((cid, catalog, claim, cfg))
    records = run_tasks(tasks, workers)
    out_runs = []
    pos = 0
    for cid, catalog in runs:
        n = sum(1 for t in tasks if t[0] == cid and t[1] == catalog)
        mine, pos = records[pos:pos + n], pos + n
        out_runs.append({
            "coloring": mine[0]["coloring"] if mine else cid,
            "catalog": catalog,
            "claims": mine,
            "status": _combine(r["status"] for r in mine),
        })
    return {
        "report_version": REPORT_VERSION,
        "config": cfg.to_dict(),
        "runs": out_runs,
        "status": _combine(r["status"] for r in out_runs),
    }


def records(doc: dict) -> list[dict]:
    return [rec for run in doc["runs"] for rec in run["claims"]]


def exit_status(doc: dict) -> int:
    """0 ok, 1 some claim violated, 4 every claim exhausted."""
    recs = records(doc)
    if any(r["status"] == VIOLATED for r in recs):
        return 1
    if recs and all(r["status"] == EXHAUSTED for r in recs):
        return 4
    return 0


def strip_timing(obj):
    if isinstance(obj, dict):
        return {k: strip_timing(v) for k, v in obj.items() if k not in TIMING_FIELDS}
    if isinstance(obj, list):
        return [strip_timing(v) for v in obj]
    return obj


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def write_json(doc: dict, path: str | Path) -> None:
    Path(path).write_text(dumps(doc))


def read_json(path: str | Path) -> dict:
    doc = json.loads(Path(path).read_text())
    if doc.get("report_version") != REPORT_VERSION:
        raise ValueError(f"unsupported report version {doc.get('report_version')!r}")
    return doc


def to_csv(doc: dict) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    w.writeheader()
    for rec in records(doc):
        row = {k: rec.get(k) for k in CSV_FIELDS}
        row["data"] = json.dumps(rec.get("data"), sort_keys=True)
        row["counterexample"] = json.dumps(rec.get("counterexample"), sort_keys=True)
        w.writerow(row)
    return buf.getvalue()


def config_from(doc: dict) -> ClaimConfig:
    return ClaimConfig(**doc["config"])


def replay(doc: dict) -> list[dict]:
    """Rerun each violated claim and compare its counterexample with the report."""
    cfg = config_from(doc)
    out = []
    for rec in records(doc):
        if rec["status"] != VIOLATED:
            continue
        again = run_claim(rec["coloring"], rec["catalog"], rec["claim"], cfg)
        same = again["status"] == VIOLATED and again["counterexample"] == rec["counterexample"]
        out.append({"coloring": rec["coloring"], "catalog": rec["catalog"], "claim": rec["claim"],
                    "reproduced": same, "counterexample": again["counterexample"]})
    return out


def summary_lines(doc: dict) -> list[str]:
    lines = []
    for run in doc["runs"]:
        for rec in run["claims"]:
            extra = ""
            if rec["status"] == VIOLATED:
                extra = " " + json.dumps(rec["counterexample"], sort_keys=True)
            lines.append(f"{rec['coloring']:<18} {rec['catalog']:<20} {rec['claim']:<26} {rec['status']}{extra}")
    lines.append(f"overall: {doc['status']}")
    return lines


__all__ = ["CSV_FIELDS", "DEFAULT_CAMPAIGN", "REPORT_VERSION", "VERIFIED", "config_from", "dumps",
           "exit_status", "read_json", "records", "replay", "run_campaign", "run_tasks", "strip_timing",
           "summary_lines", "to_csv", "write_json"]
