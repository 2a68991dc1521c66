"""Run the default verification campaign and write JSON and CSV reports.

    python3 scripts/run_campaign.py --out reports/ --workers 1
"""

import argparse
import sys
import time
from pathlib import Path

from hindman_lab.claims import ClaimConfig
from hindman_lab.report import DEFAULT_CAMPAIGN, exit_status, run_campaign, summary_lines, to_csv, write_json


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("reports"))
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--only", help="comma-separated coloring names, e.g. c31,c34")
    args = ap.parse_args(argv)

    runs = DEFAULT_CAMPAIGN
    if args.only:
        keep = set(args.only.split(","))
        runs = tuple(r for r in runs if r[0].split(":")[0] in keep)
    start = time.perf_counter()
    doc = run_campaign(runs, ClaimConfig(), workers=args.workers)
    elapsed = time.perf_counter() - start

    args.out.mkdir(parents=True, exist_ok=True)
    write_json(doc, args.out / "campaign.json")
    (args.out / "campaign.csv").write_text(to_csv(doc))
    print("\n".join(summary_lines(doc)))
    print(f"{len(runs)} runs in {elapsed:.1f}s; reports in {args.out}/")
    return exit_status(doc)


if __name__ == "__main__":
    sys.exit(main())
