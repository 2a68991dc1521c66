"""``hindman-lab`` command line.

Exit codes: 0 ok, 1 violated, 2 usage or configuration error, 3 universe
overflow, 4 exhausted.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path
from typing import Optional, Sequence

from .cesim import CatalogError, load_catalog
from .claims import ClaimConfig, default_catalog_for
from .colorings import ColoringIdError, json_tracer, make_coloring, parse_id
from .finset import UniverseOverflow, format_set, parse_set
from .matcher import (CertificateError, IPSpace, MonochromaticFamily, NoWitness, SearchBudget,
                      UniverseExhausted, brute_force_mono, find_full_matcher, find_half_matcher,
                      full_match_or_avoid, half_match_dichotomy, hindman_search_detailed,
                      is_monochromatic_family)
from .ipalg import format_family
from . import report

EXIT_OK, EXIT_VIOLATED, EXIT_USAGE, EXIT_OVERFLOW, EXIT_EXHAUSTED = 0, 1, 2, 3, 4
SEARCH_WIDTH = 20  # largest universe the exhaustive searches will enumerate


class UsageError(ValueError):
    pass


def parse_bound(text: str) -> int:
    """``1024``, ``2^10`` or ``2**10``."""
    m = re.fullmatch(r"\s*(\d+)\s*(?:(?:\^|\*\*)\s*(\d+))?\s*", text)
    if not m:
        raise argparse.ArgumentTypeError(f"bad bound {text!r}")
    base = int(m.group(1))
    value = base ** int(m.group(2)) if m.group(2) else base
    if value < 1:
        raise argparse.ArgumentTypeError("bound must be positive")
    return value


def parse_codes(text: str) -> list[int]:
    """A code, an inclusive range ``a..b``, or a set literal ``{1,4}``."""
    text = text.strip()
    if text.startswith("{"):
        return [int(parse_set(text))]
    m = re.fullmatch(r"(\d+)\.\.(\d+)", text)
    if m:
        lo, hi = int(m.group(1)), int(m.group(2))
        if lo > hi:
            raise UsageError(f"empty range {text}")
        return list(range(lo, hi + 1))
    if text.isdigit():
        return [int(text)]
    raise UsageError(f"cannot read codes from {text!r}")


def _coloring(args, cid: str, trace: bool = False):
    name, _ = parse_id(cid)
    catalog = args.catalog or default_catalog_for(cid)
    tracer = json_tracer(sys.stderr) if trace else None
    return make_coloring(cid, catalog if name.startswith("c3") else None, trace=tracer), catalog


def _emit_json(args, payload) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if args.json:
        Path(args.json).write_text(text)
    else:
        sys.stdout.write(text)


def _budget(args) -> SearchBudget:
    bound = args.bound or (1 << 10)
    if bound > 1 << SEARCH_WIDTH:
        raise UniverseOverflow(f"search universe 2^{bound.bit_length() - 1} exceeds 2^{SEARCH_WIDTH}")
    kw = {"universe_bound": bound}
    if args.budget:
        kw["depth"] = args.budget
    if getattr(args, "scale", None):
        kw["ip_scale"] = args.scale
    if kw.get("depth", 8) < 2 * kw.get("ip_scale", 2):
        raise UsageError("budget must be at least twice the ip scale")
    return SearchBudget(**kw)


# ---------------------------------------------------------------------------
# subcommands


def cmd_color(args) -> int:
    if len(args.items) == 1:
        catalog, spec = args.catalog, args.items[0]
    elif len(args.items) == 2:
        catalog, spec = args.items
    else:
        raise UsageError("color takes ID [CATALOG] CODES")
    if catalog:
        args.catalog = catalog
    col, _ = _coloring(args, args.id, args.trace)
    for code in parse_codes(spec):
        print(f"{code}, {format_set(code)}, {col.color(code)}")
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = ClaimConfig(bound=args.bound)
    runs = []
    for cid in args.ids:
        parse_id(cid)
        catalog = args.catalog or default_catalog_for(cid)
        load_catalog(catalog)  # fail early on a bad catalog
        runs.append((cid, catalog))
    only = args.claims.split(",") if args.claims else None
    doc = report.run_campaign(runs, cfg, workers=args.workers, only=only)
    if args.json:
        report.write_json(doc, args.json)
    if args.csv:
        Path(args.csv).write_text(report.to_csv(doc))
    print("\n".join(report.summary_lines(doc)))
    return report.exit_status(doc)


def cmd_search(args) -> int:
    budget = _budget(args)
    col, _ = _coloring(args, args.id)
    if args.method == "brute":
        fam = brute_force_mono(col, args.m, budget.universe_bound)
    else:
        fam = hindman_search_detailed(col, 2, args.m, budget).family
    if fam is None:
        print("none within bound")
        return EXIT_OK
    verified = is_monochromatic_family(fam, col)
    print(f"{format_family(fam)} color={col.color(int(fam[0]))} verified={str(verified).lower()}")
    return EXIT_OK if verified else EXIT_VIOLATED


def cmd_match(args) -> int:
    budget = _budget(args)
    col, _ = _coloring(args, args.id)
    space = IPSpace.singletons(budget.universe_bound)
    r = args.r or getattr(col, "arity", 2)
    if args.kind == "half":
        if args.extract:
            res = find_half_matcher(space, col, r, budget)
        else:
            given = [int(parse_set(s)) for s in args.given] if args.given is not None else [space.least()]
            res = half_match_dichotomy(space, given, col, budget)
        cert = res.certificate.to_dict()
    elif args.kind == "full":
        res = find_full_matcher(space, col, r, budget) if not args.avoid else full_match_or_avoid(space, col, r, budget)
        cert = res.certificate.to_dict()
        if isinstance(res, MonochromaticFamily):
            cert["color"] = res.color
    else:
        res = hindman_search_detailed(col, r, args.m, budget)
        cert = res.certificate(col, budget)
    _emit_json(args, cert)
    return EXIT_OK


def cmd_replay(args) -> int:
    doc = report.read_json(args.report)
    results = report.replay(doc)
    if not results:
        print("no violated claims to replay")
        return EXIT_OK
    for r in results:
        state = "reproduced" if r["reproduced"] else "NOT reproduced"
        print(f"{r['coloring']} {r['catalog']} {r['claim']}: {state} "
              f"{json.dumps(r['counterexample'], sort_keys=True)}")
    # a reproduced violation is still a violation; a diverging one means the
    # report does not match this code
    return EXIT_VIOLATED if all(r["reproduced"] for r in results) else EXIT_USAGE


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--catalog", help="catalog JSON file or builtin:NAME")
    common.add_argument("--bound", type=parse_bound, help="universe bound: N, 2^N or 2**N")
    common.add_argument("--budget", type=int, help="search depth for the matcher")
    common.add_argument("--json", metavar="PATH", help="write JSON output here")
    common.add_argument("--trace", action="store_true", help="log coloring decisions to stderr")

    p = argparse.ArgumentParser(prog="hindman-lab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("color", parents=[common], help="print colors of codes")
    c.add_argument("id")
    c.add_argument("items", nargs="+", metavar="[CATALOG] CODES", help="code, a..b, or {1,4}")
    c.set_defaults(func=cmd_color)

    v = sub.add_parser("verify", parents=[common], help="run claim suites")
    v.add_argument("ids", nargs="+")
    v.add_argument("--workers", type=int, default=1)
    v.add_argument("--csv", metavar="PATH")
    v.add_argument("--claims", help="comma-separated claim ids to run")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("search", parents=[common], help="find a monochromatic family")
    s.add_argument("id")
    s.add_argument("-m", type=int, default=2)
    s.add_argument("--method", choices=("brute", "hindman"), default="brute")
    s.set_defaults(func=cmd_search)

    m = sub.add_parser("match", parents=[common], help="run a matcher and print its certificate")
    m.add_argument("kind", choices=("half", "full", "hindman"))
    m.add_argument("id")
    m.add_argument("-r", type=int, help="number of colors (default: the coloring's arity)")
    m.add_argument("-m", type=int, default=2)
    m.add_argument("--scale", type=int, help="ip scale: atoms needed for an infinite stand-in")
    m.add_argument("--given", nargs="*", help="for half: the family B (default: the least atom)")
    m.add_argument("--extract", action="store_true", help="for half: run the full half-matcher extraction")
    m.add_argument("--avoid", action="store_true", help="for full: stop at the first full-or-avoid step")
    m.set_defaults(func=cmd_match)

    r = sub.add_parser("replay", help="rerun violated claims of a report")
    r.add_argument("report")
    r.set_defaults(func=cmd_replay)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "search" and args.m < 1:
        parser.error("m must be positive")
    try:
        return args.func(args)
    except (CertificateError, NoWitness) as exc:
        print(f"violated: {exc}", file=sys.stderr)
        return EXIT_VIOLATED
    except (CatalogError, ColoringIdError, UsageError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UniverseOverflow as exc:
        print(f"overflow: {exc}", file=sys.stderr)
        return EXIT_OVERFLOW
    except UniverseExhausted as exc:
        print(f"exhausted: {exc}", file=sys.stderr)
        return EXIT_EXHAUSTED


if __name__ == "__main__":
    sys.exit(main())
