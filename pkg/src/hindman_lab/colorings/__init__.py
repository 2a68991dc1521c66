"""Colorings addressable by string id.

Ids look like ``name[:key=value]...``.  Recognised names: ``c31``, ``c32``
(``k=K``, default from the catalog), ``c33``, ``c34``, ``const`` (``v=``),
``parity``, ``contains0``, ``random`` (``seed=``, ``bound=``).  Every id accepts
``flip=A+B+...``: the listed codes have their color inverted, which is how
fault-injection runs are named and replayed.
"""

from __future__ import annotations

from typing import Callable, Optional

from ..cesim import LoadedCatalog, load_catalog
from ..ipalg import constant, contains, parity, random_coloring
from .base import MultipleWitnessViolation, RecursiveColoring, induced_integer_coloring, json_tracer
from .c31 import Coloring31, color_31, witnesses_31
from .c32 import Coloring32, Decomposition, color_32, decompositions_32, witnesses_32
from .c33 import Coloring33, PrimaryDecomposition, color_33, polarity_33, primary_decomposition_33, witnesses_33
from .c34 import Coloring34, TrueWitness34, Witness34, color_34, default_cap, witness_34

RECURSIVE = ("c31", "c32", "c33", "c34")
SIMPLE = ("const", "parity", "contains0", "random")


class ColoringIdError(ValueError):
    pass


class SimpleColoring(RecursiveColoring):
    """A plain function wrapped so it shares memo, trace and flip handling."""

    def __init__(self, cid: str, fn: Callable[[int], int], arity: int = 2, **kw):
        super().__init__(**kw)
        self.cid = cid
        self.fn = fn
        self.arity = arity

    def rule(self, b: int) -> tuple[int, dict]:
        return self.fn(b), {}


def parse_id(cid: str) -> tuple[str, dict[str, str]]:
    name, *parts = cid.strip().split(":")
    opts: dict[str, str] = {}
    for part in parts:
        key, eq, value = part.partition("=")
        if not eq or not key or key in opts:
            raise ColoringIdError(f"bad option {part!r} in coloring id {cid!r}")
        opts[key] = value
    if name not in RECURSIVE + SIMPLE:
        raise ColoringIdError(f"unknown coloring {name!r}")
    return name, opts


def _int_opt(opts: dict, key: str, default: Optional[int], cid: str) -> Optional[int]:
    if key not in opts:
        return default
    try:
        return int(opts.pop(key))
    except ValueError:
        raise ColoringIdError(f"option {key} of {cid!r} must be an integer") from None


def canonical_id(name: str, opts: dict[str, int], flips: frozenset[int]) -> str:
    parts = [name] + [f"{k}={v}" for k, v in sorted(opts.items())]
    if flips:
        parts.append("flip=" + "+".join(str(f) for f in sorted(flips)))
    return ":".join(parts)


def make_coloring(cid: str, catalog: LoadedCatalog | str | None = None,
                  trace: Optional[Callable[[dict], None]] = None) -> RecursiveColoring:
    """Build the coloring named by ``cid`` over ``catalog``.

    The returned object's ``cid`` is the canonical form of the id.
    """
    name, opts = parse_id(cid)
    flips: frozenset[int] = frozenset()
    if "flip" in opts:
        try:
            flips = frozenset(int(f) for f in opts.pop("flip").split("+"))
        except ValueError:
            raise ColoringIdError(f"flip list in {cid!r} must be codes joined by '+'") from None
        if any(f <= 0 for f in flips):
            raise ColoringIdError("flipped codes must be positive")
    kept: dict[str, int] = {}
    kw = {"flips": flips, "trace": trace}
    if name in RECURSIVE:
        cat = catalog if isinstance(catalog, LoadedCatalog) else load_catalog(catalog)
        if name == "c31":
            col: RecursiveColoring = Coloring31(cat.catalog, **kw)
        elif name == "c32":
            k = _int_opt(opts, "k", cat.sized.k, cid)
            if k < 1:
                raise ColoringIdError("k must be positive")
            if k != cat.sized.k:
                cat = cat.with_k(k)
            kept["k"] = k
            col = Coloring32(cat.sized, **kw)
        elif name == "c33":
            col = Coloring33(cat.catalog, **kw)
        else:
            col = Coloring34(cat.relations, **kw)
    elif name == "const":
        v = _int_opt(opts, "v", 0, cid)
        if v not in (0, 1):
            raise ColoringIdError("const takes v=0 or v=1")
        kept["v"] = v
        col = SimpleColoring("", constant(v), 2, **kw)
    elif name == "parity":
        col = SimpleColoring("", parity(), 2, **kw)
    elif name == "contains0":
        col = SimpleColoring("", contains(0), 2, **kw)
    else:
        seed = _int_opt(opts, "seed", 0, cid)
        bound = _int_opt(opts, "bound", 1 << 10, cid)
        if bound < 1:
            raise ColoringIdError("bound must be positive")
        kept.update(seed=seed, bound=bound)
        col = SimpleColoring("", random_coloring(seed, bound), 2, **kw)
    if opts:
        raise ColoringIdError(f"unexpected options {sorted(opts)} for {name}")
    col.cid = canonical_id(name, kept, flips)
    return col


__all__ = [
    "ColoringIdError", "Coloring31", "Coloring32", "Coloring33", "Coloring34", "Decomposition",
    "MultipleWitnessViolation", "PrimaryDecomposition", "RecursiveColoring", "SimpleColoring",
    "TrueWitness34", "Witness34", "canonical_id", "color_31", "color_32", "color_33", "color_34",
    "decompositions_32", "default_cap", "induced_integer_coloring", "json_tracer", "make_coloring",
    "parse_id", "polarity_33", "primary_decomposition_33", "witness_34", "witnesses_31",
    "witnesses_32", "witnesses_33",
]
