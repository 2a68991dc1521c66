"""Coloring under which no finite family full-matches an IP family.

Two witnesses per index.  A set's primary decomposition is the split around a
witness whose tail has no primary decomposition of its own; the witness slot
``u`` decides whether the set keeps or flips the color of its prefix.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..cesim import Catalog
from ..finset import FinSet, at_least, below, contains_segment, format_set, max_elem, min_elem
from .base import RecursiveColoring
from .c32 import Table, chain_witnesses


def witnesses_33(cat: Catalog, s: int) -> Table:
    return chain_witnesses(cat.index_fn, s, 2)


@dataclass(frozen=True)
class PrimaryDecomposition:
    i: int
    u: int
    Z: int
    W: int
    D: int

    def describe(self) -> dict:
        return {"i": self.i, "u": self.u, "Z": format_set(self.Z), "W": format_set(self.W),
                "D": format_set(self.D)}


class Coloring33(RecursiveColoring):
    cid = "c33"

    def __init__(self, cat: Catalog, **kw):
        super().__init__(**kw)
        self.cat = cat
        self._tables: dict[int, Table] = {}
        self._primary: dict[int, Optional[PrimaryDecomposition]] = {0: None}

    def witnesses(self, s: int) -> Table:
        table = self._tables.get(s)
        if table is None:
            table = self._tables[s] = witnesses_33(self.cat, s)
        return table

    def candidates(self, b: int) -> list[PrimaryDecomposition]:
        """Every primary decomposition of ``b`` (at most one by construction)."""
        out = []
        for i, row in self.witnesses(max_elem(b)).items():
            for u, w in row.items():
                if not contains_segment(b, w):
                    continue
                z = below(b, min_elem(w))
                d = at_least(b, max_elem(w) + 1)
                other = row.get(1 - u)
                if other is not None and (contains_segment(z, other) or contains_segment(d, other)):
                    continue
                if d and self.primary(d) is not None:
                    continue
                out.append(PrimaryDecomposition(i, u, z, w, d))
        return out

    def primary(self, b: int) -> Optional[PrimaryDecomposition]:
        if b in self._primary:
            return self._primary[b]
        found = self.candidates(b)
        pd = found[0] if found else None
        self._primary[b] = pd
        return pd

    def polarity(self, b: int, i: int) -> Optional[int]:
        pd = self.primary(b)
        if pd is None:
            return None
        if pd.i == i:
            return pd.u
        if not pd.Z:
            return None
        inner = self.polarity(pd.Z, i)
        return None if inner is None else inner ^ pd.u

    def rule(self, b: int) -> tuple[int, dict]:
        pd = self.primary(b)
        if pd is None:
            return 0, {"stage": max_elem(b)}
        cz = self.color(pd.Z)
        return (cz if pd.u == 0 else 1 - cz), {"stage": max_elem(b), "decomposition": pd.describe()}


def primary_decomposition_33(cat: Catalog, b: int) -> Optional[PrimaryDecomposition]:
    return Coloring33(cat).primary(b)


def polarity_33(cat: Catalog, b: int, i: int) -> Optional[int]:
    return Coloring33(cat).polarity(b, i)


def color_33(cat: Catalog, b: int) -> int:
    return Coloring33(cat).color(b)
