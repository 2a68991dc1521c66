"""Coloring with no enumerable monochromatic IP family.

At stage ``s`` the ``i``-th witness is the least member of family ``i // 2``
starting after every earlier defined witness.  A set whose initial segment is
the ``i``-th witness at stage ``max B`` gets color ``i mod 2``.
"""

from __future__ import annotations

from typing import Optional

from ..cesim import Catalog
from ..finset import FinSet, is_initial_segment, max_elem, min_elem
from .base import MultipleWitnessViolation, RecursiveColoring


def witnesses_31(cat: Catalog, s: int) -> list[Optional[int]]:
    """Witness codes ``W^s_i`` for ``i <= s`` (None where undefined)."""
    table: list[Optional[int]] = []
    last = -1
    for i in range(s + 1):
        pick = None
        for w in cat.index_fn(i // 2).stage(s):
            if min_elem(w) > last:
                pick = int(w)
                break
        table.append(pick)
        if pick is not None:
            last = max_elem(pick)
    return table


class Coloring31(RecursiveColoring):
    cid = "c31"

    def __init__(self, cat: Catalog, **kw):
        super().__init__(**kw)
        self.cat = cat
        self._tables: dict[int, list[Optional[int]]] = {}

    def witnesses(self, s: int) -> list[Optional[int]]:
        table = self._tables.get(s)
        if table is None:
            table = self._tables[s] = witnesses_31(self.cat, s)
        return table

    def initial_witnesses(self, b: int) -> list[int]:
        s = max_elem(b)
        return [i for i, w in enumerate(self.witnesses(s)) if w is not None and is_initial_segment(w, b)]

    def rule(self, b: int) -> tuple[int, dict]:
        hits = self.initial_witnesses(b)
        if len(hits) > 1:
            raise MultipleWitnessViolation(f"witnesses {hits} are all initial segments of {FinSet(b)}")
        if not hits:
            return 0, {"stage": max_elem(b)}
        i = hits[0]
        return i % 2, {"stage": max_elem(b), "index": i, "witness": FinSet(self.witnesses(max_elem(b))[i])}


def color_31(cat: Catalog, b: int) -> int:
    return Coloring31(cat).color(b)
