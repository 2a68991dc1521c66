"""Coloring defeating every size-k family that tries to half-match an IP family.

Each index ``i`` pairs a size-``k`` family ``A_i`` with a staged family
``W_i``; stage ``s`` picks ``k + 1`` consecutive witnesses from ``W_i``.  A set
is recolored against its proper final segment ``W u D`` whenever it has a
correct (prefix in ``A_i``) decomposition that no later decomposition blocks.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..cesim import SizedFamilyCatalog
from ..finset import (FinSet, at_least, below, contains_segment, format_set, max_elem,
                      min_elem)
from .base import RecursiveColoring

Table = dict[int, dict[int, int]]  # i -> u -> witness code


def chain_witnesses(family_at, s: int, slots: int) -> Table:
    """Witnesses ``W^u_{i,s}`` for ``i <= s`` and ``u < slots`` in (i, u) order.

    Each is the least member of ``family_at(i)`` at stage ``s`` whose minimum
    exceeds ``i`` and the maximum of every earlier defined witness.
    """
    table: Table = {}
    last = -1
    for i in range(s + 1):
        members = family_at(i).stage(s)
        for u in range(slots):
            floor = max(last, i)
            pick = None
            for w in members:
                if min_elem(w) > floor:
                    pick = int(w)
                    break
            if pick is not None:
                table.setdefault(i, {})[u] = pick
                last = max_elem(pick)
    return table


def witnesses_32(scat: SizedFamilyCatalog, s: int) -> Table:
    return chain_witnesses(lambda i: scat.pair_fn(i)[1], s, scat.k + 1)


@dataclass
class Decomposition:
    i: int
    u: int
    Z: int
    W: int
    D: int
    correct: bool = False
    blocked_by: Optional[int] = None
    blocker: Optional["Decomposition"] = None
    z1: Optional[int] = None

    @property
    def blocked(self) -> bool:
        return self.blocked_by is not None

    def describe(self) -> dict:
        out = {"i": self.i, "u": self.u, "Z": format_set(self.Z), "W": format_set(self.W),
               "D": format_set(self.D), "correct": self.correct}
        if self.blocked_by is not None:
            out["blocked_by"] = self.blocked_by
            out["Z1"] = format_set(self.z1)
        return out


def raw_decompositions(table: Table, b: int) -> list[Decomposition]:
    """Splits ``b = Z u W^u_i u D`` whose sides avoid the sibling witnesses."""
    out = []
    for i, row in table.items():
        for u, w in row.items():
            if not contains_segment(b, w):
                continue
            z = below(b, min_elem(w))
            d = at_least(b, max_elem(w) + 1)
            if any(contains_segment(z, w2) or contains_segment(d, w2)
                   for u2, w2 in row.items() if u2 != u):
                continue
            out.append(Decomposition(i, u, z, w, d))
    out.sort(key=lambda dc: dc.W)
    return out


def find_z1(table: Table, a_family, d: Decomposition, blocker: Decomposition) -> Optional[int]:
    """A prefix ``Z1`` making ``blocker`` a correct decomposition of ``Z1 u W u D``.

    Returns None when no member of the blocker's family has that shape.
    """
    z0 = blocker.Z & ~d.Z
    lo = min_elem(z0)
    own = table.get(d.i, {})
    rival = table.get(blocker.i, {})
    for a in a_family:
        a = int(a)
        if at_least(a, lo) != z0:
            continue
        z1 = below(a, lo)
        if any(contains_segment(z1, w) for w in own.values()):
            continue
        if any(contains_segment(a, w) for u2, w in rival.items() if u2 != blocker.u):
            continue
        return z1
    return None


def classify(table: Table, scat: SizedFamilyCatalog, b: int) -> list[Decomposition]:
    """Decompositions of ``b`` with correctness and blocking filled in.

    Blocking is settled by induction on the length of ``D``: a blocker always
    sits further right, so its own status is known first.
    """
    decs = raw_decompositions(table, b)
    for dc in decs:
        dc.correct = dc.Z in {int(a) for a in scat.pair_fn(dc.i)[0]}
    for dc in sorted(decs, key=lambda x: x.D.bit_count()):
        for other in sorted(decs, key=lambda x: x.D.bit_count()):
            if other.D.bit_count() >= dc.D.bit_count():
                break
            if other.blocked or other.Z == dc.Z or other.Z & dc.Z != dc.Z:
                continue
            z1 = find_z1(table, scat.pair_fn(other.i)[0], dc, other)
            if z1 is not None:
                dc.blocked_by, dc.blocker, dc.z1 = other.i, other, z1
                break
    return decs


class Coloring32(RecursiveColoring):
    def __init__(self, scat: SizedFamilyCatalog, **kw):
        super().__init__(**kw)
        self.scat = scat
        self.cid = f"c32:k={scat.k}"
        self._tables: dict[int, Table] = {}
        self._decs: dict[int, list[Decomposition]] = {}

    def witnesses(self, s: int) -> Table:
        table = self._tables.get(s)
        if table is None:
            table = self._tables[s] = witnesses_32(self.scat, s)
        return table

    def decompositions(self, b: int) -> list[Decomposition]:
        got = self._decs.get(b)
        if got is None:
            got = self._decs[b] = classify(self.witnesses(max_elem(b)), self.scat, b)
        return got

    def good(self, b: int) -> list[Decomposition]:
        return [dc for dc in self.decompositions(b) if dc.correct and not dc.blocked]

    def rule(self, b: int) -> tuple[int, dict]:
        good = self.good(b)
        if not good:
            return 0, {"stage": max_elem(b)}
        dc = good[0]
        tail = dc.W | dc.D
        return 1 - self.color(tail), {"stage": max_elem(b), "decomposition": dc.describe(),
                                      "tail": FinSet(tail)}


def decompositions_32(scat: SizedFamilyCatalog, b: int) -> list[Decomposition]:
    return Coloring32(scat).decompositions(b)


def color_32(scat: SizedFamilyCatalog, b: int) -> int:
    return Coloring32(scat).color(b)
