"""Coloring with no Sigma-2 monochromatic IP family.

Rows ``(i, n)`` with ``n <= i`` are ordered lexicographically.  For bounds
``p, q`` the row-``(i, n)`` witness is the least set ``T`` (code below the cap)
such that

* ``exists x <= p forall y <= q R_i(x, y, T)``,
* every defined earlier row of the ``(min T, q)`` table agrees with the
  ``(p, q)`` table, and
* ``T`` starts after every defined earlier witness.

A set ``B`` with ``max B = s`` is colored at the first stage ``i <= s`` at which
some prefix ``A`` equals a ``(min D, s)`` witness of row ``(i, n)``, where
``D`` is the rest of ``B``; the color is ``1 - c(D)`` for the longest such ``D``.
"""

from __future__ import annotations

from typing import Callable, Optional, Sequence

from ..cesim import Sigma2Relation
from ..finset import FinSet, below, iter_bits, max_elem, min_elem
from .base import RecursiveColoring


def row_index(i: int, n: int) -> int:
    if not 0 <= n <= i:
        raise ValueError(f"row ({i},{n}) needs 0 <= n <= i")
    return i * (i + 1) // 2 + n


def row_pair(r: int) -> tuple[int, int]:
    i = 0
    while (i + 1) * (i + 2) // 2 <= r:
        i += 1
    return i, r - i * (i + 1) // 2


def default_cap(q: int) -> int:
    return 1 << (q + 1)


class _Grid:
    """All ``(p, q)`` witness tables for one ``q`` and cap, filled row by row.

    Tables with ``p <= top`` (the largest element the cap admits) are computed
    in lockstep because condition two consults them.  Other ``p`` only read
    them and are filled on demand.
    """

    def __init__(self, rels: Sequence[Sigma2Relation], q: int, cap: int):
        self.rels = rels
        self.q = q
        self.cap = cap
        if cap < 2 or cap & (cap - 1):
            raise ValueError(f"candidate cap must be a power of two >= 2, got {cap}")
        self.top = cap.bit_length() - 2  # largest element a set below the cap can hold
        self.base = list(range(self.top + 1)) if self.top >= 0 else []
        self.rows: dict[int, list[Optional[int]]] = {p: [] for p in self.base}
        self.last: dict[int, int] = {p: -1 for p in self.base}
        # agree[p]: bitmask of mu whose table matches p on p's defined rows so far
        full = (1 << (self.top + 1)) - 1 if self.top >= 0 else 0
        self.agree: dict[int, int] = {p: full for p in self.base}
        self.done = 0

    def _compute(self, p: int, r: int) -> Optional[int]:
        i, _ = row_pair(r)
        rel = self.rels[i % len(self.rels)]
        best = None
        ok = self.agree[p]
        for mu in range(self.last[p] + 1, self.top + 1):
            limit = self.cap if best is None else best
            if (1 << mu) >= limit:
                break
            if not (ok >> mu) & 1:
                continue
            t = rel.least(mu, p, self.q, self.top)
            if t is not None and t < limit:
                best = t
        return best

    def _update_agree(self, p: int, r: int) -> None:
        t = self.rows[p][r]
        if t is None:
            return
        mask = 0
        for mu in self.base:
            if self.rows[mu][r] == t:
                mask |= 1 << mu
        self.agree[p] &= mask

    def _advance_base(self, upto: int) -> None:
        while self.done <= upto:
            r = self.done
            for p in self.base:
                t = self._compute(p, r)
                self.rows[p].append(t)
                if t is not None:
                    self.last[p] = max_elem(t)
            for p in self.base:
                self._update_agree(p, r)
            self.done += 1

    def _ensure(self, p: int, r: int) -> None:
        self._advance_base(r)
        if p in self.base:
            return
        if p not in self.rows:
            self.rows[p] = []
            self.last[p] = -1
            self.agree[p] = (1 << (self.top + 1)) - 1 if self.top >= 0 else 0
        row = self.rows[p]
        while len(row) <= r:
            k = len(row)
            t = self._compute(p, k)
            row.append(t)
            if t is not None:
                self.last[p] = max_elem(t)
            self._update_agree(p, k)

    def get(self, p: int, r: int) -> Optional[int]:
        self._ensure(p, r)
        return self.rows[p][r]

    def table(self, p: int, rows: int) -> list[Optional[int]]:
        if rows <= 0:
            return []
        self._ensure(p, rows - 1)
        return self.rows[p][:rows]


class Witness34:
    """Memoized ``p, q, i, n``-witnesses for a relation list (indexed cyclically)."""

    def __init__(self, rels: Sequence[Sigma2Relation], cap_fn: Callable[[int], int] = default_cap):
        if not rels:
            raise ValueError("need at least one relation")
        self.rels = list(rels)
        self.cap_fn = cap_fn
        self._grids: dict[tuple[int, int], _Grid] = {}

    def grid(self, q: int, cap: Optional[int] = None) -> _Grid:
        cap = self.cap_fn(q) if cap is None else cap
        g = self._grids.get((q, cap))
        if g is None:
            g = self._grids[(q, cap)] = _Grid(self.rels, q, cap)
        return g

    def witness(self, p: int, q: int, i: int, n: int, cap: Optional[int] = None) -> Optional[int]:
        return self.grid(q, cap).get(p, row_index(i, n))

    def table(self, p: int, q: int, rows: int, cap: Optional[int] = None) -> list[Optional[int]]:
        return self.grid(q, cap).table(p, rows)


def witness_34(rels: Sequence[Sigma2Relation], p: int, q: int, i: int, n: int,
               cap: Optional[int] = None) -> Optional[FinSet]:
    t = Witness34(rels).witness(p, q, i, n, cap)
    return None if t is None else FinSet(t)


def witness_34_brute(rels: Sequence[Sigma2Relation], p: int, q: int, i: int, n: int,
                     cap: Optional[int] = None) -> Optional[int]:
    """Direct transcription of the candidate definition by linear code scan."""
    cap = default_cap(q) if cap is None else cap
    memo: dict[tuple[int, int], Optional[int]] = {}

    def wit(pp: int, r: int) -> Optional[int]:
        key = (pp, r)
        if key in memo:
            return memo[key]
        ii, _ = row_pair(r)
        rel = rels[ii % len(rels)]
        earlier = [wit(pp, k) for k in range(r)]
        found = None
        for t in range(1, cap):
            if not rel.holds(t, pp, q):
                continue
            mu = min_elem(t)
            if any(e is not None and max_elem(e) >= mu for e in earlier):
                continue
            if any(e is not None and wit(mu, k) != e for k, e in enumerate(earlier)):
                continue
            found = t
            break
        memo[key] = found
        return found

    return wit(p, row_index(i, n))


class TrueWitness34:
    """Unbounded ``i, n``-witnesses, decided with the relations' certified bounds.

    Sets range over the universe of elements below ``width``.
    """

    def __init__(self, rels: Sequence[Sigma2Relation], width: int):
        self.rels = list(rels)
        self.width = width
        self.rows: list[Optional[int]] = []
        self.last = -1
        self._cond: dict[tuple[int, int], bool] = {}

    def _cond2(self, r: int, mu: int) -> bool:
        key = (r, mu)
        got = self._cond.get(key)
        if got is None:
            j, _ = row_pair(r)
            got = self._cond[key] = self.rels[j % len(self.rels)].holds(self.rows[r], mu, None)
        return got

    def get(self, i: int, n: int) -> Optional[int]:
        r = row_index(i, n)
        top = self.width - 1
        while len(self.rows) <= r:
            k = len(self.rows)
            ii, _ = row_pair(k)
            rel = self.rels[ii % len(self.rels)]
            best = None
            for mu in range(self.last + 1, top + 1):
                if best is not None and (1 << mu) >= best:
                    break
                if not all(self._cond2(e, mu) for e in range(k) if self.rows[e] is not None):
                    continue
                t = rel.least(mu, None, None, top)
                if t is not None and (best is None or t < best):
                    best = t
            self.rows.append(best)
            if best is not None:
                self.last = max_elem(best)
        return self.rows[r]


class Coloring34(RecursiveColoring):
    cid = "c34"

    def __init__(self, rels: Sequence[Sigma2Relation], cap_fn: Callable[[int], int] = default_cap, **kw):
        super().__init__(**kw)
        self.rels = list(rels)
        self.wit = Witness34(self.rels, cap_fn)

    def splits(self, b: int, i: int) -> list[tuple[int, int, int]]:
        """``(A, D, n)`` with ``A u D = b`` and ``A`` the ``(min D, max D)`` witness
        of row ``(i, n)``, longest ``D`` first."""
        s = max_elem(b)
        elems = list(iter_bits(b))
        out = []
        for k in range(1, len(elems)):
            a = below(b, elems[k])
            d = b ^ a
            p = elems[k]
            for n in range(i + 1):
                if self.wit.witness(p, s, i, n) == a:
                    out.append((a, d, n))
                    break
        return out

    def rule(self, b: int) -> tuple[int, dict]:
        s = max_elem(b)
        for i in range(s + 1):
            found = self.splits(b, i)
            if found:
                a, d, n = found[0]
                return 1 - self.color(d), {"stage": i, "n": n, "A": FinSet(a), "D": FinSet(d),
                                           "splits": len(found)}
        return 0, {"stage": None}


def color_34(rels: Sequence[Sigma2Relation], b: int, cap_fn: Callable[[int], int] = default_cap) -> int:
    return Coloring34(rels, cap_fn).color(b)
