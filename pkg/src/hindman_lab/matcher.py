"""Finite-scale versions of the matching lemmas and of the finite unions theorem.

An IP family is represented by an :class:`IPSpace`: finitely many pairwise
disjoint atoms whose nonempty unions are the members.  Strong subtraction
removes every atom that meets the subtracted sets.  "Infinite" is replaced by
"at least ``budget.ip_scale`` atoms", and every result is re-checked by
exhaustive evaluation before it is returned; a failed check raises
:class:`CertificateError` instead of producing a result.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence, Union

from .cesim import cantor_pair
from .finset import FinSet, format_set
from .ipalg import Family, family, format_family, half_matches, nu

Color = Callable[[int], int]


class UniverseExhausted(RuntimeError):
    """The bounded universe or search budget ran out before a branch was certified."""


class NoWitness(ValueError):
    """A refined color was requested for a set the family does not half-match."""


class CertificateError(AssertionError):
    """A returned branch failed its exhaustive re-check."""


@dataclass(frozen=True)
class SearchBudget:
    universe_bound: int = 1 << 10
    depth: int = 8
    nu_cap: Optional[int] = None
    ip_scale: int = 2
    rounds: int = 6
    nodes: int = 200_000

    def __post_init__(self):
        for name in ("universe_bound", "depth", "ip_scale", "rounds", "nodes"):
            if getattr(self, name) < 1:
                raise ValueError(f"budget field {name} must be positive")
        if self.nu_cap is not None and self.nu_cap < 1:
            raise ValueError("budget field nu_cap must be positive")
        if self.depth < 2 * self.ip_scale:
            raise ValueError("depth must allow ip_scale disjoint pairs")

    @property
    def bits(self) -> int:
        return self.universe_bound.bit_length() - 1


@dataclass(frozen=True)
class IPSpace:
    """Nonempty unions of pairwise disjoint atoms, kept in code order."""

    atoms: tuple[int, ...]

    def __post_init__(self):
        seen = 0
        for a in self.atoms:
            if a <= 0 or a & seen:
                raise ValueError("atoms must be nonempty and pairwise disjoint")
            seen |= a
        object.__setattr__(self, "atoms", tuple(sorted(int(a) for a in self.atoms)))

    @classmethod
    def singletons(cls, universe_bound: int = 1 << 10) -> "IPSpace":
        """Singleton atoms, so the members are every nonempty code below the bound."""
        bits = universe_bound.bit_length() - 1
        if bits > 20:
            raise ValueError("universe too large to enumerate")
        return cls(tuple(1 << k for k in range(bits)))

    def __len__(self) -> int:
        return len(self.atoms)

    @property
    def support(self) -> int:
        out = 0
        for a in self.atoms:
            out |= a
        return out

    def members(self, cap: Optional[int] = None) -> list[int]:
        if len(self.atoms) > 20:
            raise UniverseExhausted("too many atoms to enumerate unions")
        out = []
        for mask in range(1, 1 << len(self.atoms)):
            if cap is not None and mask.bit_count() > cap:
                continue
            u = 0
            for k, a in enumerate(self.atoms):
                if (mask >> k) & 1:
                    u |= a
            out.append(u)
        out.sort()
        return out

    def minus(self, sets: Iterable[int]) -> "IPSpace":
        mask = 0
        for s in sets:
            mask |= int(s)
        return IPSpace(tuple(a for a in self.atoms if not a & mask))

    def least(self) -> int:
        if not self.atoms:
            raise UniverseExhausted("empty space")
        return self.atoms[0]

    def describe(self) -> list[str]:
        return [format_set(a) for a in self.atoms]


# ---------------------------------------------------------------------------
# results and certificates


@dataclass
class Certificate:
    branch: str
    families: dict[str, list[str]]
    check: dict

    def to_dict(self) -> dict:
        return {"branch": self.branch, "families": self.families, "check": self.check}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


@dataclass
class FirstCase:
    D: Family
    certificate: Certificate


@dataclass
class SecondCase:
    T: IPSpace
    certificate: Certificate


DichotomyResult = Union[FirstCase, SecondCase]


@dataclass
class HalfMatch:
    B: Family
    T: IPSpace
    rounds: int
    certificate: Certificate


@dataclass
class FullMatch:
    B: Family
    T: IPSpace
    certificate: Certificate


@dataclass
class AvoidingFamily:
    S: IPSpace
    color: int
    certificate: Certificate


@dataclass
class MonochromaticFamily:
    S: IPSpace
    color: int
    certificate: Certificate


def _fam(sets: Iterable[int]) -> list[str]:
    return [format_set(s) for s in sorted(int(x) for x in sets)]


def _half_ok(bs: Sequence[int], u: int, c: Color) -> bool:
    return half_matches(bs, u, c) is not None


def _full_witness(bs: Sequence[int], u: int, c: Color) -> Optional[int]:
    cu = c(u)
    for b in bs:
        if c(b) == cu and c(b | u) == cu:
            return b
    return None


def union_closure(sets: Iterable[int]) -> list[int]:
    """All nonempty unions of the given sets (no size cap), in code order."""
    out: set[int] = set()
    for s in sorted({int(x) for x in sets if x}):
        out |= {s | t for t in out}
        out.add(s)
    return sorted(out)


# ---------------------------------------------------------------------------
# half matching


def half_match_dichotomy(space: IPSpace, bs: Iterable[int], c: Color,
                         budget: SearchBudget = SearchBudget()) -> DichotomyResult:
    """Grow ``D_0, D_1, ...`` in ``space - bs`` while ``bs`` half-matches every ``D u S``.

    If the search for the next ``S`` fails while at least ``ip_scale`` atoms
    remain, the sets found so far are the first case.  If ``budget.depth`` sets
    are found, or the universe runs dry after at least ``2 * ip_scale``, their
    consecutive pairwise unions form the second case.
    """
    bs = family(bs)
    rest = space.minus(bs)
    if not bs:
        cert = Certificate("SecondCase", {"B": [], "T": rest.describe()},
                           {"checked": 0, "vacuous": True, "universe_bound": budget.universe_bound})
        return SecondCase(rest, cert)
    ds: list[int] = []
    while len(ds) < budget.depth:
        cand = rest.minus(ds)
        unions = nu(ds, budget.nu_cap) if ds else ()
        found = None
        for s in cand.members():
            if all(_half_ok(bs, int(d) | s, c) for d in unions):
                found = s
                break
        if found is None:
            if len(cand) >= budget.ip_scale:
                return FirstCase(family(ds), _certify_first(cand, bs, ds, c, budget))
            if len(ds) < 2 * budget.ip_scale:
                raise UniverseExhausted(f"only {len(cand)} atoms left after {len(ds)} steps")
            break  # the universe, not the search, ran out
        ds.append(found)
    pairs = IPSpace(tuple(ds[2 * j] | ds[2 * j + 1] for j in range(len(ds) // 2)))
    return SecondCase(pairs, _certify_half(bs, pairs, c, budget, "SecondCase"))


def _certify_first(cand: IPSpace, bs, ds, c: Color, budget: SearchBudget) -> Certificate:
    unions = nu(ds, budget.nu_cap)
    checked = 0
    for s in cand.members():
        bad = next((d for d in unions if not _half_ok(bs, int(d) | s, c)), None)
        if bad is None:
            raise CertificateError(f"{format_set(s)} is half-matched after every union")
        checked += 1
    return Certificate("FirstCase", {"B": _fam(bs), "D": _fam(ds), "rest": cand.describe()},
                       {"checked": checked, "unions": len(unions), "universe_bound": budget.universe_bound})


def _certify_half(bs, t: IPSpace, c: Color, budget: SearchBudget, branch: str) -> Certificate:
    members = t.members(budget.nu_cap)
    for u in members:
        if not _half_ok(bs, u, c):
            raise CertificateError(f"{format_family(bs)} does not half-match {format_set(u)}")
    return Certificate(branch, {"B": _fam(bs), "T": t.describe()},
                       {"checked": len(members), "nu_cap": budget.nu_cap,
                        "universe_bound": budget.universe_bound})


def find_half_matcher(space: IPSpace, c: Color, r: int, budget: SearchBudget = SearchBudget()) -> HalfMatch:
    """A finite ``B`` and a space ``T`` disjoint from it with ``B`` half-matching ``NU(T)``.

    Starts from the least atom and applies the dichotomy; after ``r - 1`` first
    cases the accumulated family half-matches what is left, because ``r`` colors
    cannot alternate ``r + 1`` times.
    """
    if r < 1:
        raise ValueError("need at least one color")
    bs: Family = family([space.least()])
    rest = space.minus(bs)
    for rnd in range(1, r):
        if len(rest) < budget.ip_scale:
            raise UniverseExhausted(f"space emptied in round {rnd}")
        res = half_match_dichotomy(rest, bs, c, budget)
        if isinstance(res, SecondCase):
            return HalfMatch(bs, res.T, rnd, _certify_half(bs, res.T, c, budget, "HalfMatch"))
        bs = family(union_closure(list(bs) + list(res.D)))
        rest = rest.minus(bs)
    if len(rest) < budget.ip_scale:
        raise UniverseExhausted(f"space emptied after {r} rounds")
    return HalfMatch(bs, rest, r, _certify_half(bs, rest, c, budget, "HalfMatch"))


# ---------------------------------------------------------------------------
# refined colorings


def cantor_unpair(z: int) -> tuple[int, int]:
    w = int(((8 * z + 1) ** 0.5 - 1) // 2)
    while w * (w + 1) // 2 > z:
        w -= 1
    while (w + 1) * (w + 2) // 2 <= z:
        w += 1
    y = z - w * (w + 1) // 2
    return w - y, y


@dataclass(frozen=True)
class RefinedColor:
    witness: int
    base: int

    def encode(self) -> int:
        return cantor_pair(self.witness, self.base)

    @classmethod
    def decode(cls, z: int) -> "RefinedColor":
        return cls(*cantor_unpair(z))


class RefinedColoring:
    """``S -> <B, c(S)>`` with ``B`` the least member of the family matching ``S``.

    ``full`` selects full matching (used by the theorem) instead of half matching.
    """

    def __init__(self, c: Color, bs: Iterable[int], r: int, full: bool = False):
        self.c = c
        self.bs = sorted(int(b) for b in bs)
        self.full = full
        self.arity = max(1, len(self.bs)) * r
        self._memo: dict[int, int] = {}

    def witness(self, s: int) -> int:
        cs = self.c(s)
        for b in self.bs:
            if b & s:
                continue
            if self.c(b | s) == cs and (not self.full or self.c(b) == cs):
                return b
        raise NoWitness(f"no member of {format_family(self.bs)} matches {format_set(s)}")

    def __call__(self, s: int) -> int:
        s = int(s)
        got = self._memo.get(s)
        if got is None:
            got = self._memo[s] = RefinedColor(self.witness(s), self.c(s)).encode()
        return got


def refine_coloring(c: Color, bs: Iterable[int], t: IPSpace, r: int = 2, full: bool = False,
                    check: bool = True) -> RefinedColoring:
    """Refine ``c`` on ``NU(t)`` by pairing each set with its matching witness.

    With ``check`` every member of ``NU(t)`` is colored up front, so a missing
    witness raises :class:`NoWitness` here rather than later.
    """
    rc = RefinedColoring(c, bs, r, full)
    if check:
        for u in t.members():
            rc(u)
    return rc


# ---------------------------------------------------------------------------
# full matching


@dataclass
class _Level:
    bs: Family
    t: IPSpace


def _chain_search(levels: Sequence[Sequence[int]], ok: Callable[[list[int], int], bool], want: int,
                  budget: SearchBudget) -> list[int]:
    """Deepest sequence picking one set per consecutive level, pairwise disjoint,
    accepted by ``ok(prefix, next)``; stops early once ``want`` sets are chosen."""
    best: list[int] = []
    nodes = 0

    def dfs(k: int, chosen: list[int], used: int) -> bool:
        nonlocal best, nodes
        if len(chosen) > len(best):
            best = list(chosen)
        if len(chosen) >= want or k == len(levels):
            return len(chosen) >= want
        for b in levels[k]:
            nodes += 1
            if nodes > budget.nodes:
                return False
            if b & used or not ok(chosen, b):
                continue
            chosen.append(b)
            if dfs(k + 1, chosen, used | b):
                return True
            chosen.pop()
        return False

    dfs(0, [], 0)
    return best


def _unions_with(chosen: list[int], b: int) -> list[int]:
    """New unions created by adding ``b`` to ``chosen``."""
    out = [b]
    for u in union_closure(chosen):
        out.append(u | b)
    return out


def full_match_or_avoid(space: IPSpace, c: Color, r: int,
                        budget: SearchBudget = SearchBudget()) -> Union[FullMatch, AvoidingFamily]:
    """Either a finite family full-matching a remaining space, or a space avoiding one color."""
    levels: list[_Level] = []
    cur, ci, ri = space, c, r
    unmatched: list[tuple[int, int]] = []  # (round, least unmatched set)
    for rnd in range(1, budget.rounds + 1):
        try:
            hm = find_half_matcher(cur, ci, ri, budget)
        except UniverseExhausted:
            break
        levels.append(_Level(hm.B, hm.T))
        pool = union_closure(s for lv in levels for s in lv.bs)
        miss = next((u for u in hm.T.members(budget.nu_cap) if _full_witness(pool, u, c) is None), None)
        if miss is None:
            return FullMatch(family(pool), hm.T, _certify_full(pool, hm.T, c, budget))
        unmatched.append((rnd, miss))
        ci = refine_coloring(ci, hm.B, hm.T, ri, check=False)
        ri = ci.arity
        cur = hm.T
    if not unmatched:
        raise UniverseExhausted("no round completed")
    counts: dict[int, int] = {}
    for _, u in unmatched:
        counts[c(u)] = counts.get(c(u), 0) + 1
    q = min(counts, key=lambda col: (-counts[col], col))
    chain = _chain_search([lv.bs for lv in levels], lambda ch, b: all(c(u) != q for u in _unions_with(ch, b)),
                          len(levels), budget)
    if len(chain) < budget.ip_scale:
        raise UniverseExhausted(f"avoiding chain for color {q} has only {len(chain)} sets")
    s = IPSpace(tuple(chain))
    return AvoidingFamily(s, q, _certify_avoid(s, q, c, budget))


def _certify_full(pool, t: IPSpace, c: Color, budget: SearchBudget) -> Certificate:
    members = t.members(budget.nu_cap)
    for u in members:
        if _full_witness(pool, u, c) is None:
            raise CertificateError(f"{format_set(u)} is not full-matched")
    return Certificate("FullMatch", {"B": _fam(pool), "T": t.describe()},
                       {"checked": len(members), "nu_cap": budget.nu_cap,
                        "universe_bound": budget.universe_bound})


def _certify_avoid(s: IPSpace, q: int, c: Color, budget: SearchBudget) -> Certificate:
    members = s.members(budget.nu_cap)
    for u in members:
        if c(u) == q:
            raise CertificateError(f"{format_set(u)} has the avoided color {q}")
    return Certificate("AvoidingFamily", {"S": s.describe()},
                       {"checked": len(members), "avoided": q, "universe_bound": budget.universe_bound})


def _certify_mono(s: IPSpace, c: Color, budget: SearchBudget) -> tuple[int, Certificate]:
    members = s.members(budget.nu_cap)
    colors = {c(u) for u in members}
    if len(colors) != 1:
        raise CertificateError(f"space {s.describe()} is not monochromatic")
    color = colors.pop()
    return color, Certificate("MonochromaticFamily", {"S": s.describe()},
                              {"checked": len(members), "color": color,
                               "universe_bound": budget.universe_bound})


class _Restricted:
    """A coloring known to avoid ``q``, renumbered onto one fewer color."""

    def __init__(self, c: Color, q: int):
        self.c, self.q = c, q

    def __call__(self, s: int) -> int:
        v = self.c(s)
        if v == self.q:
            raise CertificateError(f"{format_set(s)} takes the avoided color {v}")
        return v - 1 if v > self.q else v


def find_full_matcher(space: IPSpace, c: Color, r: int,
                      budget: SearchBudget = SearchBudget()) -> Union[MonochromaticFamily, FullMatch]:
    """Induction on the number of colors."""
    if r < 1:
        raise ValueError("need at least one color")
    if r == 1:
        if len(space) < budget.ip_scale:
            raise UniverseExhausted("space too small")
        color, cert = _certify_mono(space, c, budget)
        return MonochromaticFamily(space, color, cert)
    res = full_match_or_avoid(space, c, r, budget)
    if isinstance(res, FullMatch):
        return res
    inner = find_full_matcher(res.S, _Restricted(c, res.color), r - 1, budget)
    if isinstance(inner, FullMatch):
        # a full match for the renumbered coloring is one for c: the map is injective
        return FullMatch(inner.B, inner.T, _certify_full(list(inner.B), inner.T, c, budget))
    color, cert = _certify_mono(inner.S, c, budget)
    return MonochromaticFamily(inner.S, color, cert)


# ---------------------------------------------------------------------------
# the theorem at finite scale


def is_monochromatic_family(fam: Sequence[int], c: Color) -> bool:
    sets = [int(s) for s in fam]
    used = 0
    for s in sets:
        if s <= 0 or s & used:
            return False
        used |= s
    colors = {c(u) for u in union_closure(sets)}
    return len(colors) <= 1


def brute_force_mono(c: Color, m: int, universe_bound: int) -> Optional[Family]:
    """Lexicographically least ``m`` pairwise disjoint sets below the bound with
    monochromatic nonempty unions."""
    if m < 1:
        raise ValueError("m must be positive")

    def extend(chosen: list[int], unions: list[int], used: int, color: Optional[int]) -> Optional[list[int]]:
        if len(chosen) == m:
            return chosen
        start = chosen[-1] + 1 if chosen else 1
        for b in range(start, universe_bound):
            if b & used:
                continue
            cb = c(b)
            if color is not None and cb != color:
                continue
            new = [u | b for u in unions]
            if any(c(u) != cb for u in new):
                continue
            got = extend(chosen + [b], unions + [b] + new, used | b, cb)
            if got is not None:
                return got
        return None

    found = extend([], [], 0, None)
    return None if found is None else tuple(FinSet(s) for s in found)


@dataclass
class HindmanResult:
    family: Optional[Family]
    method: str
    levels: int
    color: Optional[int] = None
    notes: list[str] = field(default_factory=list)

    def certificate(self, c: Color, budget: SearchBudget) -> dict:
        check = {"universe_bound": budget.universe_bound, "method": self.method, "levels": self.levels}
        if self.family is None:
            return {"branch": "None", "families": {}, "check": check}
        unions = union_closure(self.family)
        check.update(checked=len(unions), color=c(unions[0]))
        return {"branch": "MonochromaticFamily", "families": {"S": _fam(self.family)}, "check": check}


def hindman_search_detailed(c: Color, r: int, m: int, budget: SearchBudget = SearchBudget(),
                            space: Optional[IPSpace] = None) -> HindmanResult:
    """Follow the theorem: repeated full matches with refined colorings, then a
    tree search for one set per level with monochromatic unions.  When the
    bounded pipeline stalls, a depth-first search over the whole universe
    decides the question."""
    space = space or IPSpace.singletons(budget.universe_bound)
    levels: list[Family] = []
    notes: list[str] = []
    cur, ci, ri = space, c, r
    found: Optional[list[int]] = None
    method = "fallback"
    for _ in range(budget.rounds):
        try:
            res = find_full_matcher(cur, ci, ri, budget)
        except (UniverseExhausted, NoWitness, CertificateError) as exc:
            notes.append(f"pipeline stopped: {exc}")
            break
        if isinstance(res, MonochromaticFamily):
            atoms = list(res.S.atoms)
            if len(atoms) >= m and is_monochromatic_family(atoms[:m], c):
                found, method = atoms[:m], "monochromatic-space"
            break
        levels.append(res.B)
        chain = _chain_search(levels, lambda ch, b: len({c(u) for u in _unions_with(ch, b) + ch}) == 1,
                              m, budget)
        if len(chain) >= m:
            found, method = chain[:m], "levels"
            break
        ci = RefinedColoring(ci, res.B, ri, full=True)
        ri = ci.arity
        cur = res.T
    if found is None:
        fallback = brute_force_dfs(c, m, budget)
        found = None if fallback is None else list(fallback)
        method = "fallback"
    if found is None:
        return HindmanResult(None, "none", len(levels), notes=notes)
    fam = tuple(FinSet(s) for s in sorted(found))
    if not is_monochromatic_family(fam, c):
        raise CertificateError(f"{format_family(fam)} is not monochromatic")
    return HindmanResult(fam, method, len(levels), c(fam[0]), notes)


def brute_force_dfs(c: Color, m: int, budget: SearchBudget) -> Optional[Family]:
    """Depth-first search for ``m`` disjoint sets with monochromatic unions,
    trying larger supports last; independent of the lexicographic oracle."""
    space = IPSpace.singletons(budget.universe_bound)
    members = space.members()
    members.sort(key=lambda s: (s.bit_count(), s))
    nodes = 0

    def dfs(chosen: list[int], used: int, color: Optional[int]) -> Optional[list[int]]:
        nonlocal nodes
        if len(chosen) == m:
            return chosen
        for b in members:
            if b & used or (chosen and b < chosen[-1] and b.bit_count() == chosen[-1].bit_count()):
                continue
            nodes += 1
            cb = c(b)
            if color is not None and cb != color:
                continue
            if any(c(u | b) != cb for u in union_closure(chosen)):
                continue
            got = dfs(chosen + [b], used | b, cb)
            if got is not None:
                return got
        return None

    got = dfs([], 0, None)
    return None if got is None else family(got)


def hindman_search(c: Color, r: int, m: int, budget: SearchBudget = SearchBudget()) -> Optional[Family]:
    return hindman_search_detailed(c, r, m, budget).family


__all__ = [
    "AvoidingFamily", "Certificate", "CertificateError", "FirstCase", "FullMatch", "HalfMatch",
    "HindmanResult", "IPSpace", "MonochromaticFamily", "NoWitness", "RefinedColor", "RefinedColoring",
    "SearchBudget", "SecondCase", "UniverseExhausted", "brute_force_dfs", "brute_force_mono",
    "cantor_unpair", "find_full_matcher", "find_half_matcher", "full_match_or_avoid",
    "half_match_dichotomy", "hindman_search", "hindman_search_detailed", "is_monochromatic_family",
    "refine_coloring", "union_closure",
]
