"""Stagewise simulation of enumerable families and bounded Sigma-2 relations.

A :class:`StagedFamily` stands in for an enumerable family of finite sets: it
emits members at stages, and ``stage(s)`` is everything emitted by stage
``s``.  Builtin kinds always emit a member no earlier than its maximum, so a
stage-``s`` approximation lives inside ``[0, s]``.

Catalogs are declarative JSON::

    {"families": [{"kind": "singletons", "delay": 0}, ...],
     "sigma2": [{"kind": "subset_evens"}, ...],
     "k": 2,
     "a_families": [["{0}", "{1}"], ...]}

``a_families`` is optional; without it the first few size-``k`` families of
subsets of a small range are used.
"""

from __future__ import annotations

import itertools
import json
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterator, Optional

from .finset import FinSet, format_set, max_elem, min_elem, parse_set
from .ipalg import Family, family


class CatalogError(ValueError):
    """Malformed catalog file or unknown generator kind."""


class BoundCertificationError(RuntimeError):
    """A relation's declared quantifier bounds disagree with its decision procedure."""


# ---------------------------------------------------------------------------
# staged families


def _singletons(delay: int = 0) -> Iterator[tuple[int, int]]:
    for n in itertools.count():
        yield n + delay, 1 << n


def _dyadic_blocks() -> Iterator[tuple[int, int]]:
    for j in itertools.count():
        yield 2 ** (j + 1), ((1 << (2 ** (j + 1))) - 1) ^ ((1 << (2 ** j)) - 1)


def _finite(m: int = 2) -> Iterator[tuple[int, int]]:
    for j in range(m):
        yield j, 1 << j


def _pairs() -> Iterator[tuple[int, int]]:
    for n in itertools.count():
        yield 2 * n + 1, 0b11 << (2 * n)


def _interleaved(period: int = 3, phase: int = 0) -> Iterator[tuple[int, int]]:
    # {n} for n = phase mod period, then the overlapping pair {n, n+1}
    for n in itertools.count(phase, period):
        yield n, 1 << n
        yield n + 1, 0b11 << n


def _backfill() -> Iterator[tuple[int, int]]:
    # odd singletons on time, even singletons {n} arrive late at stage 2n+1
    for s in itertools.count(1, 2):
        yield s, 1 << s
        n = (s - 1) // 2
        if n % 2 == 0:
            yield s, 1 << n


FAMILY_KINDS: dict[str, Callable[..., Iterator[tuple[int, int]]]] = {
    "singletons": _singletons,
    "delayed_singletons": _singletons,
    "dyadic_blocks": _dyadic_blocks,
    "finite": _finite,
    "pairs": _pairs,
    "interleaved": _interleaved,
    "backfill": _backfill,
}


class StagedFamily:
    """Monotone stagewise approximation ``s -> W_s`` of an enumerable family."""

    def __init__(self, emitter: Callable[[], Iterator[tuple[int, int]]], description: str):
        self._emitter = emitter
        self.description = description
        self._source = emitter()
        self._emitted: list[tuple[int, int]] = []
        self._exhausted = False
        self._cache: dict[int, Family] = {}
        self._lock = threading.Lock()

    def _fill_to(self, s: int) -> None:
        while not self._exhausted and (not self._emitted or self._emitted[-1][0] <= s):
            try:
                self._emitted.append(next(self._source))
            except StopIteration:
                self._exhausted = True

    def stage(self, s: int) -> Family:
        got = self._cache.get(s)
        if got is not None:
            return got
        with self._lock:
            self._fill_to(s)
            got = family(code for st, code in self._emitted if st <= s)
            self._cache[s] = got
        return got

    def __repr__(self) -> str:
        return f"<StagedFamily {self.description}>"


def make_family(spec: dict) -> StagedFamily:
    spec = dict(spec)
    kind = spec.pop("kind", None)
    if kind not in FAMILY_KINDS:
        raise CatalogError(f"unknown family kind {kind!r}")
    gen = FAMILY_KINDS[kind]
    if kind == "delayed_singletons":
        spec.setdefault("delay", 2)
    try:
        gen(**spec)
    except TypeError as exc:
        raise CatalogError(f"bad parameters for {kind}: {exc}") from None
    params = ",".join(f"{k}={v}" for k, v in sorted(spec.items()))
    return StagedFamily(lambda: gen(**spec), f"{kind}({params})")


def stage(w: StagedFamily, s: int) -> Family:
    return w.stage(s)


@dataclass
class Catalog:
    entries: list[StagedFamily]

    def __post_init__(self):
        if not self.entries:
            raise CatalogError("catalog needs at least one family")

    def index_fn(self, i: int) -> StagedFamily:
        return self.entries[i % len(self.entries)]

    def __len__(self) -> int:
        return len(self.entries)


def cantor_pair(a: int, w: int) -> int:
    d = a + w
    return d * (d + 1) // 2 + w


@dataclass
class SizedFamilyCatalog:
    """Indexed pairs ``(A_i, W_i)``: size-``k`` families against staged families.

    Pairs are listed in Cantor order of ``(family index, staged index)`` over the
    finite grid, and the index cycles, so every pair recurs with period
    ``pairing_bound``.
    """

    k: int
    a_families: list[Family]
    w_families: list[StagedFamily]
    pairs: list[tuple[int, int]] = field(init=False)

    def __post_init__(self):
        for fam in self.a_families:
            if len(fam) != self.k:
                raise CatalogError(f"family {fam} does not have size {self.k}")
        grid = [(a, w) for a in range(len(self.a_families)) for w in range(len(self.w_families))]
        self.pairs = sorted(grid, key=lambda aw: cantor_pair(*aw))

    @property
    def pairing_bound(self) -> int:
        return len(self.pairs)

    def pair_index(self, i: int) -> tuple[int, int]:
        return self.pairs[i % len(self.pairs)]

    def pair_fn(self, i: int) -> tuple[Family, StagedFamily]:
        a, w = self.pair_index(i)
        return self.a_families[a], self.w_families[w]

    def index_for(self, a: int, w: int, at_least: int = 0) -> int:
        pos = self.pairs.index((a, w))
        n = pos
        while n < at_least:
            n += len(self.pairs)
        return n


def default_a_families(k: int, count: int = 3) -> list[Family]:
    """The first ``count`` size-``k`` families of nonempty subsets, by height then code."""
    out: list[Family] = []
    top = 1
    while len(out) < count:
        sets = range(1, 1 << top)
        for combo in itertools.combinations(sets, k):
            if max(combo).bit_length() == top:
                out.append(family(combo))
                if len(out) == count:
                    break
        top += 1
    return out


# ---------------------------------------------------------------------------
# Sigma-2 relations


@dataclass
class Sigma2Relation:
    """``phi(Z) = exists x forall y R(x, y, Z)`` with certified search bounds.

    ``x_bound`` and ``y_bound_fn`` make the unbounded quantifiers decidable on
    the universe of sets below ``2**width``.  ``decide`` is an independent
    direct decision procedure used to certify the bounds.  ``least_with_min``
    optionally gives the least set with a given minimum satisfying the bounded
    formula, which keeps witness searches from scanning exponentially many sets.
    """

    name: str
    R: Callable[[int, int, int], bool]
    x_bound: int
    y_bound_fn: Callable[[int, int], int]
    decide: Callable[[int], bool]
    width: int
    least_with_min: Optional[Callable[[int, Optional[int], Optional[int], int], Optional[int]]] = None
    certified: bool = False

    def holds(self, t: int, p: Optional[int] = None, q: Optional[int] = None) -> bool:
        """``exists x <= p forall y <= q R``; ``None`` means unbounded (certified)."""
        xs = self.x_bound if p is None else p
        for x in range(xs + 1):
            ys = self.y_bound_fn(x, t) if q is None else q
            if all(self.R(x, y, t) for y in range(ys + 1)):
                return True
        return False

    def least_with_min_brute(self, mu: int, p: Optional[int], q: Optional[int], max_elem: int) -> Optional[int]:
        if mu > max_elem:
            return None
        for rest in range(0, 1 << (max_elem - mu)):
            t = (1 | (rest << 1)) << mu
            if self.holds(t, p, q):
                return t
        return None

    def least(self, mu: int, p: Optional[int], q: Optional[int], max_elem: int) -> Optional[int]:
        if mu > max_elem:
            return None
        if self.least_with_min is not None:
            return self.least_with_min(mu, p, q, max_elem)
        return self.least_with_min_brute(mu, p, q, max_elem)

    def certify(self, universe_bits: Optional[int] = None) -> None:
        bits = min(self.width, 10) if universe_bits is None else universe_bits
        for z in range(1 << bits):
            if self.holds(z) != self.decide(z):
                raise BoundCertificationError(
                    f"{self.name}: bounded evaluation disagrees with decision at {format_set(z)}")
        self.certified = True


def sigma2_eval_bounded(rel: Sigma2Relation, p: int, q: int, t: int) -> bool:
    return rel.holds(t, p, q)


def sigma2_truth(rel: Sigma2Relation, t: int) -> bool:
    if not rel.certified:
        raise BoundCertificationError(f"{rel.name} has not been certified")
    return rel.holds(t)


def _min_or_none(z: int) -> Optional[int]:
    return min_elem(z) if z else None


def _rel_true(width: int) -> Sigma2Relation:
    return Sigma2Relation(
        "true", lambda x, y, z: True, 0, lambda x, z: 0, lambda z: True, width,
        least_with_min=lambda mu, p, q, me: 1 << mu)


def _rel_false(width: int) -> Sigma2Relation:
    return Sigma2Relation(
        "false", lambda x, y, z: False, 0, lambda x, z: 0, lambda z: False, width,
        least_with_min=lambda mu, p, q, me: None)


_EVENS = int("01" * 256, 2)  # bit b set for every even b < 512


def _all_even(z: int) -> bool:
    return z & ~_EVENS == 0 if z.bit_length() <= 512 else all(b % 2 == 0 for b in FinSet(z))


def _rel_subset_evens(width: int) -> Sigma2Relation:
    return Sigma2Relation(
        "subset_evens", lambda x, y, z: _all_even(z), 0, lambda x, z: 0, _all_even, width,
        least_with_min=lambda mu, p, q, me: (1 << mu) if mu % 2 == 0 else None)


def _rel_membership_threshold(width: int, t: int = 1) -> Sigma2Relation:
    def R(x, y, z):
        return x >= t and (z >> x) & 1 == 1

    def least(mu, p, q, me):
        hi = me if p is None else min(p, me)
        if mu >= t:
            return (1 << mu) if mu <= hi else None
        return (1 << mu) | (1 << t) if t <= hi else None

    return Sigma2Relation(
        f"membership_threshold(t={t})", R, max(width - 1, 0), lambda x, z: 0,
        lambda z: z.bit_length() - 1 >= t, width, least_with_min=least)


def _rel_delayed_witness(width: int, offset: int = 1) -> Sigma2Relation:
    def R(x, y, z):
        return z != 0 and x >= min_elem(z) + offset

    def least(mu, p, q, me):
        if p is not None and mu + offset > p:
            return None
        return 1 << mu

    return Sigma2Relation(
        f"delayed_witness(offset={offset})", R, width + offset, lambda x, z: 0,
        lambda z: z != 0, width, least_with_min=least)


def _rel_bounded_max(width: int) -> Sigma2Relation:
    def R(x, y, z):
        return (z >> y) & 1 == 0 or y < x

    def least(mu, p, q, me):
        # every element of T that is <= q must lie below p
        if p is None or (q is not None and mu > q) or mu < p:
            return 1 << mu
        return None

    return Sigma2Relation(
        "bounded_max", R, width, lambda x, z: z.bit_length() - 1 if z else 0,
        lambda z: True, width, least_with_min=least)


def _rel_contains_zero(width: int) -> Sigma2Relation:
    return Sigma2Relation(
        "contains_zero", lambda x, y, z: z & 1 == 1, 0, lambda x, z: 0, lambda z: z & 1 == 1,
        width, least_with_min=lambda mu, p, q, me: 1 if mu == 0 else None)


SIGMA2_KINDS: dict[str, Callable[..., Sigma2Relation]] = {
    "true": _rel_true,
    "false": _rel_false,
    "subset_evens": _rel_subset_evens,
    "membership_threshold": _rel_membership_threshold,
    "delayed_witness": _rel_delayed_witness,
    "bounded_max": _rel_bounded_max,
    "contains_zero": _rel_contains_zero,
}


def make_relation(spec: dict, width: int = 24, certify_bits: Optional[int] = None) -> Sigma2Relation:
    spec = dict(spec)
    kind = spec.pop("kind", None)
    if kind not in SIGMA2_KINDS:
        raise CatalogError(f"unknown sigma2 kind {kind!r}")
    try:
        rel = SIGMA2_KINDS[kind](width, **spec)
    except TypeError as exc:
        raise CatalogError(f"bad parameters for {kind}: {exc}") from None
    rel.certify(certify_bits)
    return rel


# ---------------------------------------------------------------------------
# catalog files


@dataclass
class LoadedCatalog:
    """Everything a catalog file describes, ready for the colorings."""

    catalog: Catalog
    sized: SizedFamilyCatalog
    relations: list[Sigma2Relation]
    source: dict
    ref: str

    def with_k(self, k: int) -> "LoadedCatalog":
        src = dict(self.source)
        src["k"] = k
        if "a_families" in src and any(len(f) != k for f in src["a_families"]):
            del src["a_families"]
        return load_catalog_dict(src, ref=self.ref)


BUILTIN_CATALOGS: dict[str, dict] = {
    # witness-hungry dyadic entry first so each entry fits below 2**14
    "default": {
        "families": [
            {"kind": "dyadic_blocks"},
            {"kind": "singletons", "delay": 0},
            {"kind": "delayed_singletons", "delay": 2},
            {"kind": "finite", "m": 2},
        ],
        "sigma2": [
            {"kind": "true"},
            {"kind": "subset_evens"},
            {"kind": "delayed_witness", "offset": 1},
            {"kind": "membership_threshold", "t": 1},
            {"kind": "bounded_max"},
            {"kind": "contains_zero"},
        ],
        "k": 2,
    },
    "sized": {
        "families": [
            {"kind": "singletons", "delay": 0},
            {"kind": "pairs"},
            {"kind": "delayed_singletons", "delay": 1},
            {"kind": "finite", "m": 2},
            {"kind": "interleaved", "period": 2, "phase": 1},
        ],
        "sigma2": [{"kind": "true"}],
        "k": 2,
    },
    # families whose witnesses get injured: overlapping members, late arrivals
    "mixed": {
        "families": [
            {"kind": "interleaved", "period": 3, "phase": 0},
            {"kind": "backfill"},
            {"kind": "pairs"},
            {"kind": "finite", "m": 2},
        ],
        "sigma2": [
            {"kind": "bounded_max"},
            {"kind": "contains_zero"},
            {"kind": "membership_threshold", "t": 2},
        ],
        "k": 1,
    },
    "singletons": {
        "families": [{"kind": "singletons", "delay": 0}],
        "sigma2": [{"kind": "true"}],
        "k": 1,
    },
    "finite": {
        "families": [{"kind": "finite", "m": 2}],
        "sigma2": [{"kind": "contains_zero"}],
        "k": 1,
    },
}


def load_catalog_dict(data: dict, ref: str = "<dict>", width: int = 24) -> LoadedCatalog:
    if not isinstance(data, dict):
        raise CatalogError("catalog must be a JSON object")
    unknown = set(data) - {"families", "sigma2", "k", "a_families", "description"}
    if unknown:
        raise CatalogError(f"unknown catalog keys {sorted(unknown)}")
    fams = data.get("families")
    if not isinstance(fams, list) or not fams:
        raise CatalogError("catalog needs a nonempty 'families' list")
    entries = [make_family(f) for f in fams]
    k = data.get("k", 1)
    if not isinstance(k, int) or k < 1:
        raise CatalogError("'k' must be a positive integer")
    if "a_families" in data:
        try:
            a_fams = [family(parse_set(s) for s in fam) for fam in data["a_families"]]
        except (ValueError, TypeError) as exc:
            raise CatalogError(f"bad a_families: {exc}") from None
    else:
        a_fams = default_a_families(k)
    sized = SizedFamilyCatalog(k, a_fams, entries)
    rels = [make_relation(r, width=width) for r in data.get("sigma2", [{"kind": "true"}])]
    if not rels:
        raise CatalogError("catalog needs at least one sigma2 relation")
    return LoadedCatalog(Catalog(entries), sized, rels, data, ref)


def load_catalog(ref: str | Path | None = None) -> LoadedCatalog:
    """Load ``builtin:NAME`` or a JSON file path (``None`` means builtin:default)."""
    if ref is None:
        ref = "builtin:default"
    ref = str(ref)
    if ref.startswith("builtin:"):
        name = ref.split(":", 1)[1]
        if name not in BUILTIN_CATALOGS:
            raise CatalogError(f"no builtin catalog {name!r}")
        return load_catalog_dict(BUILTIN_CATALOGS[name], ref=ref)
    try:
        data = json.loads(Path(ref).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise CatalogError(f"cannot read catalog {ref}: {exc}") from None
    return load_catalog_dict(data, ref=ref)


def builtin_catalogs(k: int = 2) -> tuple[Catalog, SizedFamilyCatalog, list[Sigma2Relation]]:
    loaded = load_catalog("builtin:default")
    sized = load_catalog("builtin:sized").with_k(k).sized
    return loaded.catalog, sized, loaded.relations


def describe(fam: Family) -> str:
    return "{" + ",".join(format_set(m) for m in fam) + "}"
