"""Set algebra on families of finite sets: unions, strong subtraction, matching.

Families are tuples of nonempty codes in increasing code order.  Colorings are
callables from a code to a color in ``range(arity)``; :class:`Coloring` wraps a
plain function and :func:`constant`, :func:`parity` etc. build common ones.
"""

from __future__ import annotations

import itertools
import random
from typing import Callable, Iterable, Optional, Sequence

from .finset import DEFAULT_WIDTH, FinSet, check_width, format_set

Family = tuple  # tuple[FinSet, ...] in code order


def family(members: Iterable[int]) -> Family:
    out = sorted({int(m) for m in members})
    if out and out[0] == 0:
        raise ValueError("families contain nonempty sets only")
    return tuple(FinSet(m) for m in out)


def format_family(fam: Iterable[int]) -> str:
    return "{" + ",".join(format_set(m) for m in fam) + "}"


class Coloring:
    """A total deterministic coloring of finite sets into ``range(arity)``."""

    def __init__(self, fn: Callable[[int], int], arity: int = 2, name: str = "coloring"):
        if arity < 1:
            raise ValueError("arity must be positive")
        self.fn = fn
        self.arity = arity
        self.name = name

    def __call__(self, b: int) -> int:
        return self.fn(int(b))

    def __repr__(self) -> str:
        return f"<Coloring {self.name} r={self.arity}>"


def constant(value: int = 0, arity: int = 1) -> Coloring:
    return Coloring(lambda b: value, arity=max(arity, value + 1), name=f"const{value}")


def parity() -> Coloring:
    """Color of a set is its cardinality mod 2."""
    return Coloring(lambda b: b.bit_count() & 1, arity=2, name="parity")


def contains(element: int = 0) -> Coloring:
    """Color 0 iff the set contains ``element``, else 1."""
    return Coloring(lambda b: 0 if (b >> element) & 1 else 1, arity=2, name=f"contains{element}")


def random_coloring(seed: int, bound: int, arity: int = 2) -> Coloring:
    """Uniform random table on codes below ``bound``; codes outside fold back in."""
    rng = random.Random(seed)
    table = [rng.randrange(arity) for _ in range(bound)]

    def fn(b: int) -> int:
        return table[b % bound]

    return Coloring(fn, arity=arity, name=f"random:seed={seed}")


def nu(fam: Sequence[int], cap: Optional[int] = None, width: int | None = DEFAULT_WIDTH) -> Family:
    """Nonempty unions of between 1 and ``cap`` members of ``fam``."""
    members = [int(m) for m in fam]
    if cap is None:
        cap = len(members)
    cap = min(cap, len(members))
    out: set[int] = set()
    for r in range(1, cap + 1):
        for combo in itertools.combinations(members, r):
            u = 0
            for m in combo:
                u |= m
            out.add(u)
    for u in out:
        check_width(u, width)
    return family(out)


def family_minus_set(fam: Iterable[int], b: int) -> Family:
    return tuple(FinSet(t) for t in fam if not int(t) & int(b))


def family_minus_family(fam: Iterable[int], bs: Iterable[int]) -> Family:
    mask = 0
    for b in bs:
        mask |= int(b)
    return family_minus_set(fam, mask)


def max_disjoint(fam: Sequence[int], target: Optional[int] = None) -> tuple[int, ...]:
    """A largest pairwise disjoint subfamily, or any one of size ``target``.

    Greedy selection by increasing maximum first; when it falls short of the
    target an exact branch-and-bound search takes over.
    """
    members = sorted({int(m) for m in fam if m}, key=lambda m: (m.bit_length(), m))
    greedy: list[int] = []
    used = 0
    for m in members:
        if not m & used:
            greedy.append(m)
            used |= m
    if target is not None and len(greedy) >= target:
        return tuple(greedy[:target])

    best = list(greedy)
    goal = len(members) if target is None else target

    def search(start: int, chosen: list[int], used: int) -> bool:
        nonlocal best
        if len(chosen) > len(best):
            best = list(chosen)
            if len(best) >= goal:
                return True
        if len(chosen) + len(members) - start <= len(best):
            return False
        for idx in range(start, len(members)):
            m = members[idx]
            if not m & used:
                chosen.append(m)
                if search(idx + 1, chosen, used | m):
                    return True
                chosen.pop()
        return False

    search(0, [], 0)
    return tuple(best[:goal] if target is not None else best)


def generates_ip_at_scale(fam: Sequence[int], m: int) -> bool:
    """Finite proxy for "contains infinitely many pairwise disjoint members"."""
    if m <= 0:
        return True
    return len(max_disjoint(fam, target=m)) >= m


def _check_disjoint(ds: Iterable[int], b: int) -> None:
    for d in ds:
        if int(d) & int(b):
            raise ValueError(f"{format_set(d)} meets {format_set(b)}")


def half_matches(ds: Iterable[int], b: int, c: Callable[[int], int]) -> Optional[FinSet]:
    """Least ``D`` in ``ds`` with ``c(B) == c(D | B)``, or None."""
    ds = sorted(int(d) for d in ds)
    _check_disjoint(ds, b)
    cb = c(b)
    for d in ds:
        if c(d | b) == cb:
            return FinSet(d)
    return None


def full_matches(ds: Iterable[int], b: int, c: Callable[[int], int]) -> Optional[FinSet]:
    """Least ``D`` in ``ds`` with ``c(D) == c(B) == c(D | B)``, or None."""
    ds = sorted(int(d) for d in ds)
    _check_disjoint(ds, b)
    cb = c(b)
    for d in ds:
        if c(d) == cb and c(d | b) == cb:
            return FinSet(d)
    return None


def matches_family(ds: Iterable[int], bs: Iterable[int], c: Callable[[int], int],
                   mode: str = "half") -> Optional[FinSet]:
    """Least member of ``bs`` that ``ds`` fails to match, or None if all match."""
    if mode not in ("half", "full"):
        raise ValueError(f"mode must be 'half' or 'full', not {mode!r}")
    test = half_matches if mode == "half" else full_matches
    ds = list(ds)
    for b in sorted(int(x) for x in bs):
        if test(ds, b, c) is None:
            return FinSet(b)
    return None
