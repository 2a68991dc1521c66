"""Finite sets of naturals, stored as their binary codes.

A finite set ``S`` is identified with the integer ``sum(2**b for b in S)``.
Ordering sets by code gives an order of type omega in which ``max B < max C``
implies ``B`` precedes ``C``; every "least" search in the package uses it.

Most of the heavy code paths work on raw ``int`` codes.  :class:`FinSet` is an
``int`` subclass that adds element access and the ``{1,4,9}`` text form, so the
two can be mixed freely.
"""

from __future__ import annotations

import re
from typing import Iterable, Sequence, Union

DEFAULT_WIDTH = 64


class PrecedenceViolation(ValueError):
    """A block union was requested for sets that are not in block order."""


class UniverseOverflow(OverflowError):
    """A set does not fit in the configured universe bit-width."""


class FinSet(int):
    __slots__ = ()

    def __new__(cls, code: int = 0):
        if code < 0:
            raise ValueError(f"negative code {code}")
        return super().__new__(cls, code)

    @classmethod
    def of(cls, *elements: int) -> "FinSet":
        return cls(encode(elements, width=None))

    @property
    def code(self) -> int:
        return int(self)

    @property
    def elements(self) -> tuple[int, ...]:
        return tuple(iter_bits(self))

    @property
    def min(self) -> int:
        return min_elem(self)

    @property
    def max(self) -> int:
        return max_elem(self)

    def __len__(self) -> int:
        return int(self).bit_count()

    def __iter__(self):
        return iter_bits(self)

    def __contains__(self, b: object) -> bool:
        return isinstance(b, int) and b >= 0 and (int(self) >> b) & 1 == 1

    def __or__(self, other: int) -> "FinSet":
        return FinSet(int(self) | int(other))

    def __and__(self, other: int) -> "FinSet":
        return FinSet(int(self) & int(other))

    def __sub__(self, other: int) -> "FinSet":
        return FinSet(int(self) & ~int(other))

    def __repr__(self) -> str:
        return format_set(self)

    __str__ = __repr__


SetLike = Union[int, FinSet]


_BYTE_BITS = tuple(tuple(i for i in range(8) if n >> i & 1) for n in range(256))


def bits(code: int) -> Sequence[int]:
    """Elements of ``code`` in increasing order, a byte at a time."""
    code = int(code)  # plain int arithmetic, not FinSet operators
    if code < 256:
        return _BYTE_BITS[code]
    out: list[int] = []
    base = 0
    while code:
        byte = code & 255
        if byte:
            out += [base + b for b in _BYTE_BITS[byte]]
        code >>= 8
        base += 8
    return out


def iter_bits(code: int):
    return iter(bits(code))


def min_elem(code: int) -> int:
    if not code:
        raise ValueError("empty set has no minimum")
    return (code & -code).bit_length() - 1


def max_elem(code: int) -> int:
    if not code:
        raise ValueError("empty set has no maximum")
    return code.bit_length() - 1


def below(code: int, k: int) -> int:
    """Elements of ``code`` strictly less than ``k``."""
    return code & ((1 << k) - 1) if k > 0 else 0


def at_least(code: int, k: int) -> int:
    """Elements of ``code`` greater than or equal to ``k``."""
    return code >> k << k if k > 0 else code


def check_width(code: int, width: int | None = DEFAULT_WIDTH) -> None:
    if width is not None and code >> width:
        raise UniverseOverflow(f"{format_set(code)} exceeds universe width {width}")


def encode(elements: Iterable[int], width: int | None = DEFAULT_WIDTH) -> int:
    code = 0
    for b in elements:
        if b < 0:
            raise ValueError(f"negative element {b}")
        code |= 1 << b
    check_width(code, width)
    return code


def decode(n: int) -> FinSet:
    return FinSet(n)


def prec(b: int, c: int) -> bool:
    return int(b) < int(c)


def block_union(b: int, c: int) -> FinSet:
    if b and c and max_elem(b) >= min_elem(c):
        raise PrecedenceViolation(f"max {format_set(b)} >= min {format_set(c)}")
    return FinSet(int(b) | int(c))


def is_initial_segment(a: int, b: int) -> bool:
    return a != 0 and a & b == a and below(b, max_elem(a) + 1) == a


def is_final_segment(d: int, b: int) -> bool:
    return d != 0 and d & b == d and at_least(b, min_elem(d)) == d


def contains_segment(b: int, c: int) -> bool:
    """True when ``b = A0 u C u A1`` with ``A0`` below and ``A1`` above ``C``."""
    if not c or c & b != c:
        return False
    lo = min_elem(c)
    hi = max_elem(c)
    return below(at_least(b, lo), hi + 1) == c


def disjoint(b: int, c: int) -> bool:
    return int(b) & int(c) == 0


def final_segments(code: int):
    """Nonempty final segments of ``code``, shortest first."""
    seg = 0
    for b in reversed(list(iter_bits(code))):
        seg |= 1 << b
        yield seg


def initial_segments(code: int):
    """Nonempty initial segments of ``code``, shortest first."""
    seg = 0
    for b in iter_bits(code):
        seg |= 1 << b
        yield seg


def format_set(code: int) -> str:
    return "{" + ",".join(str(b) for b in iter_bits(int(code))) + "}"


_SET_RE = re.compile(r"^\{\s*(\d+(\s*,\s*\d+)*)?\s*\}$")


def parse_set(text: str, width: int | None = DEFAULT_WIDTH) -> FinSet:
    """Parse ``{1,4,9}`` or a decimal code such as ``530``."""
    text = text.strip()
    if _SET_RE.match(text):
        inner = text[1:-1].strip()
        elems = [int(t) for t in inner.split(",")] if inner else []
        return FinSet(encode(elems, width=width))
    if text.isdigit():
        code = int(text)
        check_width(code, width)
        return FinSet(code)
    raise ValueError(f"not a finite set: {text!r}")
