from __future__ import annotations

import json
import threading
from typing import Any, Callable, Iterable, Optional

from ..finset import FinSet, format_set


class MultipleWitnessViolation(AssertionError):
    """Two witnesses qualified where the construction allows at most one."""


class RecursiveColoring:
    """Memoized two-coloring defined by a local rule over smaller sets.

    Subclasses implement ``rule(b) -> (color, info)``, calling ``self.color``
    on the sets the definition recurses into.  ``flips`` names codes whose
    computed color is inverted after evaluation; it exists for fault-injection
    runs and is part of the coloring's identity so reports replay exactly.
    """

    arity = 2
    cid = "coloring"

    def __init__(self, flips: Iterable[int] = (), trace: Optional[Callable[[dict], None]] = None):
        self.flips = frozenset(int(f) for f in flips)
        self.trace = trace
        self.memo: dict[int, int] = {0: 0}
        self._lock = threading.Lock()

    def rule(self, b: int) -> tuple[int, dict]:
        raise NotImplementedError

    def color(self, b: int) -> int:
        b = int(b)
        got = self.memo.get(b)
        if got is not None:
            return got
        value, info = self.rule(b)
        if b in self.flips:
            value = 1 - value
            info = dict(info, flipped=True)
        with self._lock:
            self.memo.setdefault(b, value)
        if self.trace is not None:
            self.trace({"set": format_set(b), "code": b, **_jsonable(info), "color": value})
        return value

    __call__ = color

    def check_rule(self, b: int) -> tuple[int, int]:
        """Return ``(rule value, reported value)`` for the definition check."""
        reported = self.color(b)
        value, _ = self.rule(b)
        return value, reported

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.cid}>"


def _jsonable(info: dict) -> dict:
    out: dict[str, Any] = {}
    for k, v in info.items():
        if isinstance(v, FinSet):
            out[k] = format_set(v)
        elif isinstance(v, dict):
            out[k] = _jsonable(v)
        else:
            out[k] = v
    return out


def json_tracer(stream) -> Callable[[dict], None]:
    def emit(record: dict) -> None:
        stream.write(json.dumps(record, sort_keys=True) + "\n")

    return emit


def induced_integer_coloring(c: Callable[[int], int]) -> Callable[[int], int]:
    """Color positive integers through their binary supports."""

    def induced(n: int) -> int:
        if n < 1:
            raise ValueError("induced coloring is defined on positive integers")
        return c(n)

    return induced
