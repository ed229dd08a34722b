"""Coordinates on the unit circle R/Z, arcs, and societies of arcs.

A coordinate is either a :class:`fractions.Fraction` (the *rational* kind) or a
Python ``float`` (the *float* kind).  Integers are accepted wherever a rational
is and are promoted to ``Fraction``.  Every coordinate handed out by this module
is reduced into ``[0, 1)``.

Arcs are stored as ``(left, length)``; the right endpoint is derived.  Membership
is tested against the unreduced interval ``[left, left + length]`` for both ``x``
and ``x + 1``, so an arc always contains its own right endpoint exactly, even in
float arithmetic.
"""
from __future__ import annotations

import json
import math
import numbers
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Iterator, Optional, Union

from .errors import KindMismatchError, SocietyFormatError

Coord = Union[Fraction, float]

CLOSED = "closed"
HALF_OPEN = "half_open"
CLOSURES = (CLOSED, HALF_OPEN)

RATIONAL = "rational"
FLOAT = "float"

# tolerance offered for float societies read from disk, where endpoints may tie
DEFAULT_FILE_TOL = 1e-12


def kind_of(x: Any) -> str:
    if isinstance(x, bool):
        raise TypeError("booleans are not coordinates")
    if isinstance(x, float):
        return FLOAT
    if isinstance(x, numbers.Rational):
        return RATIONAL
    if isinstance(x, numbers.Real):
        # numpy floating scalars that do not subclass float
        return FLOAT
    raise TypeError(f"not a coordinate: {x!r}")


def normalize(x: Any) -> Coord:
    """Reduce ``x`` modulo 1 into ``[0, 1)``.

    >>> normalize(1.25)
    0.25
    >>> normalize(Fraction(-1, 4))
    Fraction(3, 4)
    """
    if kind_of(x) == FLOAT:
        x = float(x)
        if not math.isfinite(x):
            raise ValueError(f"non-finite coordinate: {x!r}")
        y = x % 1.0
        # tiny negatives round up to exactly 1.0
        return 0.0 if y == 1.0 else y
    return Fraction(x) % 1


def _same_kind(*values: Any) -> str:
    kinds = {kind_of(v) for v in values}
    if len(kinds) != 1:
        raise KindMismatchError(f"mixed coordinate kinds: {sorted(kinds)}")
    return kinds.pop()


def _inside(left, end, closed: bool, x, tol=0.0) -> bool:
    # x in [0,1); the arc occupies [left, end] on the line with left in [0,1), end < 2
    if tol:
        lo, hi = left - tol, (end + tol if closed else end - tol)
    else:
        lo, hi = left, end
    if lo <= x and (x <= hi if closed else x < hi):
        return True
    x = x + 1
    return lo <= x and (x <= hi if closed else x < hi)


@dataclass(frozen=True)
class Arc:
    """An approval set: the arc from ``left`` running counterclockwise for ``length``."""

    left: Coord
    length: Coord
    closure: str = CLOSED

    def __post_init__(self):
        kind = _same_kind(self.left, self.length)
        if self.closure not in CLOSURES:
            raise ValueError(f"closure must be one of {CLOSURES}, got {self.closure!r}")
        length = float(self.length) if kind == FLOAT else Fraction(self.length)
        if kind == FLOAT and not math.isfinite(length):
            raise ValueError("non-finite arc length")
        if not 0 < length < 1:
            raise ValueError(f"arc length must lie in (0, 1), got {self.length!r}")
        object.__setattr__(self, "left", normalize(self.left))
        object.__setattr__(self, "length", length)

    @property
    def kind(self) -> str:
        return kind_of(self.left)

    @property
    def closed(self) -> bool:
        return self.closure == CLOSED

    @property
    def end(self) -> Coord:
        """Unreduced right endpoint ``left + length``, in ``(0, 2)``."""
        return self.left + self.length

    @property
    def right(self) -> Coord:
        e = self.end
        # exact for floats: e in [1, 2) has ulp 2**-52
        return e - 1 if e >= 1 else e

    def contains(self, x: Any, tol: float = 0.0) -> bool:
        return arc_contains(self, x, tol)

    def shifted(self, t: Any) -> "Arc":
        return Arc(normalize(self.left + t), self.length, self.closure)


def arc_contains(a: Arc, x: Any, tol: float = 0.0) -> bool:
    """True iff ``x`` lies in ``a`` under its closure rule.

    ``tol`` only applies to float arcs; it widens closed ends and narrows open
    ends, so ties resolve toward the closure rule.
    """
    if kind_of(x) != a.kind:
        raise KindMismatchError(f"cannot test a {kind_of(x)} point against a {a.kind} arc")
    x = normalize(x)
    return _inside(a.left, a.end, a.closed, x, tol if a.kind == FLOAT else 0)


def arcs_intersect(a: Arc, b: Arc, tol: float = 0.0) -> bool:
    # every nonempty intersection of two proper arcs starts at one of their left endpoints
    if a.kind != b.kind:
        raise KindMismatchError("arcs of different kinds")
    return arc_contains(a, b.left, tol) or arc_contains(b, a.left, tol)


@dataclass(frozen=True)
class Society:
    """An ordered collection of arcs; the position of an arc is its voter index."""

    arcs: tuple
    name: Optional[str] = None
    tol: float = 0.0

    def __post_init__(self):
        arcs = tuple(self.arcs)
        for a in arcs:
            if not isinstance(a, Arc):
                raise TypeError(f"expected Arc, got {type(a).__name__}")
        if arcs and len({a.kind for a in arcs}) != 1:
            raise KindMismatchError("a society's arcs must share one coordinate kind")
        if self.tol < 0:
            raise ValueError("tolerance must be nonnegative")
        object.__setattr__(self, "arcs", arcs)

    def __len__(self) -> int:
        return len(self.arcs)

    def __iter__(self) -> Iterator[Arc]:
        return iter(self.arcs)

    def __getitem__(self, i: int) -> Arc:
        return self.arcs[i]

    @property
    def kind(self) -> Optional[str]:
        return self.arcs[0].kind if self.arcs else None

    @property
    def all_closed(self) -> bool:
        return all(a.closed for a in self.arcs)

    @property
    def is_fixed_length(self) -> bool:
        return len({a.length for a in self.arcs}) <= 1

    @property
    def fixed_length(self) -> Optional[Coord]:
        """The common arc length, or None when lengths differ or the society is empty."""
        if self.arcs and self.is_fixed_length:
            return self.arcs[0].length
        return None

    @property
    def effective_tol(self):
        return self.tol if self.kind == FLOAT else 0

    def contains(self, i: int, x: Any) -> bool:
        return arc_contains(self.arcs[i], x, self.tol)

    def subsociety(self, indices: Iterable[int]) -> "Society":
        return Society(tuple(self.arcs[i] for i in indices), self.name, self.tol)

    def shifted(self, t: Any) -> "Society":
        return Society(tuple(a.shifted(t) for a in self.arcs), self.name, self.tol)

    def require_nonempty(self) -> None:
        if not self.arcs:
            raise ValueError("society has no arcs")


def make_society(spans, closure: str = CLOSED, name: Optional[str] = None) -> Society:
    """Build a society from ``(left, length)`` pairs."""
    return Society(tuple(Arc(left, length, closure) for left, length in spans), name)


# --- serialization -------------------------------------------------------

_INT_RE = re.compile(r"^[+-]?\d+$")
_RATIONAL_RE = re.compile(r"^[+-]?\d+\s*/\s*\d+$")


def format_coord(x: Coord) -> str:
    """``num/den`` for rationals, shortest round-trip decimal for floats."""
    if kind_of(x) == RATIONAL:
        x = Fraction(x)
        return f"{x.numerator}/{x.denominator}"
    return repr(float(x))


def coord_to_json(x: Coord):
    return format_coord(x) if kind_of(x) == RATIONAL else float(x)


def parse_coord(text: str, kind: Optional[str] = None) -> Coord:
    """Parse ``"3/7"`` as a rational or ``"0.15"`` as a float.

    A bare integer such as ``"0"`` takes ``kind`` (rational when unspecified).
    """
    if not isinstance(text, str):
        raise SocietyFormatError(f"coordinates must be strings, got {text!r}")
    s = text.strip()
    try:
        if _RATIONAL_RE.match(s):
            if kind == FLOAT:
                raise SocietyFormatError(f"rational {text!r} where a decimal was expected")
            return Fraction(s.replace(" ", ""))
        if _INT_RE.match(s):
            return float(s) if kind == FLOAT else Fraction(int(s))
        value = float(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise SocietyFormatError(f"bad coordinate {text!r}") from exc
    if kind == RATIONAL:
        raise SocietyFormatError(f"decimal {text!r} where a rational was expected")
    if not math.isfinite(value):
        raise SocietyFormatError(f"non-finite coordinate {text!r}")
    return value


def _string_kind(s: str) -> Optional[str]:
    s = s.strip()
    if _RATIONAL_RE.match(s):
        return RATIONAL
    if _INT_RE.match(s):
        return None
    return FLOAT


def society_to_dict(society: Society) -> dict:
    out: dict = {}
    if society.name is not None:
        out["name"] = society.name
    out["arcs"] = [
        {"left": format_coord(a.left), "length": format_coord(a.length), "closure": a.closure}
        for a in society.arcs
    ]
    return out


def society_from_dict(data: Any, tol: float = 0.0) -> Society:
    if not isinstance(data, dict):
        raise SocietyFormatError("society must be a JSON object")
    raw = data.get("arcs")
    if not isinstance(raw, list) or not raw:
        raise SocietyFormatError('society needs a nonempty "arcs" array')
    name = data.get("name")
    if name is not None and not isinstance(name, str):
        raise SocietyFormatError('"name" must be a string')
    kinds = set()
    for entry in raw:
        if not isinstance(entry, dict):
            raise SocietyFormatError("each arc must be an object")
        for key in ("left", "length"):
            if not isinstance(entry.get(key), str):
                raise SocietyFormatError(f'arc field "{key}" must be a string')
            kinds.add(_string_kind(entry[key]))
    kinds.discard(None)
    if len(kinds) > 1:
        raise SocietyFormatError("file mixes decimal and rational coordinates")
    kind = kinds.pop() if kinds else RATIONAL
    arcs = []
    for entry in raw:
        closure = entry.get("closure", CLOSED)
        try:
            arcs.append(Arc(parse_coord(entry["left"], kind), parse_coord(entry["length"], kind), closure))
        except SocietyFormatError:
            raise
        except (ValueError, TypeError) as exc:
            raise SocietyFormatError(str(exc)) from exc
    return Society(tuple(arcs), name, tol if kind == FLOAT else 0.0)


def dumps_society(society: Society) -> str:
    return json.dumps(society_to_dict(society), indent=2)


def loads_society(text: str, tol: float = 0.0) -> Society:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SocietyFormatError(f"invalid JSON: {exc}") from exc
    return society_from_dict(data, tol)


def load_society(path, tol: float = 0.0) -> Society:
    with open(path, encoding="utf-8") as fh:
        return loads_society(fh.read(), tol)


def dump_society(society: Society, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_society(society) + "\n")
