"""The local counting function C(x) of a society and what it measures.

C(x) is the number of arcs containing x.  It is an integer step function on the
circle; :func:`counting_function` builds it by an endpoint sweep, evaluating the
count separately at every arc endpoint and at the midpoint of every gap between
consecutive endpoints, then merging runs of equal value into maximal pieces.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Any, List, Optional, Sequence

from .errors import InvariantViolation
from .spectrum import FLOAT, Coord, Society, _inside, format_coord, kind_of, normalize

# beyond this many m-subsets, is_km_agreeable wants force=True when n > 20
SUBSET_LIMIT = 200_000


@dataclass(frozen=True)
class Piece:
    """A maximal interval of constant count.

    ``start == end`` with both ends closed is a single point.  ``start == end``
    with a closed start and open end is the whole circle ``[start, start + 1)``,
    which only occurs for a constant function.  ``start == end`` with both ends
    open is the circle punctured at ``start``.
    """

    start: Coord
    end: Coord
    start_closed: bool
    end_closed: bool
    value: int

    @property
    def is_point(self) -> bool:
        return self.start == self.end and self.start_closed and self.end_closed

    @property
    def is_circle(self) -> bool:
        return self.start == self.end and self.start_closed and not self.end_closed

    @property
    def is_punctured(self) -> bool:
        return self.start == self.end and not self.start_closed and not self.end_closed

    @property
    def length(self) -> Coord:
        if self.is_point:
            return self.start - self.start
        if self.is_circle or self.is_punctured:
            return self.start - self.start + 1
        span = self.end - self.start
        return span + 1 if span < 0 else span

    @property
    def euler_characteristic(self) -> int:
        if self.is_circle:
            return 0
        if self.start_closed and self.end_closed:
            return 1
        if not self.start_closed and not self.end_closed:
            return -1
        return 0

    def contains(self, x: Coord) -> bool:
        if self.is_circle:
            return True
        if self.is_point:
            return x == self.start
        if self.is_punctured:
            return x != self.start
        if x == self.start:
            return self.start_closed
        if x == self.end:
            return self.end_closed
        off, span = x - self.start, self.end - self.start
        if off < 0:
            off += 1
        if span < 0:
            span += 1
        return 0 < off < span


@dataclass(frozen=True)
class StepFunction:
    """C(x) as a circular sequence of maximal pieces, ordered by start."""

    breakpoints: tuple
    pieces: tuple
    all_closed: bool

    def __call__(self, x: Any) -> int:
        x = normalize(x)
        for piece in self.pieces:
            if piece.contains(x):
                return piece.value
        raise InvariantViolation(f"no piece contains {x!r}")

    @property
    def is_constant(self) -> bool:
        return len(self.pieces) == 1

    @property
    def max_value(self) -> int:
        return max(p.value for p in self.pieces)

    @property
    def min_value(self) -> int:
        return min(p.value for p in self.pieces)

    def neighbours(self, i: int):
        n = len(self.pieces)
        return self.pieces[(i - 1) % n], self.pieces[(i + 1) % n]


@dataclass(frozen=True)
class ExtremumIntervals:
    lmax: tuple
    lmin: tuple

    @property
    def signed_sum(self) -> int:
        """Sum of C over local maximum intervals minus the sum over local minima."""
        return sum(p.value for p in self.lmax) - sum(p.value for p in self.lmin)


def _elementary(society: Society, indices: Optional[Sequence[int]] = None):
    """Breakpoints and the alternating (point, gap) cells with their covering masks.

    Returns ``(breakpoints, cells)`` where each cell is ``(start, end, is_point, mask)``.
    """
    society.require_nonempty()
    idx = range(len(society)) if indices is None else indices
    tol = society.effective_tol
    spans = [(i, society[i].left, society[i].end, society[i].closed) for i in idx]
    bps = sorted({society[i].left for i in idx} | {society[i].right for i in idx})
    m = len(bps)

    def mask_at(x):
        bits = 0
        for i, left, end, closed in spans:
            if _inside(left, end, closed, x, tol):
                bits |= 1 << i
        return bits

    cells = []
    for j, b in enumerate(bps):
        nxt = bps[j + 1] if j + 1 < m else bps[0] + 1
        cells.append((b, b, True, mask_at(b)))
        cells.append((b, normalize(nxt) if j + 1 == m else nxt, False, mask_at(normalize((b + nxt) / 2))))
    return tuple(bps), cells


def cover_masks(society: Society) -> List[int]:
    """Distinct bitmasks of arcs covering each cell, keeping only maximal ones."""
    _, cells = _elementary(society)
    masks = sorted({c[3] for c in cells}, key=lambda b: -b.bit_count())
    kept: List[int] = []
    for b in masks:
        if not any(b & k == b for k in kept):
            kept.append(b)
    return kept


def counting_function(society: Society, indices: Optional[Sequence[int]] = None) -> StepFunction:
    """Build C(x) for ``society`` (or the sub-collection ``indices``)."""
    bps, cells = _elementary(society, indices)
    values = [c[3].bit_count() for c in cells]
    idx = range(len(society)) if indices is None else indices
    all_closed = all(society[i].closed for i in idx)
    n = len(cells)
    starts = [j for j in range(n) if values[j] != values[j - 1]]
    if not starts:
        b = bps[0]
        return StepFunction(bps, (Piece(b, b, True, False, values[0]),), all_closed)
    pieces = []
    for s, t in zip(starts, starts[1:] + [starts[0] + n]):
        first, last = cells[s], cells[(t - 1) % n]
        pieces.append(Piece(first[0], last[1], first[2], last[2], values[s]))
    pieces.sort(key=lambda p: (p.start, not p.start_closed))
    return StepFunction(bps, tuple(pieces), all_closed)


def riemann_integral(C: StepFunction) -> Coord:
    """Integral of C over the circle: the total arc length."""
    return sum((p.length * p.value for p in C.pieces), C.pieces[0].length * 0)


def euler_integral(C: StepFunction) -> int:
    """Integral of C against Euler characteristic; equals the number of closed arcs.

    Each maximal piece is a connected component of its level set, so the
    integral is the sum of value times the piece's Euler characteristic.
    """
    if not C.all_closed:
        raise ValueError("the Euler integral identity requires closed arcs")
    return sum(p.value * p.euler_characteristic for p in C.pieces)


def extremum_intervals(C: StepFunction) -> ExtremumIntervals:
    if C.is_constant:
        raise InvariantViolation("counting function is constant; no extremum intervals")
    lmax, lmin = [], []
    for i, piece in enumerate(C.pieces):
        before, after = C.neighbours(i)
        if piece.value > before.value and piece.value > after.value:
            lmax.append(piece)
        elif piece.value < before.value and piece.value < after.value:
            lmin.append(piece)
    return ExtremumIntervals(tuple(lmax), tuple(lmin))


def agreement_number(society: Society) -> int:
    """Largest number of arcs sharing a point."""
    return counting_function(society).max_value


def _check_km(n: int, k: int, m: int) -> None:
    if not (1 <= k <= m <= n):
        raise ValueError(f"need 1 <= k <= m <= n, got k={k}, m={m}, n={n}")


def is_km_agreeable(society: Society, k: int, m: int, force: bool = False) -> bool:
    """True iff every m arcs include k with a common point.

    Enumerates all m-subsets.  The count of a subset is maximised on some cell
    of the full society's sweep, so each subset is tested against the maximal
    cell masks instead of rebuilding its own counting function.
    """
    society.require_nonempty()
    n = len(society)
    _check_km(n, k, m)
    if k == 1:
        return True
    if n > 20 and comb(n, m) > SUBSET_LIMIT and not force:
        raise ValueError(f"C({n},{m}) subsets is too many to enumerate; pass force=True")
    masks = cover_masks(society)
    for subset in combinations(range(n), m):
        bits = 0
        for i in subset:
            bits |= 1 << i
        if not any((bits & c).bit_count() >= k for c in masks):
            return False
    return True


def min_agreeable_m(society: Society, k: int, start: int = None, force: bool = False) -> Optional[int]:
    """Smallest m with the society (k, m)-agreeable, or None if no m <= n works.

    Agreeability is monotone in m, so the search scans upward from ``start``.
    """
    n = len(society)
    m = max(k, start or k)
    while m <= n:
        if is_km_agreeable(society, k, m, force):
            return m
        m += 1
    return None


def step_function_csv(C: StepFunction) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["piece_start", "piece_end", "start_closed", "end_closed", "value"])
    for p in C.pieces:
        end = p.end
        if p.is_circle or p.is_punctured:
            end = p.start + 1 if kind_of(p.start) == FLOAT else Fraction(p.start) + 1
        w.writerow([format_coord(p.start), format_coord(end), int(p.start_closed), int(p.end_closed), p.value])
    return buf.getvalue()
