"""Piercing sets for circular societies.

The workhorses operate on plain ``(left, length, end, closed)`` tuples so the
Monte Carlo driver can call them without building dataclasses per trial:

* :func:`_greedy`: earliest-right-endpoint greedy on a society cut at an
  uncovered point; optimal for linear societies and also a maximum packing.
* :func:`_alg2`: take a point, drop every arc it pierces, finish greedily.
* :func:`_exact`: cut at an uncovered point when one exists; otherwise try
  every useful first point inside a seed arc and keep the smallest result.

Every "does this point pierce that arc" decision goes through one predicate,
so witnesses agree with :func:`~circpierce.spectrum.arc_contains` exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

from .errors import InvariantViolation
from .spectrum import FLOAT, Coord, Society, _inside, kind_of, normalize

GREEDY = "greedy_linear"
ALG2 = "circular_alg2"
EXACT = "exact"


@dataclass(frozen=True)
class PiercingResult:
    """Piercing points, and for each voter the index of the point that pierces it."""

    points: tuple
    witness: Dict[int, int]
    method: str
    optimal: bool
    # voter indices of pairwise-disjoint arcs; a lower bound on tau when attached
    certificate: Optional[tuple] = None

    @property
    def size(self) -> int:
        return len(self.points)

    @property
    def tau(self) -> Optional[int]:
        return len(self.points) if self.optimal else None


@dataclass(frozen=True)
class DisjointFamily:
    arc_indices: tuple
    certified_unique: bool


# --- kernel ---------------------------------------------------------------

def _spans(society: Society) -> list:
    return [(a.left, a.length, a.end, a.closed) for a in society.arcs]


def _hit(arc, x, tol) -> bool:
    return _inside(arc[0], arc[2], arc[3], x, tol)


def _meets(a, b, tol) -> bool:
    return _inside(a[0], a[2], a[3], b[0], tol) or _inside(b[0], b[2], b[3], a[0], tol)


def _right(arc):
    e = arc[2]
    return e - 1 if e >= 1 else e


def _offset(x, cut):
    d = x - cut
    return d + 1 if d < 0 else d


def _greedy(arcs, idx, cut, tol):
    """Greedy piercing of ``arcs[idx]``, none of which may contain ``cut``.

    Returns ``(points, witness, chosen)`` where ``chosen[j]`` is the arc whose
    right end produced ``points[j]``; the chosen arcs are pairwise disjoint.
    Among equal right ends a half-open arc comes first (it ends sooner), then
    the lowest voter index.
    """
    order = []
    for i in idx:
        left, length, _, closed = arcs[i]
        order.append((_offset(left, cut) + length, closed, i))
    order.sort()
    points: list = []
    chosen: list = []
    witness: Dict[int, int] = {}
    pending = list(idx)
    for endkey, closed, i in order:
        if i in witness:
            continue
        if closed:
            x = _right(arcs[i])
        else:
            # the right end is excluded: use the middle of the last cell inside the arc
            start = _offset(arcs[i][0], cut)
            b = start
            for j in pending:
                lo = _offset(arcs[j][0], cut)
                hi = lo + arcs[j][1]
                if b < lo < endkey:
                    b = lo
                if b < hi < endkey:
                    b = hi
            x = normalize(cut + (b + endkey) / 2)
        slot = len(points)
        points.append(x)
        chosen.append(i)
        still = []
        for j in pending:
            if j in witness:
                continue
            if _hit(arcs[j], x, tol):
                witness[j] = slot
            else:
                still.append(j)
        pending = still
        if i not in witness:
            raise InvariantViolation(f"greedy point {x!r} misses its own arc {i}")
    return points, witness, chosen


def _largest_gap_midpoint(arcs, idx, tol):
    """Midpoint of the widest stretch covered by none of ``arcs[idx]``, or None."""
    if not idx:
        return None
    items = sorted((arcs[i][0], arcs[i][2]) for i in idx)
    reach = max(e for _, e in items) - 1
    wraps = reach > 0
    cursor = reach if wraps else items[0][0]
    gaps = []
    for left, end in items:
        if left > cursor:
            gaps.append((cursor, left))
        if end > cursor:
            cursor = end
    if not wraps:
        # the stretch from the last reach round through 0 to the first left
        first = items[0][0]
        if cursor < first + 1:
            gaps.append((cursor, first + 1))
    gaps = [g for g in gaps if g[1] - g[0] > 2 * tol]
    if not gaps:
        return None
    lo, hi = max(gaps, key=lambda g: g[1] - g[0])
    return normalize((lo + hi) / 2)


def _alg2(arcs, x, tol):
    """Start from ``x``; pierce what ``x`` misses greedily from a cut at ``x``.

    ``x`` is kept only if it pierces something.
    """
    n = len(arcs)
    rest = [i for i in range(n) if not _hit(arcs[i], x, tol)]
    points, witness, chosen = _greedy(arcs, rest, x, tol)
    if len(rest) == n:
        return points, witness, chosen, False
    witness = {i: s + 1 for i, s in witness.items()}
    for i in range(n):
        if i not in witness:
            witness[i] = 0
    return [x] + points, witness, chosen, True


def _first_point_candidates(arcs, seed, tol):
    """Points inside the seed arc that some minimum piercing set can start from.

    For closed arcs, a point piercing the seed can slide clockwise until it
    reaches the right end of an arc it pierces, so the right ends lying inside
    the seed (clipped to the seed's own right end) suffice.  Half-open arcs
    break that slide, so one point per cell of the endpoint sweep is used.
    """
    a = arcs[seed]
    if all(arc[3] for arc in arcs):
        out = {}
        ra = _right(a)
        for b in arcs:
            if b is a or _meets(a, b, tol):
                rb = _right(b)
                out.setdefault(rb if _hit(a, rb, tol) else ra, None)
        return list(out)
    bps = sorted({arc[0] for arc in arcs} | {_right(arc) for arc in arcs})
    cells = []
    for j, b in enumerate(bps):
        nxt = bps[j + 1] if j + 1 < len(bps) else bps[0] + 1
        cells.append(b)
        cells.append(normalize((b + nxt) / 2))
    return [x for x in cells if _hit(a, x, tol)]


def _seed_arc(arcs, tol) -> int:
    n = len(arcs)
    degree = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if _meets(arcs[i], arcs[j], tol):
                degree[i] += 1
                degree[j] += 1
    return min(range(n), key=lambda i: (degree[i], i))


def _exact(arcs, tol):
    """Minimum piercing set; returns ``(points, witness, certificate or None)``."""
    n = len(arcs)
    idx = list(range(n))
    cut = _largest_gap_midpoint(arcs, idx, tol)
    if cut is not None:
        points, witness, chosen = _greedy(arcs, idx, cut, tol)
        return points, witness, tuple(chosen)
    seed = _seed_arc(arcs, tol)
    best = None
    for x in _first_point_candidates(arcs, seed, tol):
        points, witness, _, _ = _alg2(arcs, x, tol)
        key = (len(points), sorted(points))
        if best is None or key < best[0]:
            best = (key, points, witness)
    return best[1], best[2], None


def exact_tau(arcs, tol=0.0) -> int:
    """Piercing number of raw ``(left, length, end, closed)`` spans."""
    return len(_exact(arcs, tol)[0])


# --- public API -----------------------------------------------------------

def _result(points, witness, method, optimal, certificate=None) -> PiercingResult:
    return PiercingResult(tuple(points), dict(sorted(witness.items())), method, optimal,
                          None if certificate is None else tuple(certificate))


def _coerce_point(society: Society, x: Any):
    if kind_of(x) != society.kind:
        if society.kind == FLOAT:
            x = float(x)
        else:
            raise TypeError("a rational society needs a rational point")
    return normalize(x)


def uncovered_point(society: Society) -> Optional[Coord]:
    """Midpoint of the largest stretch of the circle no arc covers, or None."""
    society.require_nonempty()
    return _largest_gap_midpoint(_spans(society), list(range(len(society))), society.effective_tol)


def is_linear_equivalent(society: Society) -> bool:
    return uncovered_point(society) is not None


def greedy_linear_pierce(society: Society, cut: Any = None) -> PiercingResult:
    """Minimum piercing set of a linear-equivalent society.

    The society is unrolled at ``cut`` (default: the middle of its largest
    uncovered stretch); ``cut`` must not lie in any arc.
    """
    society.require_nonempty()
    arcs = _spans(society)
    tol = society.effective_tol
    if cut is None:
        cut = uncovered_point(society)
        if cut is None:
            raise ValueError("society covers the circle; it has no linear unrolling")
    else:
        cut = _coerce_point(society, cut)
        if any(_hit(a, cut, tol) for a in arcs):
            raise ValueError(f"cut point {cut!r} lies inside an arc")
    points, witness, chosen = _greedy(arcs, list(range(len(arcs))), cut, tol)
    return _result(points, witness, GREEDY, True, chosen)


def circular_pierce_alg2(society: Society, x: Any, certify: bool = True) -> PiercingResult:
    """Piercing set seeded with ``x``; at most one larger than the minimum.

    With ``certify`` the result is marked optimal when it matches the exact
    solver (or when ``x`` was unused and the greedy packing certifies it).
    """
    society.require_nonempty()
    arcs = _spans(society)
    tol = society.effective_tol
    x = _coerce_point(society, x)
    points, witness, chosen, used = _alg2(arcs, x, tol)
    certificate = None if used else tuple(chosen)
    optimal = certificate is not None
    if not optimal and certify:
        optimal = len(points) == exact_tau(arcs, tol)
    return _result(points, witness, ALG2, optimal, certificate)


def exact_pierce(society: Society) -> PiercingResult:
    society.require_nonempty()
    points, witness, certificate = _exact(_spans(society), society.effective_tol)
    return _result(points, witness, EXACT, True, certificate)


def piercing_number(society: Society) -> int:
    society.require_nonempty()
    return exact_tau(_spans(society), society.effective_tol)


def verify_piercing(society: Society, result: PiercingResult) -> bool:
    """Every arc contains its witness point, and the points are distinct."""
    if len(set(result.points)) != len(result.points):
        return False
    if set(result.witness) != set(range(len(society))):
        return False
    return all(society.contains(i, result.points[j]) for i, j in result.witness.items())


# --- packings -------------------------------------------------------------

def max_disjoint_family(society: Society) -> tuple:
    """A largest pairwise-disjoint sub-collection (voter indices, ascending)."""
    society.require_nonempty()
    arcs = _spans(society)
    tol = society.effective_tol
    n = len(arcs)
    cut = _largest_gap_midpoint(arcs, list(range(n)), tol)
    if cut is not None:
        return tuple(sorted(_greedy(arcs, list(range(n)), cut, tol)[2]))
    best: tuple = ()
    for a in range(n):
        # every arc disjoint from a lives in a's complement, a linear stretch
        rest = [i for i in range(n) if not _meets(arcs[a], arcs[i], tol)]
        family = (a,) + tuple(_greedy(arcs, rest, arcs[a][0], tol)[2]) if rest else (a,)
        if len(family) > len(best):
            best = tuple(sorted(family))
    return best


def _inside_other(a, b) -> bool:
    """Arc ``a`` is a subset of arc ``b``."""
    reach = _offset(a[0], b[0]) + a[1]
    if reach < b[1]:
        return True
    return reach == b[1] and (b[3] or not a[3])


def _nested(arcs) -> bool:
    """True if some arc lies inside another (coinciding arcs included)."""
    return any(i != j and _inside_other(a, b) for i, a in enumerate(arcs) for j, b in enumerate(arcs))


def extract_disjoint_family(society: Society) -> DisjointFamily:
    """Pairwise-disjoint arcs whose union holds every other arc's left endpoint.

    For a linear-equivalent society these are the arcs whose right ends the
    greedy picks.  The family is certified unique when no arc sits inside
    another, the covering property holds, and rebuilding it as "leftmost arc
    disjoint from those already taken" never faces a tie.  A society that
    covers the circle gets a maximum packing instead, never certified.
    """
    society.require_nonempty()
    arcs = _spans(society)
    tol = society.effective_tol
    n = len(arcs)
    cut = _largest_gap_midpoint(arcs, list(range(n)), tol)
    if cut is None:
        return DisjointFamily(max_disjoint_family(society), False)
    _, _, chosen = _greedy(arcs, list(range(n)), cut, tol)
    family = tuple(chosen)
    certified = not _nested(arcs) and _covers_left_ends(arcs, family, tol)
    if certified:
        certified = _leftmost_rebuild(arcs, cut, tol) == family
    return DisjointFamily(tuple(sorted(family)), certified)


def _covers_left_ends(arcs, family, tol) -> bool:
    return all(any(_hit(arcs[f], arcs[i][0], tol) for f in family) for i in range(len(arcs)))


def _leftmost_rebuild(arcs, cut, tol):
    """Repeatedly take the leftmost arc disjoint from all taken; None on a tie."""
    order = sorted(range(len(arcs)), key=lambda i: _offset(arcs[i][0], cut))
    taken: list = []
    for pos, i in enumerate(order):
        if any(_meets(arcs[i], arcs[t], tol) for t in taken):
            continue
        nxt = order[pos + 1] if pos + 1 < len(order) else None
        if nxt is not None and arcs[nxt][0] == arcs[i][0] and not any(_meets(arcs[nxt], arcs[t], tol) for t in taken):
            return None
        taken.append(i)
    return tuple(taken)


# --- bound checks ---------------------------------------------------------

@dataclass(frozen=True)
class BoundCheck:
    name: str
    bound: int
    holds: bool
    detail: str = ""


@dataclass(frozen=True)
class BoundReport:
    tau: int
    checks: tuple = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return all(c.holds for c in self.checks)


def verify_bounds(society: Society, agreeability_limit: int = 12) -> BoundReport:
    """Check every applicable upper bound on tau against the exact value.

    Agreeability-based bounds enumerate subsets and are skipped for societies
    larger than ``agreeability_limit``.
    """
    from .counting import min_agreeable_m

    society.require_nonempty()
    n = len(society)
    tau = piercing_number(society)
    checks = []
    p = society.fixed_length
    if p is not None:
        # smallest q with p >= 1/q
        q = math.ceil(1 / p)
        if q > 1 and p * (q - 1) >= 1:
            q -= 1
        checks.append(BoundCheck("fixed_length_q", q, tau <= q, f"p >= 1/{q}"))
        if p * n >= n - 1:
            checks.append(BoundCheck("long_arcs_single_point", 1, tau == 1, "p >= (n-1)/n"))
        if p * n >= 1 and n >= 2:
            checks.append(BoundCheck("total_length_at_least_one", n - 1, tau <= n - 1, "p >= 1/n"))
        if q >= 2 and p * q == 1 and n < 2 * q - 1:
            checks.append(BoundCheck("below_sharp_count", q - 1, tau <= q - 1, f"p = 1/{q}, n < {2 * q - 1}"))
    if n <= agreeability_limit:
        m = None
        for k in range(2, n + 1):
            m = min_agreeable_m(society, k, start=None if m is None else m + 1)
            if m is None:
                break
            bound = m - k + 2
            checks.append(BoundCheck(f"agreeable_{k}_{m}", bound, tau <= bound, f"({k},{m})-agreeable"))
    return BoundReport(tau, tuple(checks))
