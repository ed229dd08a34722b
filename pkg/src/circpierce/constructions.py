"""Deterministic societies in exact rational coordinates.

``uniform_society`` and ``sharp_society`` follow their defining formulas.  The
figure societies use hand-picked coordinates that reproduce each picture's
combinatorics: which arcs meet, how many share a point, the piercing number.  Angles drawn in degrees are stored as
``degrees / 360``, and segments drawn on a ruler of length L as ``x / L``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction as F
from typing import Callable, Dict, Optional

from .errors import ParameterError
from .spectrum import CLOSED, HALF_OPEN, Arc, Society

UNIFORM = "uniform"
SHARP = "sharp"
FIGURE = "figure_example"


@dataclass(frozen=True)
class ConstructionSpec:
    kind: str
    parameters: dict = field(default_factory=dict)

    def build(self) -> Society:
        if self.kind == UNIFORM:
            return uniform_society(**self.parameters)
        if self.kind == SHARP:
            return sharp_society(**self.parameters)
        if self.kind == FIGURE:
            return figure_society(**self.parameters)
        raise ParameterError(f"unknown construction kind {self.kind!r}")


def uniform_society(n: int, h: int, closed_epsilon: Optional[F] = None) -> Society:
    """U(n, h): n half-open arcs [(i-1)/n, (i-1+h)/n).

    With ``closed_epsilon`` the arcs become closed and shrink by that amount,
    ``[(i-1)/n, (i-1+h)/n - eps]``.
    """
    if not (isinstance(n, int) and isinstance(h, int)) or not 1 <= h < n:
        raise ParameterError(f"uniform society needs integers 1 <= h < n, got n={n}, h={h}")
    length = F(h, n)
    closure = HALF_OPEN
    if closed_epsilon is not None:
        eps = F(closed_epsilon)
        if not 0 < eps < length:
            raise ParameterError("closed_epsilon must lie in (0, h/n)")
        length -= eps
        closure = CLOSED
    arcs = tuple(Arc(F(i, n), length, closure) for i in range(n))
    return Society(arcs, f"U({n},{h})")


def sharp_society(q: int) -> Society:
    """2q-1 closed arcs of length 1/q, consecutive ones separated by 1/(2q^2).

    Left endpoints are (i-1)(1/q + 1/(2q^2)) mod 1 for i = 1..2q-1.
    """
    if not isinstance(q, int) or q < 2:
        raise ParameterError(f"sharp society needs an integer q >= 2, got {q!r}")
    step = F(1, q) + F(1, 2 * q * q)
    arcs = tuple(Arc(i * step, F(1, q), CLOSED) for i in range(2 * q - 1))
    return Society(arcs, f"sharp(q={q})")


def sharp_piercing_set(q: int) -> tuple:
    """The left endpoints of the first q arcs of ``sharp_society(q)``."""
    return tuple(a.left for a in sharp_society(q).arcs[:q])


def uniform_piercing_set(n: int, h: int) -> tuple:
    """{0, h/n, 2h/n, ...} with ceil(n/h) points."""
    count = -(-n // h)
    return tuple(F(j * h, n) % 1 for j in range(count))


def _deg(spans) -> tuple:
    # (start, stop) in degrees, counterclockwise
    return tuple(Arc(F(a, 360), F((b - a) % 360, 360)) for a, b in spans)


def _ruler(length, spans) -> tuple:
    return tuple(Arc(F(a) / length, F(b - a) / length) for a, b in spans)


def _fig1_linear() -> Society:
    # ruler 0..5; red, blue, orange, green, violet; uncovered near 0
    arcs = _ruler(5, [(F(1, 2), 3), (F(7, 2), F(9, 2)), (1, 2), (F(23, 10), 4), (F(4, 5), F(16, 5))])
    return Society(arcs, "fig1_linear")


def _fig1_circular() -> Society:
    # orange, violet, blue, green, red: a 5-cycle of overlaps
    arcs = _deg([(-60, 60), (120, 260), (-10, 100), (80, 180), (200, 330)])
    return Society(arcs, "fig1_circular")


def _fig2_linear_equivalent() -> Society:
    # orange, blue, violet, green, red; 80 degrees is uncovered
    arcs = _deg([(-70, 30), (110, 260), (-10, 50), (130, 240), (200, 330)])
    return Society(arcs, "fig2_linear_equivalent")


# the two starting points drawn for the 9-arc example
FIG_ALG2_BAD_START = F(90, 360)
FIG_ALG2_GOOD_START = F(42, 360)


def _fig_alg2() -> Society:
    # teal, orange, magenta, blue, violet, pink, green, red, yellow
    arcs = _deg([(75, 160), (30, 105), (75, 160), (30, 105), (-21, 50),
                 (-80, 0), (135, 240), (200, 300), (270, 330)])
    return Society(arcs, "fig_alg2")


def _fig_alg1() -> Society:
    # thirteen intervals in [0, 1); greedy takes the right ends of A1, A5, A9, A13
    spans = [
        ("1/50", "1/10"), ("1/20", "7/50"), ("2/25", "1/5"), ("9/100", "1/4"),
        ("3/20", "3/10"), ("11/50", "33/100"), ("7/25", "2/5"), ("29/100", "9/20"),
        ("19/50", "1/2"), ("23/50", "29/50"), ("12/25", "31/50"), ("49/100", "7/10"),
        ("3/5", "3/4"),
    ]
    arcs = tuple(Arc(F(a), F(b) - F(a)) for a, b in spans)
    return Society(arcs, "fig_alg1")


def _fig_4voter() -> Society:
    # ruler 0..8, all of length 5.5/8: red, blue, orange, green
    p = F(11, 16)
    arcs = tuple(Arc(F(x, 8), p) for x in (0, 6, 4, 2))
    return Society(arcs, "fig_4voter")


def _fig_counting() -> Society:
    # ruler 0..10: red wraps 8 -> 5, orange 2..7, green 3..6, blue 4..9
    arcs = _ruler(10, [(8, 15), (2, 7), (3, 6), (4, 9)])
    return Society(arcs, "fig_counting")


def _fig_fixed_length() -> Society:
    # ruler 0..8, length 1/4: blue, brown, violet, orange, green, red, pink, purple
    starts = [F(13, 10), F(21, 10), F(77, 20), F(9, 2), F(31, 5), 0, F(71, 10), F(9, 2)]
    arcs = tuple(Arc(F(s) / 8, F(1, 4)) for s in starts)
    return Society(arcs, "fig_fixed_length")


FIGURES: Dict[str, Callable[[], Society]] = {
    "fig1_linear": _fig1_linear,
    "fig1_circular": _fig1_circular,
    "fig2_linear_equivalent": _fig2_linear_equivalent,
    "fig_alg1": _fig_alg1,
    "fig_alg2": _fig_alg2,
    "fig_4voter": _fig_4voter,
    "fig_counting": _fig_counting,
    "fig_fixed_length": _fig_fixed_length,
}


def figure_society(id: str) -> Society:
    try:
        return FIGURES[id]()
    except KeyError:
        raise ParameterError(f"unknown figure id {id!r}; known: {', '.join(FIGURES)}") from None
