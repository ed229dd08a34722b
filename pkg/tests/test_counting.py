import csv
import io
from fractions import Fraction as F

import pytest
from hypothesis import given, settings

from circpierce.constructions import figure_society, uniform_society
from circpierce.counting import (
    agreement_number,
    counting_function,
    euler_integral,
    extremum_intervals,
    is_km_agreeable,
    min_agreeable_m,
    riemann_integral,
    step_function_csv,
)
from circpierce.errors import InvariantViolation
from circpierce.spectrum import CLOSED, HALF_OPEN, Arc, Society

import oracles
from strategies import rational_societies


def test_four_arc_picture_pieces():
    C = counting_function(figure_society("fig_counting"))
    got = [(p.start, p.end, p.start_closed, p.end_closed, p.value) for p in C.pieces]
    assert got == [
        (F(1, 5), F(3, 10), True, False, 2),
        (F(3, 10), F(2, 5), True, False, 3),
        (F(2, 5), F(1, 2), True, True, 4),
        (F(1, 2), F(3, 5), False, True, 3),
        (F(3, 5), F(7, 10), False, True, 2),
        (F(7, 10), F(4, 5), False, False, 1),
        (F(4, 5), F(9, 10), True, True, 2),
        (F(9, 10), F(1, 5), False, False, 1),
    ]
    assert riemann_integral(C) == 2
    assert euler_integral(C) == 4
    ext = extremum_intervals(C)
    assert [p.value for p in ext.lmax] == [4, 2]
    assert [p.value for p in ext.lmin] == [1, 1]
    assert ext.signed_sum == 4


@settings(max_examples=200, deadline=None)
@given(rational_societies())
def test_counting_function_matches_pointwise_count(society):
    C = counting_function(society)
    for x in oracles.grid(48) + oracles.sample_points(society):
        assert C(x) == oracles.count_at(society, x)


@settings(max_examples=200, deadline=None)
@given(rational_societies())
def test_pieces_are_maximal_and_tile(society):
    C = counting_function(society)
    pieces = C.pieces
    if len(pieces) > 1:
        for i, p in enumerate(pieces):
            q = pieces[(i + 1) % len(pieces)]
            assert p.value != q.value
            assert p.end == q.start and p.end_closed != q.start_closed
    assert sum(p.length for p in pieces) == 1


@settings(max_examples=200, deadline=None)
@given(rational_societies())
def test_riemann_integral_is_total_length(society):
    assert riemann_integral(counting_function(society)) == sum(a.length for a in society)


@settings(max_examples=200, deadline=None)
@given(rational_societies(closures=(CLOSED,)))
def test_euler_integral_counts_closed_arcs(society):
    C = counting_function(society)
    assert euler_integral(C) == len(society)
    if not C.is_constant:
        assert extremum_intervals(C).signed_sum == len(society)


def test_euler_integral_needs_closed_arcs():
    C = counting_function(uniform_society(4, 2))
    with pytest.raises(ValueError):
        euler_integral(C)


def test_constant_function_has_no_extrema():
    C = counting_function(uniform_society(4, 2))
    assert C.is_constant and C(F(1, 3)) == 2
    with pytest.raises(InvariantViolation):
        extremum_intervals(C)


def test_single_point_piece():
    # two closed arcs touching at 1/2
    C = counting_function(Society((Arc(F(0), F(1, 2)), Arc(F(1, 2), F(1, 4)))))
    points = [p for p in C.pieces if p.is_point]
    assert len(points) == 1 and points[0].start == F(1, 2) and points[0].value == 2


def test_punctured_circle_piece():
    # one closed arc ending where another half-open arc begins, wrapping fully
    s = Society((Arc(F(0), F(1, 2), HALF_OPEN), Arc(F(1, 2), F(1, 2), HALF_OPEN), Arc(F(0), F(1, 4), HALF_OPEN)))
    C = counting_function(s)
    assert C(F(0)) == 2 and C(F(1, 4)) == 1


@settings(max_examples=200, deadline=None)
@given(rational_societies())
def test_agreement_number_matches_oracle(society):
    assert agreement_number(society) == oracles.agreement(society)


@settings(max_examples=150, deadline=None)
@given(rational_societies(max_n=6))
def test_km_agreeable_matches_oracle(society):
    n = len(society)
    for m in range(1, n + 1):
        for k in range(1, m + 1):
            assert is_km_agreeable(society, k, m) == oracles.km_agreeable(society, k, m)


@settings(max_examples=100, deadline=None)
@given(rational_societies(max_n=6))
def test_agreeability_shifts_down(society):
    n = len(society)
    for m in range(2, n + 1):
        for k in range(2, m + 1):
            if is_km_agreeable(society, k, m):
                assert is_km_agreeable(society, k - 1, m - 1)
                if m < n:
                    assert is_km_agreeable(society, k, m + 1)


def test_min_agreeable_m_on_uniform():
    s = uniform_society(6, 2)
    assert min_agreeable_m(s, 2) == 4
    assert min_agreeable_m(s, 3) is None


def test_km_range_checked():
    s = uniform_society(4, 2)
    with pytest.raises(ValueError):
        is_km_agreeable(s, 3, 2)


def test_large_enumeration_needs_force():
    s = uniform_society(24, 2)
    with pytest.raises(ValueError):
        is_km_agreeable(s, 3, 12)


def test_csv_dump():
    rows = list(csv.reader(io.StringIO(step_function_csv(counting_function(figure_society("fig_counting"))))))
    assert rows[0] == ["piece_start", "piece_end", "start_closed", "end_closed", "value"]
    assert rows[1] == ["1/5", "3/10", "1", "0", "2"]
    assert len(rows) == 9


def test_csv_constant_function_spans_circle():
    rows = list(csv.reader(io.StringIO(step_function_csv(counting_function(uniform_society(3, 1))))))
    assert rows[1] == ["0/1", "1/1", "1", "0", "1"]
