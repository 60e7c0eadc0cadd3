import random

import pytest
from hypothesis import given

from doubleloop import format_series, parse_iter, parse_ring, parse_series
from doubleloop.generators import ambient_unit, unit_1d
from doubleloop.parse import ParseError, format_element, parse_element

from conftest import RINGS, elements, series1


@pytest.mark.parametrize("text", ["Q", "F2", "F_3", "Q[e]/(e^2)", "Q[e1,e2]/(e1^2,e2^2)", "QxQ",
                                  "Q x Q[e]/(e^2)", "F2[e]/(e^3)"])
def test_ring_describe_round_trip(text):
    ring = parse_ring(text)
    assert parse_ring(ring.describe()).describe() == ring.describe()


def test_aliases_and_canonical_order():
    E = parse_ring("Q[e]/(e^2)")
    assert format_series(parse_iter("1 - e*(1+x^-1)*y^-1", E)) == format_series(
        parse_iter("1 - e*(1+t^-1)*s^-1", E))
    assert format_series(parse_series("t + e*t^-1 + 1", E)) == "e*t^-1 + 1 + t"


def test_inverse_expands_to_precision():
    Q = parse_ring("Q")
    assert format_series(parse_series("inv(1 + t)", Q, t_prec=3)) == "1 - t + t^2 + O(t^3)"
    assert format_series(parse_series("1 + O(t^2)", Q)) == "1 + O(t^2)"


@pytest.mark.parametrize("bad", ["1 +", "(1 + t", "t^", "1 + z", "2 ** t", ""])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        parse_series(bad, parse_ring("Q"))


@pytest.mark.parametrize("bad", ["Z", "Q[e]/(f^2)", "F4", "Q[e]", "Q[e,f]/(e^2)"])
def test_bad_rings(bad):
    with pytest.raises(ValueError):
        parse_ring(bad)


@pytest.mark.parametrize("text", list(RINGS))
def test_element_round_trip(text):
    ring = RINGS[text]

    @given(elements(ring))
    def check(a):
        assert parse_element(format_element(a), ring) == a

    check()


@pytest.mark.parametrize("text", list(RINGS))
def test_series_round_trip(text):
    ring = RINGS[text]

    @given(series1(ring))
    def check(f):
        assert parse_series(format_series(f), ring) == f

    check()


@pytest.mark.parametrize("text", ["Q[e]/(e^2)", "QxQ", "F3[e1,e2]/(e1^2,e2^2)"])
def test_two_variable_round_trip(text):
    ring = RINGS[text]
    rng = random.Random(1)
    for q in ("GRJ", "GRBIG"):
        for _ in range(30):
            f = ambient_unit(ring, q, rng)
            assert parse_iter(format_series(f), ring) == f
    for _ in range(30):
        f = unit_1d(ring, rng).truncate(3)
        assert parse_series(format_series(f), ring) == f
