import pytest

from doubleloop import fiber_ring, geometric_to_quotient, parse_iter, parse_ring
from doubleloop.flags import FIBERS, quotient_fibers, resolve_quotient, round_trip_problems
from doubleloop.gm import TWO_VARIABLE
from doubleloop.series import Indeterminate

Q = parse_ring("Q")


@pytest.mark.parametrize("tag,subring", [
    ("Zhat_aff", "JJ"),
    ("Zhat_minus_D", "JL"),
    ("Zhat_Dhat_minus_Z_aff", "LJ"),
    ("Zhat_Dhat_minus_Z_minus_D", "LL"),
    ("pushout", "O2"),
])
def test_fiber_subrings(tag, subring):
    assert fiber_ring(tag).subring == subring


def test_fiber_printing():
    assert str(fiber_ring("Zhat_aff")) == "JJ / R[[x,y]]"
    assert fiber_ring("zhat_aff") is fiber_ring("Zhat_aff")
    with pytest.raises(ValueError):
        fiber_ring("Zhat")


def test_colimit_fibers():
    dhat = fiber_ring("Dhat")
    assert dhat.colimit and dhat.subring is None
    assert dhat.contains(parse_iter("1 + x*y + y^2", Q))
    assert not dhat.contains(parse_iter("x^-1", Q))
    assert fiber_ring("Dhat_aff").contains(parse_iter("x^2 + y^5", Q))
    assert not fiber_ring("Dhat_aff").contains(parse_iter("x^-1*y", Q))
    ser = fiber_ring("Zhat_Dhat_affDhat")
    assert ser.contains(parse_iter("1 + x*y", Q))
    with pytest.raises(Indeterminate):
        ser.contains(parse_iter("1 + x*y", Q).truncate(4))


def test_membership_through_fibers():
    f = parse_iter("x^-1 + y", Q)
    assert fiber_ring("Zhat_Dhat_minus_Z_aff").contains(f)
    assert not fiber_ring("Zhat_aff").contains(f)


@pytest.mark.parametrize("name,quotient", [
    ("geomLGr", "LGR"), ("geomBig", "GRBIG"), ("geomJet", "GRJ"), ("geom2", "GR2"), ("geomLoopGr", "GRL")])
def test_geometric_names(name, quotient):
    m = geometric_to_quotient(name)
    assert m.quotient == quotient
    assert (m.caveat is not None) == (name == "geomLoopGr")


def test_resolve_quotient():
    assert resolve_quotient("geomJet") == ("GRJ", None)
    assert resolve_quotient("grbig") == ("GRBIG", None)
    with pytest.raises(ValueError):
        resolve_quotient("geomNothing")


def test_round_trip_single_source():
    assert round_trip_problems() == []
    for q in TWO_VARIABLE:
        amb, sub = quotient_fibers(q)
        assert amb.tag in FIBERS and sub.tag in FIBERS
