import random

import pytest
from hypothesis import given, strategies as st

from doubleloop import chart, parse_iter, parse_ring, reduce, reduce_ga
from doubleloop.ga import in_complement
from doubleloop.gm import TWO_VARIABLE
from doubleloop.generators import ambient_element
from doubleloop.series import Indeterminate, LaurentRing, LaurentSeries, membership

E = parse_ring("Q[e]/(e^2)")


def s2(text, ring=E):
    return parse_iter(text, ring)


def test_examples():
    sp = reduce_ga(s2("t^-2 + t + t^5*s^-1"), "GRL")
    assert sp.representative == s2("t^-2")
    assert sp.subgroup_part == s2("t + t^5*s^-1")
    sp = reduce_ga(s2("t^3*s^2"), "GRBIG")
    assert sp.representative.is_zero()
    sp = reduce_ga(s2("e*t^-1"), "GR2")
    assert sp.representative == s2("e*t^-1")


def test_per_quotient_shapes():
    f = s2("t^-1*s^-1 + t^-1 + t*s^-1 + s + t^-2*s^2")
    want = {
        "LGR": "t^-1*s^-1 + t*s^-1",
        "GRBIG": "t^-1*s^-1 + t^-1 + t*s^-1 + t^-2*s^2",
        "GRL": "t^-1*s^-1 + t^-1 + t^-2*s^2",
        "GR2": "t^-1*s^-1 + t^-1 + t*s^-1",
    }
    for q, rep in want.items():
        assert reduce_ga(f, q).representative == s2(rep), q
    assert reduce_ga(s2("t^-1 + s + t^-2*s^2"), "GRJ").representative == s2("t^-1 + t^-2*s^2")


def test_errors():
    with pytest.raises(ValueError):
        reduce_ga(s2("s^-1"), "GRJ")
    with pytest.raises(Indeterminate):
        reduce_ga(s2("1 + s").truncate(3), "GRL")


@pytest.mark.parametrize("q", TWO_VARIABLE)
def test_additivity_involution_membership(q):
    @given(st.randoms(use_true_random=False))
    def check(rng):
        f, g = ambient_element(E, q, rng), ambient_element(E, q, rng)
        a, b, c = reduce_ga(f, q), reduce_ga(g, q), reduce_ga(f + g, q)
        assert c.representative == a.representative + b.representative
        assert c.subgroup_part == a.subgroup_part + b.subgroup_part
        assert a.check(f)
        again = reduce_ga(a.representative, q)
        assert again.representative == a.representative and again.subgroup_part.is_zero()
        assert membership(a.subgroup_part, a.subgroup)
        for j, sl in a.representative.coeffs.items():
            assert all(in_complement(q, j, i) for i in sl.coeffs)

    check()


def test_chart():
    c = chart(s2("t^-2*s^-1 + t^-1*s^-1 + t^-3*s^2"))
    assert c.h == -1 and c.alpha == ((-1, -2), (2, -3))
    assert chart(s2("0")).h is None


@pytest.mark.parametrize("q", TWO_VARIABLE)
def test_support_matches_multiplicative_class(q):
    """For ``1 + n`` with ``n`` nilpotent in the complement, the G_m tail stays inside ``supp(n)``."""
    rng = random.Random(q)
    e = E.gen("e")
    lring = LaurentRing(E, "t")
    lo = 0 if q == "GRJ" else -2
    for _ in range(20):
        terms = {}
        for _ in range(3):
            j, i = rng.randint(lo, 2), rng.randint(-2, 2)
            if in_complement(q, j, i):
                terms[(j, i)] = e * rng.randint(1, 3)
        slices = {}
        for (j, i), c in terms.items():
            slices.setdefault(j, {})[i] = c
        n = LaurentSeries(lring, {j: LaurentSeries(E, d, None, "t") for j, d in slices.items()}, None, "s")
        tail = reduce(1 + n, q, 4, 4).representative - 1
        for j, sl in tail.coeffs.items():
            assert all((j, i) in terms for i in sl.coeffs), (q, n, tail)
