from fractions import Fraction

from hypothesis import settings, strategies as st

from doubleloop import parse_ring
from doubleloop.series import LaurentSeries

settings.register_profile("repo", deadline=None, max_examples=60)
settings.load_profile("repo")

RING_TEXTS = ["Q", "Q[e]/(e^2)", "Q[e1,e2]/(e1^2,e2^2)", "F2[e]/(e^2)", "F3[e1,e2]/(e1^2,e2^2)",
              "QxQ", "Q x Q[e]/(e^2)", "F5"]
RINGS = {text: parse_ring(text) for text in RING_TEXTS}


def scalars(ring):
    if ring.field.p:
        return st.integers(0, ring.field.p - 1)
    return st.fractions(min_value=-4, max_value=4, max_denominator=3).map(Fraction)


def elements(ring):
    return st.lists(scalars(ring), min_size=ring.dim, max_size=ring.dim).map(ring.element)


def series1(ring, lo=-3, hi=3):
    """Exact Laurent polynomials in ``t`` with support in ``[lo, hi]``."""
    return st.dictionaries(st.integers(lo, hi), elements(ring), max_size=4).map(
        lambda d: LaurentSeries(ring, {k: c for k, c in d.items() if not c.is_zero()}, None, "t"))
