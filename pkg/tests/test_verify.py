import dataclasses
import random

import pytest

from doubleloop import (BOREL, brute_force_uniqueness, coset_equal, parse_iter, parse_ring, parse_series,
                        reduce, reduce_ga, reduce_gr1d, reduce_tower, verify_reduction, verify_split,
                        verify_tower)
from doubleloop.generators import ambient_element, ambient_unit, subgroup_unit, tower_element
from doubleloop.gm import TWO_VARIABLE
from doubleloop.uniqueness import WindowTooLarge
from doubleloop.verify import tamper_witness, witness_positions

E = parse_ring("Q[e]/(e^2)")
Q = parse_ring("Q")
F2 = parse_ring("F2")
F2E = parse_ring("F2[e]/(e^2)")


def test_verified_example():
    f = parse_series("t^2", Q)
    assert verify_reduction(f, reduce_gr1d(f, 6)).verdict == "verified"


def test_tampered_witness_fails():
    f = parse_series("1 + e*t^-1 + t", E)
    r = reduce_gr1d(f, 6)
    for pos in witness_positions(r):
        assert verify_reduction(f, tamper_witness(r, pos)).verdict == "failed"


def test_truncated_witness_is_indeterminate():
    f = parse_series("1 + e*t^-1 + t", E)
    r = reduce_gr1d(f, 6)
    short = dataclasses.replace(r, witness=r.witness.truncate(2))
    assert verify_reduction(f, short).verdict == "indeterminate"
    g = parse_iter("1 - e*(1+t^-1)*s^-1", E)
    r = reduce(g, "GRL", 4, 4)
    short = dataclasses.replace(r, witness=r.witness.truncate(-1))
    assert verify_reduction(g, short).verdict == "indeterminate"


def test_wrong_representative_fails():
    f = parse_iter("1 + (t^-1 + t)*s", Q)
    r = reduce(f, "GRJ", 4, 4)
    other = reduce(parse_iter("1 + t^-1*s", Q), "GRJ", 4, 4)
    bad = dataclasses.replace(r, components=other.components)
    assert verify_reduction(f, bad).verdict == "failed"


def test_coset_equal_examples():
    assert not coset_equal(parse_series("t", Q), parse_series("t^2", Q), "GR1D")
    assert coset_equal(parse_series("1 + e*t^-1 + t", E), parse_series("1 + e*t^-1", E), "GR1D")
    rng = random.Random(4)
    for q in TWO_VARIABLE:
        f = ambient_unit(E, q, rng, 1, 1)
        assert coset_equal(f, f * subgroup_unit(E, q, rng, 1, 1), q, 4, 4)


@pytest.mark.parametrize("text", ["Q", "Q[e]/(e^2)", "F3[e1,e2]/(e1^2,e2^2)"])
@pytest.mark.parametrize("q", ("GR1D",) + TWO_VARIABLE)
def test_fuzzed_reductions_verify(text, q):
    ring = parse_ring(text)
    rng = random.Random(f"{text}/{q}")
    for _ in range(1000):
        f = ambient_unit(ring, q, rng, 1, 1)
        assert verify_reduction(f, reduce(f, q, 3, 3)).verified


@pytest.mark.parametrize("q", TWO_VARIABLE)
def test_additive_splits_verify(q):
    rng = random.Random(q)
    for _ in range(30):
        f = ambient_element(E, q, rng)
        sp = reduce_ga(f, q)
        assert verify_split(f, sp).verified
        # the constant 1 sits on the subgroup side for every quotient
        bad = dataclasses.replace(sp, representative=sp.representative + 1)
        assert verify_split(f, bad).verdict == "failed"


@pytest.mark.parametrize("q", TWO_VARIABLE)
def test_towers_verify(q):
    rng = random.Random(q)
    for _ in range(5):
        g = tower_element(BOREL, E, q, rng)
        red = reduce_tower(g, q, 3, 3)
        assert verify_tower(g, red).verified
        bad = dataclasses.replace(red, representative=type(red.representative)(
            BOREL, red.representative.coords[:2] + (red.representative.coords[2] + 1,)))
        assert verify_tower(g, bad).verdict == "failed"


def test_uniqueness_examples():
    rep = brute_force_uniqueness(F2E, "GR1D", ((-1, 1), (-1, 1)))
    assert rep.ok and rep.sigma_count > 1
    rep = brute_force_uniqueness(F2, "GR1D", ((-1, 1), (-1, 1)))
    assert rep.ok
    for method in ("linear", "literal"):
        rep = brute_force_uniqueness(F2E, "GRL", ((-1, 0), (-1, 0)), method=method)
        assert rep.ok and rep.pairs_covered > 0


def test_uniqueness_can_fail():
    # widening the representative family past its degree bounds breaks uniqueness
    rep = brute_force_uniqueness(F2E, "GR1D", ((-1, 1), (-1, 1)), slack=2)
    assert not rep.ok


def test_enumeration_cap(monkeypatch):
    with pytest.raises(WindowTooLarge):
        brute_force_uniqueness(F2E, "GRL", ((-2, 2), (-2, 2)), method="literal", cap=10)
    monkeypatch.setenv("DOUBLELOOP_ENUM_CAP", "10")
    with pytest.raises(WindowTooLarge):
        brute_force_uniqueness(F2E, "GRL", ((-2, 2), (-2, 2)), method="literal")
    with pytest.raises(ValueError):
        brute_force_uniqueness(Q, "GR1D")
