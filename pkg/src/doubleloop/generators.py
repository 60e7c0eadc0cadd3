"""Random inputs for property tests and the self test.

Everything is built per connected factor and then assembled, so product rings
get independent leading degrees on each factor.  Supports are kept small:
``t`` and ``s`` degrees stay in ``span`` around the leading term.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .gm import QUOTIENTS, quotient_tag
from .ring import TestRing
from .series import LaurentRing, LaurentSeries, assemble_series


def scalar(ring: TestRing, rng: random.Random, nonzero: bool = False):
    p = ring.field.p
    if p:
        return rng.randrange(1, p) if nonzero else rng.randrange(p)
    choices = [Fraction(n, d) for n in range(-3, 4) for d in (1, 1, 2) if n or not nonzero]
    return rng.choice(choices)


def element(ring: TestRing, rng: random.Random, kind: str = "any", density: float = 0.5):
    """Random element of a connected ring: ``any``, ``unit`` or ``nil``."""
    coeffs = []
    for k in range(ring.dim):
        if k == 0 and kind == "unit":
            coeffs.append(scalar(ring, rng, nonzero=True))
        elif k == 0 and kind == "nil":
            coeffs.append(ring.field.zero)
        else:
            coeffs.append(scalar(ring, rng) if rng.random() < density else ring.field.zero)
    return ring.element(coeffs)


def _per_factor(ring: TestRing, build, two_var: bool):
    n = len(ring.factors)
    if n == 1:
        return build(ring)
    parts = [build(ring.factor_ring(i)) for i in range(n)]
    target = LaurentRing(ring, "t") if two_var else ring
    return assemble_series(target, parts, "s" if two_var else "t")


def _laurent1(ring, rng, lead: int, lo: int, hi: int, lower="nil", density=0.5):
    """One-variable Laurent polynomial with a unit at ``lead``."""
    terms = {lead: element(ring, rng, "unit")}
    for d in range(lo, hi + 1):
        if d == lead or rng.random() > density:
            continue
        terms[d] = element(ring, rng, lower if d < lead else "any")
    return LaurentSeries(ring, {d: c for d, c in terms.items() if not c.is_zero()}, None, "t")


def _poly1(ring, rng, lo, hi, kind="any", density=0.5):
    terms = {}
    for d in range(lo, hi + 1):
        if rng.random() < density:
            c = element(ring, rng, kind)
            if not c.is_zero():
                terms[d] = c
    return LaurentSeries(ring, terms, None, "t")


def _iter(ring, slices: dict):
    lring = LaurentRing(ring, "t")
    return LaurentSeries(lring, {j: c for j, c in slices.items() if c.coeffs}, None, "s")


# -- ambient units -------------------------------------------------------------------

def unit_1d(ring: TestRing, rng: random.Random, span: int = 2) -> LaurentSeries:
    """Invertible Laurent polynomial in ``t`` with nilpotent terms below the leading one."""
    def build(r):
        m = rng.randint(-span, span)
        return _laurent1(r, rng, m, m - span, m + span)
    return _per_factor(ring, build, False)


def unit_ll(ring: TestRing, rng: random.Random, span: int = 2, inner: int = 2) -> LaurentSeries:
    """Unit of ``R((t))((s))``: a slice that is a unit of ``R((t))`` with nilpotent slices below."""
    def build(r):
        b = rng.randint(-span, span)
        slices = {b: _laurent1(r, rng, rng.randint(-inner, inner), -inner, inner)}
        for j in range(b - span, b + span + 1):
            if j == b or rng.random() > 0.5:
                continue
            slices[j] = _poly1(r, rng, -inner, inner, "nil" if j < b else "any")
        return _iter(r, slices)
    return _per_factor(ring, build, True)


def unit_lj(ring: TestRing, rng: random.Random, span: int = 2, inner: int = 2) -> LaurentSeries:
    """Unit of ``R((t))[[s]]``: slice 0 a unit of ``R((t))``, higher slices arbitrary."""
    def build(r):
        slices = {0: _laurent1(r, rng, rng.randint(-inner, inner), -inner, inner)}
        for j in range(1, span + 1):
            if rng.random() < 0.6:
                slices[j] = _poly1(r, rng, -inner, inner)
        return _iter(r, slices)
    return _per_factor(ring, build, True)


# -- subgroup units --------------------------------------------------------------------

def subgroup_unit(ring: TestRing, quotient: str, rng: random.Random, span: int = 2, inner: int = 2):
    """Finite-support unit of the quotient's subgroup ring."""
    tag = quotient_tag(quotient)
    sub = QUOTIENTS[tag][1]

    def const_unit_series(r, hi):
        s = _poly1(r, rng, 1, hi)
        return s + LaurentSeries(r, {0: element(r, rng, "unit")}, None, "t")

    def build(r):
        if sub == "J":
            return const_unit_series(r, inner)
        if sub == "JJ":
            slices = {0: const_unit_series(r, inner)}
            for j in range(1, span + 1):
                slices[j] = _poly1(r, rng, 0, inner)
            return _iter(r, slices)
        if sub == "LJ":
            slices = {0: _laurent1(r, rng, rng.randint(-inner, inner), -inner, inner)}
            for j in range(1, span + 1):
                slices[j] = _poly1(r, rng, -inner, inner)
            return _iter(r, slices)
        if sub == "JL":
            b = rng.randint(-span, span)
            slices = {b: const_unit_series(r, inner)}
            for j in range(b - span, b + span + 1):
                if j != b and rng.random() < 0.5:
                    slices[j] = _poly1(r, rng, 0, inner, "nil" if j < b else "any")
            return _iter(r, slices)
        if sub == "O2":
            slices = {0: const_unit_series(r, inner)}
            for j in range(1, span + 1):
                slices[j] = _poly1(r, rng, -inner, inner)
            return _iter(r, slices)
        raise ValueError(sub)

    return _per_factor(ring, build, sub != "J")


def ambient_unit(ring: TestRing, quotient: str, rng: random.Random, span: int = 2, inner: int = 2):
    """Random invertible input for ``quotient``."""
    tag = quotient_tag(quotient)
    if tag == "GR1D":
        return unit_1d(ring, rng, span)
    if tag == "GRJ":
        return unit_lj(ring, rng, span, inner)
    return unit_ll(ring, rng, span, inner)


def ambient_element(ring: TestRing, quotient: str, rng: random.Random, span: int = 2, inner: int = 2):
    """Random exact element (not necessarily a unit) of the quotient's ambient ring."""
    tag = quotient_tag(quotient)
    lo = 0 if tag == "GRJ" else -span

    def build(r):
        slices = {}
        for j in range(lo, span + 1):
            if rng.random() < 0.5:
                slices[j] = _poly1(r, rng, -inner, inner)
        return _iter(r, slices)
    return _per_factor(ring, build, True)


def tower_element(descriptor, ring: TestRing, quotient: str, rng: random.Random, span: int = 1, inner: int = 1):
    """Random exact tower element: ambient units on ``G_m`` layers, anything on ``G_a`` layers."""
    from .tower import element
    coords = []
    for layer in descriptor.layers:
        if layer.kind == "Gm":
            coords.append(ambient_unit(ring, quotient, rng, span, inner))
        else:
            coords.append(ambient_element(ring, quotient, rng, span, inner))
    return element(descriptor, coords)


def lsigma_input(ring: TestRing, rng: random.Random, n: int = 2, span: int = 2):
    """``(f, epsilons)`` with ``f = 1 - eps_1 s^-1 - ... - eps_n s^-n`` and nilpotent ``eps_i``."""
    eps = [_poly1(ring, rng, -span, span, "nil") for _ in range(n)]
    lring = LaurentRing(ring, "t")
    slices = {0: LaurentSeries(ring, {0: ring.one()}, None, "t")}
    for i, e in enumerate(eps, start=1):
        if e.coeffs:
            slices[-i] = -e
    return LaurentSeries(lring, slices, None, "s"), eps
