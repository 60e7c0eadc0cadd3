"""Truncated Laurent series over test rings, and iterated series over those.

:class:`LaurentSeries` is generic in its coefficient ring.  With a
:class:`~doubleloop.ring.TestRing` as coefficient ring it models ``R((t))``;
with a :class:`LaurentRing` (itself ``R((t))``) it models the iterated ring
``R((t))((s))`` used for all two-variable computations.

Precision model: a series is known in every degree below ``prec`` (``None``
means exact, i.e. finitely supported).  Nothing is stored at or above
``prec`` and absent degrees below it are zero.  Arithmetic propagates the
weakest correct precision, so every reported coefficient is a true one.
"""

from __future__ import annotations

import math
from typing import Callable, Iterable

import numpy as np
from gmpy2 import mpq

from .ring import SCALARS, NotInvertible, RingElement, TestRing


class Indeterminate(ArithmeticError):
    """Truncation hides information needed to answer."""


class InsufficientPrecision(Indeterminate):
    """A computation did not reach the precision its caller asked for."""


def _min_prec(*ps):
    known = [p for p in ps if p is not None]
    return min(known) if known else None


class LaurentRing:
    """The ring ``base((var))``; used as the coefficient ring of iterated series."""

    def __init__(self, base, var: str = "t"):
        self.base = base
        self.var = var

    def __repr__(self):
        return f"LaurentRing({self.base!r}, {self.var!r})"

    def __eq__(self, other):
        return isinstance(other, LaurentRing) and other.var == self.var and other.base == self.base

    def __hash__(self):
        return hash(("laurent", self.var, self.base))

    @property
    def test_ring(self) -> TestRing:
        base = self.base
        while isinstance(base, LaurentRing):
            base = base.base
        return base

    @property
    def nil_index(self) -> int:
        return self.test_ring.nil_index

    def zero(self) -> "LaurentSeries":
        return LaurentSeries(self.base, {}, None, self.var)

    def one(self) -> "LaurentSeries":
        return self.scalar(1)

    def scalar(self, x) -> "LaurentSeries":
        c = self.base(x) if not isinstance(x, LaurentSeries) else x
        if isinstance(c, LaurentSeries):
            return c
        return LaurentSeries(self.base, {0: c} if not c.is_zero() else {}, None, self.var)

    def __call__(self, x):
        if isinstance(x, LaurentSeries):
            return x
        return self.scalar(x)

    def project(self, x: "LaurentSeries", i: int) -> "LaurentSeries":
        return x.project(i)

    def factor_ring(self, i: int) -> "LaurentRing":
        return LaurentRing(_factor_of(self.base, i), self.var)


def _factor_of(base, i):
    if isinstance(base, LaurentRing):
        return base.factor_ring(i)
    return base.factor_ring(i)


class LaurentSeries:
    """Immutable truncated Laurent series ``sum c_d var^d + O(var^prec)``."""

    __slots__ = ("ring", "coeffs", "prec", "var", "_hash")

    def __init__(self, ring, coeffs: dict, prec: int | None = None, var: str = "t"):
        self.ring = ring
        self.var = var
        self.prec = prec
        if prec is not None:
            coeffs = {d: c for d, c in coeffs.items() if d < prec}
        self.coeffs = {d: c for d, c in coeffs.items() if not _exact_zero(c)}
        self._hash = None

    # -- constructors -------------------------------------------------------
    @classmethod
    def from_dict(cls, ring, terms: dict, prec=None, var="t"):
        return cls(ring, {d: ring(c) for d, c in terms.items()}, prec, var)

    @classmethod
    def monomial(cls, ring, degree: int, coeff=1, var="t"):
        return cls(ring, {degree: ring(coeff)}, None, var)

    @classmethod
    def zero(cls, ring, var="t", prec=None):
        return cls(ring, {}, prec, var)

    @classmethod
    def one(cls, ring, var="t"):
        return cls(ring, {0: ring.one()}, None, var)

    # -- basic queries ------------------------------------------------------
    @property
    def is_exact(self) -> bool:
        return self.prec is None

    @property
    def test_ring(self) -> TestRing:
        r = self.ring
        while isinstance(r, LaurentRing):
            r = r.base
        return r

    @property
    def is_iterated(self) -> bool:
        return isinstance(self.ring, LaurentRing)

    def is_zero(self) -> bool:
        """Exactly zero (not merely zero up to the precision)."""
        return self.prec is None and not self.coeffs

    def is_known_zero(self) -> bool:
        """Zero in every known degree."""
        return not self.coeffs

    def valuation(self) -> int | None:
        """Least stored degree; ``prec`` if nothing stored; None for exact zero."""
        if self.coeffs:
            return min(self.coeffs)
        return self.prec

    def degree(self) -> int | None:
        return max(self.coeffs) if self.coeffs else None

    @property
    def floor(self) -> int | None:
        return self.valuation()

    def __getitem__(self, d: int):
        if self.prec is not None and d >= self.prec:
            raise Indeterminate(f"coefficient of {self.var}^{d} beyond precision {self.prec}")
        c = self.coeffs.get(d)
        return self._zero_coeff() if c is None else c

    def get(self, d: int):
        c = self.coeffs.get(d)
        return self._zero_coeff() if c is None else c

    def _zero_coeff(self):
        return self.ring.zero()

    def items(self):
        return sorted(self.coeffs.items())

    def _same(self, other: "LaurentSeries"):
        if self.var != other.var or not (self.ring is other.ring or self.ring == other.ring):
            raise ValueError(f"series mismatch: {self.var}/{other.var} over {self.ring}/{other.ring}")

    def _coerce(self, other):
        if isinstance(other, LaurentSeries):
            if other.var == self.var:
                self._same(other)
                return other
            # a series in the inner variable used as a constant coefficient
            if isinstance(self.ring, LaurentRing) and other.var == self.ring.var:
                return LaurentSeries(self.ring, {0: other}, None, self.var)
            raise ValueError(f"cannot combine series in {self.var} and {other.var}")
        if isinstance(other, SCALARS + (RingElement,)):
            c = self.ring(other)
            return LaurentSeries(self.ring, {0: c}, None, self.var)
        return NotImplemented

    # -- arithmetic -----------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        prec = _min_prec(self.prec, other.prec)
        out = dict(self.coeffs)
        for d, c in other.coeffs.items():
            out[d] = out[d] + c if d in out else c
        return LaurentSeries(self.ring, out, prec, self.var)

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeries(self.ring, {d: -c for d, c in self.coeffs.items()}, self.prec, self.var)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return LaurentSeries(self.ring, {}, None, self.var)
        va, vb = self.valuation(), other.valuation()
        cands = []
        if self.prec is not None:
            cands.append(self.prec + vb)
        if other.prec is not None:
            cands.append(other.prec + va)
        prec = min(cands) if cands else None
        if isinstance(self.ring, TestRing):
            return LaurentSeries(self.ring, _mul_scalar_series(self, other, prec), prec, self.var)
        out: dict = {}
        b_items = list(other.coeffs.items())
        for da, ca in self.coeffs.items():
            for db, cb in b_items:
                d = da + db
                if prec is not None and d >= prec:
                    continue
                p = ca * cb
                if d in out:
                    out[d] = out[d] + p
                else:
                    out[d] = p
        return LaurentSeries(self.ring, out, prec, self.var)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("use invert_series for negative powers")
        result = LaurentSeries.one(self.ring, self.var)
        for _ in range(n):
            result = result * self
        return result

    def scale(self, c) -> "LaurentSeries":
        """Multiply every coefficient by a coefficient-ring element."""
        return LaurentSeries(self.ring, {d: x * c for d, x in self.coeffs.items()}, self.prec, self.var)

    def shift(self, k: int) -> "LaurentSeries":
        """Multiply by ``var**k``."""
        return LaurentSeries(self.ring, {d + k: c for d, c in self.coeffs.items()},
                             None if self.prec is None else self.prec + k, self.var)

    def truncate(self, n: int | None) -> "LaurentSeries":
        if n is None:
            return self
        prec = n if self.prec is None else min(n, self.prec)
        return LaurentSeries(self.ring, self.coeffs, prec, self.var)

    def map_coeffs(self, fn: Callable, ring=None) -> "LaurentSeries":
        return LaurentSeries(ring or self.ring, {d: fn(c) for d, c in self.coeffs.items()}, self.prec, self.var)

    # -- parts ----------------------------------------------------------------
    def positive_part(self) -> "LaurentSeries":
        """Degrees >= 0 (keeps the precision)."""
        return LaurentSeries(self.ring, {d: c for d, c in self.coeffs.items() if d >= 0}, self.prec, self.var)

    def negative_part(self) -> "LaurentSeries":
        """Degrees < 0; exact whenever the precision is at least 0."""
        if self.prec is not None and self.prec < 0:
            return LaurentSeries(self.ring, dict(self.coeffs), self.prec, self.var)
        return LaurentSeries(self.ring, {d: c for d, c in self.coeffs.items() if d < 0}, None, self.var)

    # -- factor structure -----------------------------------------------------
    def project(self, i: int) -> "LaurentSeries":
        ring = self.ring
        fring = ring.factor_ring(i)
        return LaurentSeries(fring, {d: ring.project(c, i) for d, c in self.coeffs.items()}, self.prec, self.var)

    def n_factors(self) -> int:
        return len(self.test_ring.factors)

    # -- coefficient-ring protocol (used when this series is a coefficient) ---
    def is_unit(self) -> bool:
        """Some known coefficient is a unit in every factor.

        Over a connected artinian ring, ``R((t))`` has a unit coefficient iff
        the series is invertible; over products this is checked per factor.
        """
        if self.n_factors() == 1:
            return any(c.is_unit() for c in self.coeffs.values())
        return all(self.project(i).is_unit() for i in range(self.n_factors()))

    def is_nilpotent(self) -> bool:
        """Every coefficient nilpotent; requires exact series to answer True."""
        if any(not c.is_nilpotent() for c in self.coeffs.values()):
            return False
        if self.prec is not None:
            raise Indeterminate("truncated series: nilpotency hidden beyond precision")
        return True

    # -- comparison -----------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, SCALARS + (RingElement,)):
            other = self._coerce(other)
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (self.var == other.var and self.prec == other.prec
                and self.coeffs == other.coeffs)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.var, self.prec, tuple(sorted(self.coeffs.items(), key=lambda kv: kv[0]))))
        return self._hash

    def agrees_with(self, other: "LaurentSeries") -> bool:
        """Equal on the common known window (recursively for coefficients)."""
        return (self - other).is_known_zero_deep()

    def is_known_zero_deep(self) -> bool:
        for c in self.coeffs.values():
            if isinstance(c, LaurentSeries):
                if not c.is_known_zero_deep():
                    return False
            else:
                return False
        return True

    def __str__(self):
        from .parse import format_series
        return format_series(self)

    def __repr__(self):
        return f"LaurentSeries({self})"


_DENSE_MIN = 96  # term pairs above which the convolution path pays off
_INT64_LIMIT = 2 ** 62


def _scaled_ints(f: "LaurentSeries", lo: int, length: int, dim: int, p: int):
    """Dense integer matrix ``(dim, length)`` of ``f`` and its denominator."""
    den = 1
    if not p:
        for c in f.coeffs.values():
            for x in c.coeffs:
                if x:
                    den = math.lcm(den, int(x.denominator))
    rows = [[0] * length for _ in range(dim)]
    for d, c in f.coeffs.items():
        for k, x in enumerate(c.coeffs):
            if x:
                rows[k][d - lo] = int(x) if p else int(x.numerator) * (den // int(x.denominator))
    return rows, den


def _mul_dense(a, b, prec, ring) -> dict:
    mult, dim, p = ring._mult, ring.dim, ring.field.p
    lo_a, lo_b = min(a.coeffs), min(b.coeffs)
    hi_a, hi_b = max(a.coeffs), max(b.coeffs)
    if prec is not None:
        hi_a = min(hi_a, prec - lo_b - 1)
        hi_b = min(hi_b, prec - lo_a - 1)
    la, lb = hi_a - lo_a + 1, hi_b - lo_b + 1
    A, da = _scaled_ints(a.truncate(hi_a + 1) if hi_a < max(a.coeffs) else a, lo_a, la, dim, p)
    B, db = _scaled_ints(b.truncate(hi_b + 1) if hi_b < max(b.coeffs) else b, lo_b, lb, dim, p)
    ma = max((abs(x) for row in A for x in row), default=0)
    mb = max((abs(x) for row in B for x in row), default=0)
    bound = ma * mb * min(la, lb) * max(1, sum(len(r) for r in mult))
    dtype = np.int64 if bound < _INT64_LIMIT else object
    An = [np.array(r, dtype=dtype) for r in A]
    Bn = [np.array(r, dtype=dtype) for r in B]
    out = [None] * dim
    for i in range(dim):
        if not An[i].any():
            continue
        for j, k in mult[i]:
            if not Bn[j].any():
                continue
            c = np.convolve(An[i], Bn[j])
            out[k] = c if out[k] is None else out[k] + c
            if p and dtype is np.int64:
                out[k] %= p
    zero = ring.field.zero
    den = da * db
    res = {}
    base = lo_a + lo_b
    n = la + lb - 1
    for t in range(n):
        d = base + t
        if prec is not None and d >= prec:
            break
        coeffs = []
        for k in range(dim):
            v = out[k][t] if out[k] is not None else 0
            v = int(v)
            if p:
                coeffs.append(v % p)
            else:
                coeffs.append(mpq(v, den) if v else zero)
        if any(coeffs):
            res[d] = RingElement(ring, tuple(coeffs))
    return res


def _mul_scalar_series(a: "LaurentSeries", b: "LaurentSeries", prec) -> dict:
    """Coefficients of ``a * b`` over a test ring, accumulated on raw tuples."""
    ring = a.ring
    if len(a.coeffs) * len(b.coeffs) >= _DENSE_MIN:
        return _mul_dense(a, b, prec, ring)
    mult, dim, p = ring._mult, ring.dim, ring.field.p
    zero = ring.field.zero
    acc: dict = {}
    b_items = [(db, cb.coeffs) for db, cb in b.coeffs.items()]
    for da, ca in a.coeffs.items():
        terms = [(i, x, mult[i]) for i, x in enumerate(ca.coeffs) if x]
        for db, oc in b_items:
            d = da + db
            if prec is not None and d >= prec:
                continue
            out = acc.get(d)
            if out is None:
                out = acc[d] = [zero] * dim
            for i, x, row in terms:
                for j, k in row:
                    y = oc[j]
                    if y:
                        out[k] += x * y
    res = {}
    for d, out in acc.items():
        if p:
            out = [c % p for c in out]
        if any(out):
            res[d] = RingElement(ring, tuple(out))
    return res


def _exact_zero(c) -> bool:
    if isinstance(c, LaurentSeries):
        return c.is_zero()
    return c.is_zero()


# IterSeries2 is the same type with a LaurentRing coefficient ring.
IterSeries2 = LaurentSeries
LaurentSeries1 = LaurentSeries


def laurent_ring(ring: TestRing, var: str = "t") -> LaurentRing:
    return LaurentRing(ring, var)


def iter_series(ring: TestRing, terms: dict, prec=None, inner="t", outer="s") -> LaurentSeries:
    """Build an exact-or-truncated element of ``R((t))((s))``.

    ``terms`` maps ``(inner_degree, outer_degree)`` to scalars/ring elements.
    """
    lring = LaurentRing(ring, inner)
    slices: dict = {}
    for (i, j), c in terms.items():
        slices.setdefault(j, {})[i] = ring(c)
    coeffs = {j: LaurentSeries(ring, cs, None, inner) for j, cs in slices.items()}
    return LaurentSeries(lring, coeffs, prec, outer)


def lift_inner(f: LaurentSeries, outer: str = "s") -> LaurentSeries:
    """View a one-variable series as constant in the outer variable."""
    return LaurentSeries(LaurentRing(f.ring, f.var), {0: f} if not f.is_zero() else {}, None, outer)


def slice0(f: LaurentSeries) -> LaurentSeries:
    """The outer-degree-0 coefficient of an iterated series."""
    return f.get(0)


def inner_terms(f: LaurentSeries) -> Iterable:
    """Yield ``(inner_degree, outer_degree, coeff)`` for an iterated series."""
    for j, c in f.items():
        for i, a in c.items():
            yield i, j, a


def min_inner_prec(f: LaurentSeries) -> int | None:
    """Smallest inner precision over the stored coefficients (None if all exact)."""
    return _min_prec(*(c.prec for c in f.coeffs.values()))


def truncate_inner(f: LaurentSeries, n: int) -> LaurentSeries:
    return LaurentSeries(f.ring, {j: c.truncate(n) for j, c in f.coeffs.items()}, f.prec, f.var)


def inner_exact(f: LaurentSeries) -> bool:
    return all(c.is_exact for c in f.coeffs.values())


# -- factor splitting -------------------------------------------------------

def split_series(f: LaurentSeries) -> list:
    return [f.project(i) for i in range(f.n_factors())]


def assemble_series(ring, parts: list, var: str) -> LaurentSeries:
    """Inverse of :func:`split_series` for coefficient ring ``ring``."""
    if len(parts) == 1 and (parts[0].ring == ring):
        return parts[0]
    total = LaurentSeries(ring, {}, None, var)
    for i, p in enumerate(parts):
        total = total + embed_series(ring, i, p)
    return total


def embed_series(ring, i: int, f: LaurentSeries) -> LaurentSeries:
    if isinstance(ring, LaurentRing):
        return LaurentSeries(ring, {d: embed_series(ring.base, i, c) for d, c in f.coeffs.items()}, f.prec, f.var)
    return LaurentSeries(ring, {d: ring.embed(i, c) for d, c in f.coeffs.items()}, f.prec, f.var)


# -- unit decomposition and inversion ---------------------------------------

class UnitDecomposition:
    """Grouping of ring factors by the degree of their first unit coefficient."""

    def __init__(self, series: LaurentSeries, degrees: tuple):
        self.series = series
        self.degrees = degrees  # per factor
        groups: dict = {}
        for i, d in enumerate(degrees):
            groups.setdefault(d, []).append(i)
        self.groups = tuple((d, tuple(ix)) for d, ix in sorted(groups.items()))

    def __repr__(self):
        return f"UnitDecomposition(groups={self.groups})"

    @property
    def h(self) -> int:
        return len(self.groups)

    def restriction(self, group: int) -> LaurentSeries:
        """The summand ``f_i`` supported on the factors of one group."""
        _, factors = self.groups[group]
        ring = self.series.ring
        parts = []
        for i in range(self.series.n_factors()):
            p = self.series.project(i)
            parts.append(p if i in factors else LaurentSeries(p.ring, {}, None, p.var))
        return assemble_series(ring, parts, self.series.var)

    def check(self) -> bool:
        """Re-verify the coefficient conditions on every factor."""
        for i, d in enumerate(self.degrees):
            p = self.series.project(i)
            if not p[d].is_unit():
                return False
            if any(not c.is_nilpotent() for k, c in p.coeffs.items() if k < d):
                return False
        return True


def _first_unit_degree(f: LaurentSeries) -> int:
    """Least degree of a unit coefficient of a series over a connected ring."""
    for d, c in f.items():
        if c.is_unit():
            for k, low in f.items():
                if k >= d:
                    break
                if not low.is_nilpotent():
                    raise NotInvertible(f"coefficient at degree {k} neither unit nor nilpotent")
            return d
    # a truncated coefficient (inner series) may still hide a unit
    if f.prec is None and all(getattr(c, "prec", None) is None for c in f.coeffs.values()):
        raise NotInvertible("no unit coefficient")
    raise InsufficientPrecision("no unit coefficient inside the precision window")


def unit_decompose(f: LaurentSeries) -> UnitDecomposition:
    degrees = tuple(_first_unit_degree(f.project(i)) for i in range(f.n_factors()))
    return UnitDecomposition(f, degrees)


def inverse_power_series(g: LaurentSeries, prec: int, inner_prec: int | None = None) -> LaurentSeries:
    """Inverse of a power series with unit constant term, correct below ``prec``."""
    if g.coeffs and min(g.coeffs) < 0:
        raise ValueError("power series expected")
    ring, var = g.ring, g.var
    limit = prec if g.prec is None else min(prec, g.prec)
    if limit <= 0:
        return LaurentSeries(ring, {}, max(limit, 0), var)
    c0inv = _coeff_inverse(g[0], inner_prec)
    u = [c0inv]
    items = [(d, c) for d, c in g.items() if d > 0]
    for k in range(1, limit):
        acc = None
        for d, c in items:
            if d > k:
                break
            term = c * u[k - d]
            acc = term if acc is None else acc + term
        u.append(-(acc * c0inv) if acc is not None else ring.zero())
    return LaurentSeries(ring, dict(enumerate(u)), limit, var)


def inverse_one_plus(p: LaurentSeries, prec: int, inner_prec: int | None = None) -> LaurentSeries:
    """Inverse of ``1 + p`` for ``p`` supported in degrees >= 1, to ``prec``."""
    return inverse_power_series(p + 1, prec, inner_prec)


def _coeff_inverse(c, inner_prec):
    if isinstance(c, LaurentSeries):
        return invert_series(c, 0 if inner_prec is None else inner_prec)
    return c.inverse()


def _invert_connected(f: LaurentSeries, prec: int, inner_prec: int | None) -> LaurentSeries:
    ring = f.ring
    d = _first_unit_degree(f)
    if f.prec is None and len(f.coeffs) == 1:
        lead_inv = _coeff_inverse(f.coeffs[d], inner_prec)
        return LaurentSeries(ring, {-d: lead_inv}, None, f.var)
    depth = max(0, d - min(f.coeffs))
    nil = ring.nil_index
    work = prec + d + nil * depth + 1
    # the leading unit is folded into the power-series part so that inner
    # truncation is tracked by ordinary series arithmetic
    g = f.shift(-d)
    neg = g.negative_part()
    pos = LaurentSeries(ring, {k: c for k, c in g.coeffs.items() if k >= 0}, g.prec, g.var)
    u = inverse_power_series(pos, work, inner_prec)
    w = neg * u
    total = LaurentSeries.one(ring, f.var)
    term = total
    for _ in range(nil):
        term = -(term * w)
        if term.is_zero():
            break
        total = total + term
    return (u * total).shift(-d).truncate(prec)


def invert_series(f: LaurentSeries, prec: int, inner_prec: int | None = None) -> LaurentSeries:
    """Inverse of a unit of ``R((var))`` correct below degree ``prec``.

    Per connected factor: ``f = lead * var^d * (1 + n + p)`` with ``n`` a
    nilpotent Laurent polynomial in negative degrees and ``p`` a power series
    without constant term; then ``(1+n+p)^{-1} = u * sum_k (-n u)^k`` with
    ``u = (1+p)^{-1}`` and the sum finite because ``n`` is nilpotent.  For
    iterated series ``inner_prec`` fixes the working precision of inner
    coefficient inverses.
    """
    if f.n_factors() == 1:
        return _invert_connected(f, prec, inner_prec)
    parts = [_invert_connected(p, prec, inner_prec) for p in split_series(f)]
    return assemble_series(f.ring, parts, f.var)


# -- subring membership -------------------------------------------------------

SUBRING_TAGS = ("LL", "LJ", "JL", "JJ", "O2")

SUBRING_DESCRIPTIONS = {
    "LL": "R((t))((s))",
    "LJ": "R((t))[[s]]",
    "JL": "R[[t]]((s))",
    "JJ": "R[[t]][[s]]",
    "O2": "R[[t]] + sum_{i>0} R((t)) s^i",
}

# tag -> set of tags it is contained in (reflexive)
SUBRING_ORDER = {
    "JJ": {"JJ", "LJ", "JL", "O2", "LL"},
    "O2": {"O2", "LJ", "LL"},
    "LJ": {"LJ", "LL"},
    "JL": {"JL", "LL"},
    "LL": {"LL"},
}


def subring_leq(a: str, b: str) -> bool:
    return b in SUBRING_ORDER[a]


def _inner_nonneg(c: LaurentSeries) -> bool:
    if any(d < 0 for d in c.coeffs):
        return False
    if c.prec is not None and c.prec < 0:
        raise Indeterminate("inner truncation hides negative degrees")
    return True


def membership(f: LaurentSeries, tag: str) -> bool:
    """Decide ``f`` in the subring ``tag`` of ``R((t))((s))``.

    Raises :class:`Indeterminate` when truncation hides a constrained region.
    Slices beyond an outer truncation are outside the window and not judged;
    a truncated slice is judged on its known degrees.
    """
    if tag not in SUBRING_TAGS:
        raise ValueError(f"unknown subring tag {tag!r}")
    if tag == "LL":
        return True
    outer_ok = True
    if tag in ("LJ", "JJ", "O2"):
        if any(j < 0 for j in f.coeffs):
            return False
        if f.prec is not None and f.prec < 0:
            raise Indeterminate("outer truncation hides negative degrees")
    if tag in ("JL", "JJ"):
        for c in f.coeffs.values():
            if not _inner_nonneg(c):
                return False
    if tag == "O2":
        c0 = f.coeffs.get(0)
        if c0 is not None and not _inner_nonneg(c0):
            return False
        if c0 is None and f.prec is not None and f.prec <= 0:
            raise Indeterminate("outer truncation hides the s^0 coefficient")
    return outer_ok


def membership3(f: LaurentSeries, tag: str) -> str:
    """Three-valued membership: 'true', 'false' or 'indeterminate'."""
    try:
        return "true" if membership(f, tag) else "false"
    except Indeterminate:
        return "indeterminate"


def is_subring_unit(f: LaurentSeries, tag: str) -> bool:
    """``f`` lies in the unit group of the subring ``tag`` (within its window)."""
    if not membership(f, tag):
        return False
    n = f.n_factors()
    if n > 1:
        return all(is_subring_unit(f.project(i), tag) for i in range(n))
    if tag in ("LJ", "JJ", "O2"):
        c0 = f.get(0)
        if f.prec is not None and f.prec <= 0:
            raise Indeterminate("s^0 coefficient unknown")
        if tag == "LJ":
            if not c0.is_unit() and c0.prec is not None:
                raise Indeterminate("no unit coefficient of s^0 inside the window")
            return c0.is_unit()
        if c0.prec is not None and c0.prec <= 0:
            raise Indeterminate("t^0 coefficient unknown")
        return c0.get(0).is_unit()
    if tag == "JL":
        for j, c in f.items():
            if c.prec is not None and c.prec <= 0:
                raise Indeterminate("t^0 coefficient unknown")
            if c.get(0).is_unit():
                return True
            if any(not a.is_nilpotent() for a in c.coeffs.values()):
                return False
        if f.prec is None:
            return False
        raise Indeterminate("no unit-leading coefficient inside the window")
    return f.is_unit() if not f.is_iterated else _ll_unit(f)


def _ll_unit(f: LaurentSeries) -> bool:
    try:
        _first_unit_degree(f)
        return True
    except NotInvertible:
        return False
