"""Artinian test rings: finite products of local monomial-quotient algebras.

A factor is ``k[x_1..x_n] / I`` with ``I`` a monomial ideal containing a pure
power of every generator, so the quotient is finite dimensional with the
standard monomials as basis and the augmentation ideal as nilradical.  A
:class:`TestRing` is an ordered product of such factors over a common base
field (the rationals or a prime field).

Elements are stored densely: one scalar per standard monomial of every factor.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from gmpy2 import mpq

# scalars accepted wherever a ring element is expected
SCALARS = (int, Fraction, type(mpq(0)))
from functools import cached_property
from typing import Iterable, Sequence


class RingMismatch(ValueError):
    pass


class NotNilpotent(ValueError):
    pass


class NotInvertible(ArithmeticError):
    pass


class BaseField:
    """The rationals (``p == 0``) or the prime field ``F_p``."""

    def __init__(self, p: int = 0):
        if p < 0 or (p and any(p % d == 0 for d in range(2, int(p**0.5) + 1))) or p == 1:
            raise ValueError(f"characteristic must be 0 or a prime, got {p}")
        self.p = p

    @property
    def name(self) -> str:
        return f"F{self.p}" if self.p else "Q"

    def __repr__(self):
        return self.name

    def __eq__(self, other):
        return isinstance(other, BaseField) and other.p == self.p

    def __hash__(self):
        return hash(("field", self.p))

    @property
    def zero(self):
        return 0 if self.p else mpq(0)

    @property
    def one(self):
        return 1 if self.p else mpq(1)

    def coerce(self, x):
        if self.p:
            if isinstance(x, SCALARS[1:]):
                return (int(x.numerator) * pow(int(x.denominator), -1, self.p)) % self.p
            return int(x) % self.p
        return mpq(x)

    def inv(self, x):
        if not x:
            raise ZeroDivisionError("inverse of zero scalar")
        if self.p:
            return pow(x, -1, self.p)
        return 1 / x

    def elements(self):
        """All scalars of a finite field."""
        if not self.p:
            raise ValueError("Q is infinite")
        return range(self.p)

    def fmt(self, x) -> str:
        return str(x)


def _parse_monomial(text: str, gens: Sequence[str]) -> tuple:
    exps = [0] * len(gens)
    for part in text.split("*"):
        part = part.strip()
        name, _, power = part.partition("^")
        name = name.strip()
        if name not in gens:
            raise ValueError(f"unknown generator {name!r} in relation {text!r}")
        exps[gens.index(name)] += int(power) if power else 1
    return tuple(exps)


class LocalFactor:
    """One local factor ``k[gens]/(monomial relations)``."""

    def __init__(self, gens: Sequence[str], relations: Iterable[Sequence[int]]):
        self.gens = tuple(gens)
        if len(set(self.gens)) != len(self.gens):
            raise ValueError(f"repeated generator names in {self.gens}")
        rels = {tuple(r) for r in relations}
        if any(len(r) != len(self.gens) for r in rels):
            raise ValueError("relation length does not match generator count")
        if any(sum(r) == 0 for r in rels):
            raise ValueError("relation 1 would kill the factor")
        # keep only minimal generators of the ideal
        self.relations = tuple(sorted(
            r for r in rels
            if not any(q != r and all(a <= b for a, b in zip(q, r)) for q in rels)
        ))
        for i, g in enumerate(self.gens):
            if not any(sum(r) == r[i] and r[i] > 0 for r in self.relations):
                raise ValueError(f"generator {g} has no pure power in the ideal")

    def in_ideal(self, mono: Sequence[int]) -> bool:
        return any(all(a <= b for a, b in zip(r, mono)) for r in self.relations)

    @cached_property
    def basis(self) -> tuple:
        bounds = []
        for i in range(len(self.gens)):
            bounds.append(min(r[i] for r in self.relations if sum(r) == r[i]))
        monos = [m for m in itertools.product(*(range(b) for b in bounds))
                 if not self.in_ideal(m)]
        monos.sort(key=lambda m: (sum(m), tuple(-a for a in m)))
        return tuple(monos)

    @cached_property
    def nil_index(self) -> int:
        """Least ``N`` with (augmentation ideal)^N = 0."""
        return max(sum(m) for m in self.basis) + 1

    def mono_name(self, mono) -> str:
        parts = []
        for g, a in zip(self.gens, mono):
            if a == 1:
                parts.append(g)
            elif a > 1:
                parts.append(f"{g}^{a}")
        return "*".join(parts)

    def describe(self, field: BaseField) -> str:
        if not self.gens:
            return field.name
        rels = ",".join(self.mono_name(r) for r in self.relations)
        return f"{field.name}[{','.join(self.gens)}]/({rels})"

    def __eq__(self, other):
        return isinstance(other, LocalFactor) and (self.gens, self.relations) == (other.gens, other.relations)

    def __hash__(self):
        return hash((self.gens, self.relations))


class TestRing:
    """Finite product of local monomial-quotient algebras over a base field."""

    __test__ = False  # not a pytest class

    def __init__(self, field: BaseField, factors: Sequence[LocalFactor]):
        if not factors:
            raise ValueError("a test ring needs at least one factor")
        self.field = field
        self.factors = tuple(factors)
        offsets, basis = [], []
        for fi, fac in enumerate(self.factors):
            offsets.append(len(basis))
            basis.extend((fi, m) for m in fac.basis)
        self.offsets = tuple(offsets)
        self.basis = tuple(basis)
        self.dim = len(basis)
        index = {b: i for i, b in enumerate(basis)}
        # mult[i] lists (j, k) with basis_i * basis_j = basis_k
        mult = []
        for i, (fi, mi) in enumerate(basis):
            row = []
            fac = self.factors[fi]
            for j, (fj, mj) in enumerate(basis):
                if fj != fi:
                    continue
                prod = tuple(a + b for a, b in zip(mi, mj))
                if not fac.in_ideal(prod):
                    row.append((j, index[(fi, prod)]))
            mult.append(tuple(row))
        self._mult = tuple(mult)
        self._index = index

    # -- construction helpers -------------------------------------------------
    @classmethod
    def parse(cls, text: str) -> "TestRing":
        """Parse ``Q[e1,e2]/(e1^2,e2^2)``, ``F2[e]/(e^2)``, ``Q[e]/(e^2) x Q``."""
        from .parse import parse_ring
        return parse_ring(text)

    @classmethod
    def field_ring(cls, p: int = 0) -> "TestRing":
        return cls(BaseField(p), [LocalFactor((), [])])

    def __repr__(self):
        return f"TestRing({self.describe()!r})"

    def describe(self) -> str:
        return " x ".join(f.describe(self.field) for f in self.factors)

    def __eq__(self, other):
        return self is other or (
            isinstance(other, TestRing) and self.field == other.field and self.factors == other.factors)

    def __hash__(self):
        return hash((self.field, self.factors))

    @property
    def characteristic(self) -> int:
        return self.field.p

    @property
    def is_connected(self) -> bool:
        return len(self.factors) == 1

    @property
    def is_field(self) -> bool:
        return self.dim == 1

    @cached_property
    def nil_index(self) -> int:
        """Nilpotency index of the nilradical (max over factors)."""
        return max(f.nil_index for f in self.factors)

    # -- elements -------------------------------------------------------------
    def element(self, coeffs: Sequence) -> "RingElement":
        return RingElement(self, tuple(self.field.coerce(c) for c in coeffs))

    def zero(self) -> "RingElement":
        return RingElement(self, (self.field.zero,) * self.dim)

    def one(self) -> "RingElement":
        return self.scalar(1)

    def scalar(self, x) -> "RingElement":
        c = self.field.coerce(x)
        coeffs = [self.field.zero] * self.dim
        for off in self.offsets:
            coeffs[off] = c
        return RingElement(self, tuple(coeffs))

    def __call__(self, x) -> "RingElement":
        if isinstance(x, RingElement):
            if x.ring != self:
                raise RingMismatch(f"{x.ring} is not {self}")
            return x
        return self.scalar(x)

    def monomial(self, factor: int, mono: Sequence[int], coeff=1) -> "RingElement":
        coeffs = [self.field.zero] * self.dim
        key = (factor, tuple(mono))
        if key in self._index:
            coeffs[self._index[key]] = self.field.coerce(coeff)
        return RingElement(self, tuple(coeffs))

    def gen(self, name: str, factor: int | None = None) -> "RingElement":
        hits = [i for i, f in enumerate(self.factors) if name in f.gens and (factor is None or i == factor)]
        if not hits:
            raise KeyError(f"no generator {name!r} in {self.describe()}")
        if len(hits) > 1:
            raise KeyError(f"generator {name!r} is ambiguous in {self.describe()}")
        fi = hits[0]
        fac = self.factors[fi]
        mono = [0] * len(fac.gens)
        mono[fac.gens.index(name)] = 1
        return self.monomial(fi, mono)

    def idempotent(self, factor: int) -> "RingElement":
        return self.monomial(factor, (0,) * len(self.factors[factor].gens))

    def factor_ring(self, i: int) -> "TestRing":
        return _factor_ring_cache(self, i)

    def project(self, x: "RingElement", i: int) -> "RingElement":
        lo = self.offsets[i]
        hi = self.offsets[i + 1] if i + 1 < len(self.offsets) else self.dim
        return RingElement(self.factor_ring(i), x.coeffs[lo:hi])

    def embed(self, i: int, x: "RingElement") -> "RingElement":
        lo = self.offsets[i]
        coeffs = [self.field.zero] * self.dim
        coeffs[lo:lo + x.ring.dim] = x.coeffs
        return RingElement(self, tuple(coeffs))

    def assemble(self, parts: Sequence["RingElement"]) -> "RingElement":
        if len(parts) != len(self.factors):
            raise ValueError("need one component per factor")
        coeffs = []
        for p in parts:
            coeffs.extend(p.coeffs)
        return RingElement(self, tuple(coeffs))

    def elements(self) -> Iterable["RingElement"]:
        """Every element (finite base field only)."""
        scalars = list(self.field.elements())
        for coeffs in itertools.product(scalars, repeat=self.dim):
            yield RingElement(self, coeffs)

    def nilpotents(self) -> list:
        return [x for x in self.elements() if x.is_nilpotent()]

    def units(self) -> list:
        return [x for x in self.elements() if x.is_unit()]


_FACTOR_RINGS: dict = {}


def _factor_ring_cache(ring: TestRing, i: int) -> TestRing:
    if ring.is_connected:
        return ring
    key = (ring.field, ring.factors[i])
    if key not in _FACTOR_RINGS:
        _FACTOR_RINGS[key] = TestRing(ring.field, [ring.factors[i]])
    return _FACTOR_RINGS[key]


class RingElement:
    """Immutable element of a :class:`TestRing` (dense coefficient tuple)."""

    __slots__ = ("ring", "coeffs", "_hash")

    def __init__(self, ring: TestRing, coeffs: tuple):
        self.ring = ring
        self.coeffs = coeffs
        self._hash = None

    def _check(self, other) -> "RingElement":
        if isinstance(other, RingElement):
            if other.ring is not self.ring and other.ring != self.ring:
                raise RingMismatch(f"{self.ring.describe()} vs {other.ring.describe()}")
            return other
        if isinstance(other, SCALARS):
            return self.ring.scalar(other)
        return NotImplemented

    def _wrap(self, coeffs) -> "RingElement":
        p = self.ring.field.p
        if p:
            coeffs = tuple(c % p for c in coeffs)
        return RingElement(self.ring, tuple(coeffs))

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self._wrap(a + b for a, b in zip(self.coeffs, other.coeffs))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self._wrap(a - b for a, b in zip(self.coeffs, other.coeffs))

    def __rsub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return other - self

    def __neg__(self):
        return self._wrap(-a for a in self.coeffs)

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        ring = self.ring
        out = [ring.field.zero] * ring.dim
        oc = other.coeffs
        mult = ring._mult
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, k in mult[i]:
                b = oc[j]
                if b:
                    out[k] += a * b
        return self._wrap(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, SCALARS):
            other = self.ring.scalar(other)
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.ring == other.ring and self.coeffs == other.coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.coeffs)
        return self._hash

    def __bool__(self):
        return any(self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def constant_terms(self) -> tuple:
        return tuple(self.coeffs[o] for o in self.ring.offsets)

    def is_nilpotent(self) -> bool:
        """True iff every factor component has zero constant term."""
        return not any(self.constant_terms())

    def is_unit(self) -> bool:
        return all(self.constant_terms())

    def nilpotency_index(self) -> int | None:
        """Least ``n`` with ``self**n == 0``, or None when not nilpotent."""
        if not self.is_nilpotent():
            return None
        n, power = 1, self
        while power:
            power = power * self
            n += 1
            if n > self.ring.nil_index:
                raise AssertionError("nilpotency index exceeds nilradical bound")
        return n

    def inverse(self) -> "RingElement":
        """Exact inverse via the geometric series of the nilpotent part."""
        if not self.is_unit():
            raise NotInvertible(f"{self} is not a unit")
        ring = self.ring
        field = ring.field
        c_inv = [field.zero] * ring.dim
        for off in ring.offsets:
            c_inv[off] = field.inv(self.coeffs[off])
        c_inv = RingElement(ring, tuple(c_inv))
        n = ring.one() - self * c_inv  # nilpotent
        total, term = ring.one(), ring.one()
        for _ in range(ring.nil_index):
            term = term * n
            if not term:
                break
            total = total + term
        return total * c_inv

    def __truediv__(self, other):
        other = self._check(other)
        return self * other.inverse()

    def split(self) -> list:
        return [self.ring.project(self, i) for i in range(len(self.ring.factors))]

    def __str__(self):
        ring = self.ring
        if ring.is_connected:
            return _format_component(ring.factors[0], ring.field, self.coeffs)
        parts = []
        for i in range(len(ring.factors)):
            parts.append(str(ring.project(self, i)))
        return "(" + ", ".join(parts) + ")"

    def __repr__(self):
        return f"RingElement({self})"


def _format_component(factor: LocalFactor, field: BaseField, coeffs) -> str:
    terms = []
    for mono, c in zip(factor.basis, coeffs):
        if not c:
            continue
        name = factor.mono_name(mono)
        neg = False
        if not field.p and c < 0:
            neg, c = True, -c
        if name:
            body = name if c == 1 else f"{c}*{name}"
        else:
            body = str(c)
        terms.append(("-" if neg else "+", body))
    if not terms:
        return "0"
    out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


def split_factors(a: RingElement) -> list:
    return a.split()


def is_nilpotent(a: RingElement) -> tuple:
    if a.is_nilpotent():
        return True, a.nilpotency_index()
    return False, None


def is_unit_ring(a: RingElement) -> tuple:
    if a.is_unit():
        return True, a.inverse()
    return False, None


class NilpotencyCertificate:
    """Generators together with the least ``Q`` such that ``(gens)^Q = 0``."""

    def __init__(self, generators, index: int, witness=None):
        self.generators = tuple(generators)
        self.index = index
        # a nonzero product of index-1 generators, when index > 1
        self.witness = witness

    def __repr__(self):
        return f"NilpotencyCertificate(Q={self.index}, gens={len(self.generators)})"

    def check(self) -> bool:
        """Re-verify by expanding every product of ``index`` generators."""
        gens = [g for g in self.generators if not g.is_zero()]
        for combo in itertools.combinations_with_replacement(range(len(gens)), self.index):
            prod = gens[combo[0]]
            for k in combo[1:]:
                prod = prod * gens[k]
            if not prod.is_zero():
                return False
        return True


def ideal_nilpotency(gens: Sequence, limit: int = 64) -> NilpotencyCertificate:
    """Least ``Q`` with every product of ``Q`` generators equal to zero.

    Works for any commutative elements exposing ``*``, ``is_zero`` and
    ``is_nilpotent`` (ring elements or exact series).  Products of the ideal's
    generators span ``I^Q`` as an ideal, so checking them suffices.
    """
    gens = list(gens)
    for g in gens:
        if not g.is_nilpotent():
            raise NotNilpotent(f"generator {g} is not nilpotent")
    nonzero = list({g: None for g in gens if not g.is_zero()})
    if not nonzero:
        return NilpotencyCertificate(gens, 1)
    q = 1
    layer = set(nonzero)
    witness = next(iter(layer))
    while layer:
        nxt = set()
        for p in layer:
            for g in nonzero:
                prod = p * g
                if not prod.is_zero():
                    nxt.add(prod)
        q += 1
        if nxt:
            witness = next(iter(nxt))
        layer = nxt
        if q > limit:
            raise NotNilpotent("ideal nilpotency exceeds search limit")
    return NilpotencyCertificate(gens, q, witness)
