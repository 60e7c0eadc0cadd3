"""Independent reference computations used to pin derived values.

Nothing here calls the library's arithmetic.  Series are plain dicts and
coefficients are pairs ``(a, b)`` meaning ``a + b*e`` with ``e^2 = 0``; over a
field the ``b`` part is simply zero.  Library objects are only read, never
computed with.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product


def frac(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator)) if hasattr(x, "numerator") else Fraction(x)


# -- dual numbers ----------------------------------------------------------------

ZERO = (Fraction(0), Fraction(0))
ONE = (Fraction(1), Fraction(0))


def dadd(x, y):
    return (x[0] + y[0], x[1] + y[1])


def dneg(x):
    return (-x[0], -x[1])


def dmul(x, y):
    return (x[0] * y[0], x[0] * y[1] + x[1] * y[0])


def dinv(x):
    if x[0] == 0:
        raise ZeroDivisionError("not a unit")
    a = 1 / x[0]
    return (a, -x[1] * a * a)


# -- one-variable truncated series: {degree: dual} keeping degrees < T -------------

def clean(f):
    return {d: c for d, c in f.items() if c != ZERO}


def add1(f, g):
    out = dict(f)
    for d, c in g.items():
        out[d] = dadd(out.get(d, ZERO), c)
    return clean(out)


def neg1(f):
    return {d: dneg(c) for d, c in f.items()}


def mul1(f, g, T):
    out = {}
    for a, x in f.items():
        for b, y in g.items():
            if a + b < T:
                out[a + b] = dadd(out.get(a + b, ZERO), dmul(x, y))
    return clean(out)


def shift1(f, k):
    return {d + k: c for d, c in f.items()}


def pos1(f):
    return {d: c for d, c in f.items() if d >= 0}


def negpart1(f):
    return {d: c for d, c in f.items() if d < 0}


def inv_power_series(u, T):
    """Inverse of a power series with unit constant term, kept below ``t^T``."""
    assert min(u) >= 0 and u.get(0, ZERO)[0] != 0
    c0 = dinv(u[0])
    out = {0: c0}
    for n in range(1, T):
        acc = ZERO
        for k in range(1, n + 1):
            if k in u and (n - k) in out:
                acc = dadd(acc, dmul(u[k], out[n - k]))
        if acc != ZERO:
            out[n] = dneg(dmul(c0, acc))
    return clean(out)


def field_valuation(f):
    """Lowest degree whose coefficient has a nonzero field part."""
    return min(d for d, c in f.items() if c[0] != 0)


# -- GR1D and GRJ to first order in e ----------------------------------------------

def gr1d(f, T=40):
    """``(m, sigma)`` with ``f * w = sigma``, ``w`` a unit power series.

    The field part of ``f`` fixes ``m``; ``u = t^-m f`` has unit constant
    term up to nilpotent negative terms, so ``sigma = t^m (1 + e * n)`` where
    ``n`` is the negative part of the e-coefficient of ``t^-m f / u0``.
    """
    m = field_valuation(f)
    g = shift1(f, -m)
    field_part = {d: (c[0], Fraction(0)) for d, c in g.items() if c[0] != 0}
    inv0 = inv_power_series(field_part, T)
    ratio = mul1(g, inv0, T)  # 1 + e * (...)
    tail = {d: c for d, c in negpart1(ratio).items()}
    sigma = add1({0: ONE}, tail)
    return m, shift1(sigma, m)


def grj(f2, S, T=40):
    """Jet representative slices ``0..S-1`` of ``f2 = {j: {i: dual}}``.

    Write ``f_0 = t^m (u0 + e u1)`` with ``u0`` a unit power series.  Slice
    ``j >= 1`` needs ``w_j`` in ``R[[t]]`` with ``u w_j + k`` strictly
    negative, where ``k = t^-m sum_(a>=1) f_a w_(j-a)``.  Taking
    ``w_j = -u0^-1 k_+`` leaves the e-order term ``-e u1 u0^-1 k_+``, whose
    nonnegative part one more correction removes (``e^2 = 0``).
    """
    m, sigma0 = gr1d(f2[0], T)
    u = shift1(f2[0], -m)
    u0inv = inv_power_series({d: (c[0], Fraction(0)) for d, c in u.items() if c[0] != 0}, T)
    ratio = mul1(u, u0inv, T)  # 1 + e u1/u0
    w = {0: add1(u0inv, neg1(mul1(u0inv, pos1(add1(ratio, {0: dneg(ONE)})), T)))}
    sigma = {0: sigma0}
    for j in range(1, S):
        acc = {}
        for a in range(1, j + 1):
            if a in f2 and (j - a) in w:
                acc = add1(acc, mul1(f2[a], w[j - a], T))
        k = shift1(acc, -m)
        wj = neg1(mul1(u0inv, pos1(k), T))
        rest = add1(mul1(u, wj, T), k)
        if pos1(rest):
            wj = add1(wj, neg1(mul1(u0inv, pos1(rest), T)))
            rest = add1(mul1(u, wj, T), k)
        assert not pos1(rest)
        w[j] = wj
        if rest:
            sigma[j] = shift1(rest, m)
    return sigma, w


def lsigma_first_order(g):
    """``1 + e*g`` modulo ``1 + e*R[[t]]((s))``: keep the t-negative part."""
    out = {}
    for j, sl in g.items():
        neg = negpart1(sl)
        if neg:
            out[j] = neg
    return out


# -- two-variable truncated multiplication ------------------------------------------

def mul2(f, g, S, T):
    """``f * g`` for ``{j: {i: dual}}`` keeping outer degrees < S, inner < T."""
    out = {}
    for a, fa in f.items():
        for b, gb in g.items():
            if a + b < S:
                out[a + b] = add1(out.get(a + b, {}), mul1(fa, gb, T))
    return {j: sl for j, sl in out.items() if sl}


# -- reading library objects --------------------------------------------------------

def dual_of(c):
    """Library element of ``Q[e]/(e^2)`` (or ``Q``) as a dual pair."""
    xs = [frac(x) for x in c.coeffs]
    return (xs[0], xs[1] if len(xs) > 1 else Fraction(0))


def series1(f):
    return {d: dual_of(c) for d, c in f.coeffs.items()}


def series2(f):
    if not getattr(f, "is_iterated", False):
        return {0: series1(f)}
    return {j: series1(sl) for j, sl in f.coeffs.items()}


# -- F_2[e]/(e^2) brute force for the strict power-series splitting ----------------
# elements are pairs of bits (a, b) = a + b*e

F2E = [(a, b) for a in (0, 1) for b in (0, 1)]


def f2mul(x, y):
    return (x[0] & y[0], (x[0] & y[1]) ^ (x[1] & y[0]))


def f2add(x, y):
    return (x[0] ^ y[0], x[1] ^ y[1])


def strict_solutions(epsilon: dict, beta: dict, gamma_degrees=range(0, 3)):
    """All ``gamma`` supported in ``gamma_degrees`` with ``beta - (1+eps) gamma``
    strictly negative.  Over characteristic 2, minus is plus."""
    sols = []
    degs = list(gamma_degrees)
    for coeffs in product(F2E, repeat=len(degs)):
        gamma = {d: c for d, c in zip(degs, coeffs) if c != (0, 0)}
        res = dict(beta)
        for d, c in gamma.items():
            res[d] = f2add(res.get(d, (0, 0)), c)
            for k, ek in epsilon.items():
                res[d + k] = f2add(res.get(d + k, (0, 0)), f2mul(ek, c))
        if all(c == (0, 0) for d, c in res.items() if d >= 0):
            sols.append((gamma, {d: c for d, c in res.items() if c != (0, 0)}))
    return sols
