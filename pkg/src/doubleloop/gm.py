"""Canonical coset representatives for the multiplicative group.

Every reduction returns a :class:`NormalFormResult` whose ``witness`` ``w``
lies in the quotient's subgroup and satisfies ``f * w == representative`` on
``window``.  Representatives with several components (``GRBIG``, ``GRL``,
``GR2``) are stored componentwise; :attr:`NormalFormResult.representative`
is their product.

Two-variable reductions run at an internal working precision and retry with
more precision until every reported coefficient is certified.  Reported
objects are then cut to a deterministic shape:

* exact components stay exact;
* jet components keep exact slices below ``s_prec``;
* components with infinite inner support are cut at ``t^t_prec``, plus the
  inner degrees the other components' negative terms eat in the product;
* the witness is cut to a staircase so that each of its reported
  coefficients is pinned down by the product identity on the window.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .ring import NotInvertible, NotNilpotent, ideal_nilpotency
from .series import (Indeterminate, InsufficientPrecision, LaurentRing, LaurentSeries,
                     _coeff_inverse, _first_unit_degree, assemble_series, inverse_one_plus,
                     invert_series, lift_inner)

GROUP = "gm"

# quotient tag -> (ambient subring, subgroup subring)
QUOTIENTS = {
    "GR1D": ("L", "J"),
    "GRJ": ("LJ", "JJ"),
    "LGR": ("LL", "LJ"),
    "GRBIG": ("LL", "JJ"),
    "GRL": ("LL", "JL"),
    "GR2": ("LL", "O2"),
}

TWO_VARIABLE = ("GRJ", "LGR", "GRBIG", "GRL", "GR2")

# component name -> shape used when cutting results
_SHAPES = {"sigma": "exact", "sigma_J": "jet", "sigma_L": "inner",
           "sigma_minus": "exact", "sigma_fib": "exact"}

COMPONENTS = {
    "GR1D": ("sigma",),
    "GRJ": ("sigma_J",),
    "LGR": ("sigma_L",),
    "GRBIG": ("sigma_J", "sigma_L"),
    "GRL": ("sigma_J", "sigma_minus"),
    "GR2": ("sigma_fib", "sigma_L"),
}


def quotient_tag(name: str) -> str:
    """Normalise user spellings such as ``grL`` or ``gr_big``."""
    key = name.replace("_", "").replace("-", "").upper()
    if key == "GRLOOP":
        key = "GRL"
    if key not in QUOTIENTS:
        raise ValueError(f"unknown quotient {name!r}; expected one of {', '.join(QUOTIENTS)}")
    return key


@dataclass(frozen=True)
class Window:
    """Region where ``f * witness == representative`` is claimed.

    ``inner_hi[j]`` bounds the inner degrees checked in outer degree ``j``;
    outer degrees run over ``range(outer_lo, outer_hi)``.  One-variable
    results use the single outer degree 0.
    """

    outer_lo: int
    outer_hi: int
    inner_hi: tuple  # ((j, hi), ...)

    def hi(self, j: int) -> int:
        return dict(self.inner_hi)[j]

    def as_dict(self) -> dict:
        return {"outer": [self.outer_lo, self.outer_hi],
                "inner_hi": {str(j): h for j, h in self.inner_hi}}


@dataclass(frozen=True)
class NormalFormResult:
    group: str
    quotient: str
    m: object
    components: tuple  # ((name, series), ...)
    witness: LaurentSeries
    window: Window
    source: LaurentSeries
    t_prec: int
    s_prec: int | None = None
    info: dict = field(default_factory=dict, compare=False)

    def component(self, name: str) -> LaurentSeries:
        return dict(self.components)[name]

    @property
    def subgroup(self) -> str:
        return QUOTIENTS[self.quotient][1]

    @property
    def representative(self) -> LaurentSeries:
        parts = [c for _, c in self.components]
        if self.quotient == "GR1D":
            return parts[0]
        total = None
        for p in parts:
            p2 = p if p.is_iterated else lift_inner(p)
            total = p2 if total is None else total * p2
        return total

    def same_class(self, other: "NormalFormResult") -> bool:
        """Representatives agree on their common known region."""
        if self.quotient != other.quotient or self.m != other.m:
            return False
        for (n1, a), (n2, b) in zip(self.components, other.components):
            if n1 != n2 or not _agree(a, b):
                return False
        return True


def _agree(a: LaurentSeries, b: LaurentSeries) -> bool:
    d = a - b
    if not d.is_iterated:
        return not d.coeffs
    return all(not c.coeffs for c in d.coeffs.values())


# -- product-ring plumbing ----------------------------------------------------

def _per_factor(f: LaurentSeries, fn):
    """Run a connected-ring reduction on every factor and reassemble.

    ``fn`` returns ``(m, [(name, series), ...], witness, info)``.
    """
    n = f.n_factors()
    if n == 1:
        return fn(f)
    runs = [fn(f.project(i)) for i in range(n)]
    ms = tuple(r[0] for r in runs)
    names = [name for name, _ in runs[0][1]]
    comps = []
    for k, name in enumerate(names):
        parts = [r[1][k][1] for r in runs]
        ring = f.ring if parts[0].is_iterated == f.is_iterated else f.ring.base
        comps.append((name, assemble_series(ring, parts, parts[0].var)))
    witness = assemble_series(f.ring, [r[2] for r in runs], f.var)
    info = {"factors": [r[3] for r in runs]}
    return ms, comps, witness, info


# -- one variable -------------------------------------------------------------

def _gr1d_connected(f: LaurentSeries, prec: int, inner_prec: int | None = None):
    """``(m, sigma, a)`` with ``f * a == sigma`` over a connected ring.

    Writes ``f = lead * var^m * (1 + eps + c)`` with ``eps`` the (nilpotent)
    negative part and ``c`` the positive part, then solves
    ``((1 + eps + c) * gamma)_+ = 1`` by the contraction
    ``gamma <- (1+c)^{-1} (1 - (eps*gamma)_+)``; each round multiplies the
    error by a coefficient of ``eps``, so nilpotency ends it.
    Works verbatim over ``B = R((t))`` (the coefficient ring of ``f``).
    """
    ring, var = f.ring, f.var
    m = _first_unit_degree(f)
    lead_inv = _coeff_inverse(f[m], inner_prec)
    g = f.shift(-m).scale(lead_inv)
    eps = g.negative_part()
    if eps.prec is not None:
        raise InsufficientPrecision("negative part of the input is not fully known")
    c = LaurentSeries(ring, {k: v for k, v in g.coeffs.items() if k > 0}, g.prec, var)
    depth = -min(eps.coeffs, default=0)
    nil = ring.nil_index
    work = prec + nil * depth + 1
    u = inverse_one_plus(c, work, inner_prec)
    gamma = u
    if eps.coeffs:
        for _ in range(nil):
            gamma = u * (1 - (eps * gamma).positive_part())
    tail = (eps * gamma).negative_part()
    if tail.prec is not None:
        raise InsufficientPrecision("representative tail not determined")
    sigma = (tail + 1).shift(m)
    witness = gamma.scale(lead_inv).truncate(prec)
    return m, sigma, witness


def reduce_gr1d(f: LaurentSeries, prec: int = 8) -> NormalFormResult:
    """Representative ``t^m + t^{m-1} eps(t)`` of ``f`` in ``R((t))^* / R[[t]]^*``."""
    if f.is_iterated:
        raise ValueError("reduce_gr1d expects a one-variable series")
    if f.prec is not None:
        raise ValueError("reduce_gr1d expects an exact input")

    def run(g):
        m, sigma, a = _gr1d_connected(g, prec)
        return m, [("sigma", sigma)], a, {}

    m, comps, witness, info = _per_factor(f, run)
    if witness.prec is not None and witness.prec < prec:
        raise InsufficientPrecision("witness precision below request")
    witness = witness.truncate(prec)
    v = f.valuation()
    window = Window(0, 1, ((0, prec + v),))
    return NormalFormResult(GROUP, "GR1D", m, tuple(comps), witness, window, f, prec, None, info)


# -- twisted positive split ------------------------------------------------------

def split_twisted_positive(epsilon: LaurentSeries, beta: LaurentSeries):
    """``(gamma, residual)`` with ``beta - (1+epsilon)*gamma = residual``.

    ``gamma`` is a power series and ``residual`` lives in strictly negative
    degrees; both are unique.  Iterates ``beta <- beta_- - epsilon*beta_+``
    and accumulates the positive parts.  Truncated ``beta`` is allowed.
    """
    if epsilon.prec is not None:
        raise ValueError("epsilon must be exact")
    if any(d >= 0 for d in epsilon.coeffs):
        raise ValueError("epsilon must live in strictly negative degrees")
    if any(not c.is_nilpotent() for c in epsilon.coeffs.values()):
        raise NotNilpotent("epsilon must have nilpotent coefficients")
    ring = beta.ring
    gamma = LaurentSeries(ring, {}, None, beta.var)
    b = beta
    for _ in range(ring.nil_index + 1):
        a = b.positive_part()
        if a.is_zero():
            break
        gamma = gamma + a
        b = b.negative_part() - epsilon * a
    else:
        if b.positive_part().coeffs:
            raise ValueError("twisted split did not terminate")
    residual = b.negative_part()
    gamma = gamma.truncate(b.prec) if b.prec is not None else gamma
    return gamma, residual


# -- jets: R((t))[[s]]^* / R[[t]][[s]]^* -----------------------------------------

def _grj_connected(f: LaurentSeries, s_prec: int, inner_prec: int):
    """Slice-by-slice jet reduction; returns ``(m, sigma_J, h)`` with ``f*h = sigma_J``."""
    if any(j < 0 for j in f.coeffs):
        raise ValueError("jet reduction needs an input in R((t))[[s]]")
    if f.prec is not None:
        s_prec = min(s_prec, f.prec)
    ring = f.ring  # LaurentRing
    base = ring.base
    f0 = f.get(0)
    m, sigma0, a0 = _gr1d_connected(f0, inner_prec)
    norm0 = sigma0.shift(-m)
    eps = norm0 - 1
    slices = {k: f.get(k).shift(-m) * a0 for k in range(1, s_prec)}
    h = {0: LaurentSeries(base, {0: base.one()}, None, f0.var)}
    r = {0: norm0}
    for ell in range(1, s_prec):
        acc = LaurentSeries(base, {}, None, f0.var)
        for k in range(1, ell + 1):
            fk = slices[k]
            if fk.is_zero() or h[ell - k].is_zero():
                continue
            acc = acc + fk * h[ell - k]
        gamma, residual = split_twisted_positive(eps, -acc)
        if residual.prec is not None:
            # later slices only lose more inner precision; the caller
            # decides whether the jets obtained so far are enough
            s_prec = ell
            break
        h[ell] = gamma
        r[ell] = -residual
    sigma = LaurentSeries(ring, {j: c.shift(m) for j, c in r.items()}, s_prec, f.var)
    hs = LaurentSeries(ring, h, s_prec, f.var)
    witness = hs.scale(a0)
    return m, sigma, witness


# -- loops of Sigma: R((t))((s))^* / R((t))[[s]]^* ------------------------------------

def reduce_lsigma_core(f: LaurentSeries):
    """Connected-ring core of the L(Sigma) / J(Sigma) reduction.

    ``f = s^m (1 - eps_1 s^-1 - ... - eps_N s^-N)``.  Runs
    ``h_l = (eps_1 h_{l-1} + ... + eps_N h_{l-N})_+`` from ``h_0 = 1``; the
    terms die once ``(Q-1)*N`` is passed.  Returns ``(rep, witness, steps)``
    where ``witness = s^-m * h`` and ``steps`` is the last ``l`` with
    ``h_l`` not (known to be) zero.
    """
    if f.prec is not None or not f.coeffs:
        raise ValueError("L(Sigma) input must be exact and nonzero in s")
    m = max(f.coeffs)
    if (f.coeffs[m] - 1).coeffs:
        raise ValueError("L(Sigma) input must have leading coefficient 1")
    one = f.ring.one()
    g = f.shift(-m)
    eps = {i: -g.coeffs[-i] for i in range(1, -min(g.coeffs) + 1) if -i in g.coeffs}
    for c in eps.values():
        if any(not a.is_nilpotent() for a in c.coeffs.values()):
            raise ValueError("L(Sigma) tail coefficients must be nilpotent")
    n = max(eps, default=0)
    nil = f.ring.nil_index
    limit = (nil - 1) * n
    h = {0: one}
    steps = 0
    for ell in range(1, limit + 1):
        acc = None
        for i, e in eps.items():
            if i > ell or ell - i not in h:
                continue
            term = e * h[ell - i]
            acc = term if acc is None else acc + term
        if acc is None:
            continue
        pos = acc.positive_part()
        if pos.coeffs:
            steps = ell
        if pos.coeffs or pos.prec is not None:
            h[ell] = pos
    hs = LaurentSeries(f.ring, {-ell: c for ell, c in h.items()}, None, f.var)
    prod = g * hs
    if any(j > 0 for j in prod.coeffs):
        raise AssertionError("positive s-degrees in L(Sigma) representative")
    # slice -l equals -(eps_1 h_{l-1} + ...)_-, exact even when eps is truncated
    slices = {}
    for j, c in prod.coeffs.items():
        if c.positive_part().coeffs and j < 0:
            raise AssertionError(f"L(Sigma) representative slice {j} has a positive part")
        if j == 0:
            if (c - 1).coeffs:
                raise AssertionError("L(Sigma) representative does not start with 1")
            slices[0] = LaurentSeries(c.ring, {0: c.ring.one()}, None, c.var)
        else:
            neg = c.negative_part()
            if neg.coeffs:
                slices[j] = neg
    rep = LaurentSeries(f.ring, slices, None, f.var)
    return rep, hs.shift(-m), steps


def reduce_lsigma_mod_jsigma(f: LaurentSeries):
    """``(rep, witness, steps)`` for ``f`` in ``L(Sigma)``, factor by factor."""
    n = f.n_factors()
    if n == 1:
        return reduce_lsigma_core(f)
    runs = [reduce_lsigma_core(f.project(i)) for i in range(n)]
    rep = assemble_series(f.ring, [r[0] for r in runs], f.var)
    wit = assemble_series(f.ring, [r[1] for r in runs], f.var)
    return rep, wit, max(r[2] for r in runs)


# -- connected two-variable cores ---------------------------------------------

def _core_grj(f, s_prec, wt, ws):
    m, sigma, w = _grj_connected(f, s_prec, wt)
    return m, [("sigma_J", sigma)], w, {}


def _core_lgr(f, s_prec, wt, ws):
    m, sigma, w = _gr1d_connected(f, ws, wt)
    return m, [("sigma_L", sigma)], w, {}


def _big_parts(f, s_prec, wt, ws):
    mL, sigma_L, w1 = _gr1d_connected(f, ws, wt)
    w1inv = invert_series(w1, ws, wt)
    mJ, sigma_J, w2 = _grj_connected(w1inv, ws, wt)
    return mJ, sigma_J, mL, sigma_L, w2


def _core_big(f, s_prec, wt, ws):
    mJ, sigma_J, mL, sigma_L, w2 = _big_parts(f, s_prec, wt, ws)
    return (mJ, mL), [("sigma_J", sigma_J), ("sigma_L", sigma_L)], w2, {}


def _core_grl(f, s_prec, wt, ws):
    mJ, sigma_J, mL, sigma_L, w2 = _big_parts(f, s_prec, wt, ws)
    rep, h, steps = reduce_lsigma_core(sigma_L)
    # s^mL is a unit of R[[t]]((s)), so only the jet index is an invariant
    return mJ, [("sigma_J", sigma_J), ("sigma_minus", rep)], w2 * h, {"lsigma_steps": steps}


def _core_gr2(f, s_prec, wt, ws):
    mL, sigma_L, w1 = _gr1d_connected(f, ws, wt)
    u0 = w1.get(0)
    u0inv = invert_series(u0, wt)
    a, sigma_fib, _ = _gr1d_connected(u0inv, wt)
    witness = w1 * lift_inner(sigma_fib, f.var)
    return (a, mL), [("sigma_fib", sigma_fib), ("sigma_L", sigma_L)], witness, {}


_CORES = {"GRJ": _core_grj, "LGR": _core_lgr, "GRBIG": _core_big, "GRL": _core_grl, "GR2": _core_gr2}


# -- cutting results to their reported shape ---------------------------------

def _cut_component(name: str, c: LaurentSeries, t_prec: int, s_prec: int) -> LaurentSeries:
    shape = _SHAPES[name]
    if not c.is_iterated:
        if c.prec is not None:
            raise InsufficientPrecision(f"{name} should be exact")
        return c
    slices = {}
    for j, sl in c.coeffs.items():
        if shape == "inner":
            if sl.prec is not None and sl.prec < t_prec:
                raise InsufficientPrecision(f"{name} slice {j} known only below t^{sl.prec}")
            # exact slices (the leading 1, say) stay exact
            slices[j] = sl if sl.prec is None else sl.truncate(t_prec)
        else:
            if sl.prec is not None:
                raise InsufficientPrecision(f"{name} slice {j} should be exact")
            slices[j] = sl
    prec = c.prec
    if shape == "jet":
        if prec is None or prec < s_prec:
            raise InsufficientPrecision(f"{name} known only below s^{prec}")
        prec = s_prec
    elif prec is not None:
        raise InsufficientPrecision(f"{name} should be finite in s")
    out = LaurentSeries(c.ring, slices, prec, c.var)
    if shape == "inner":
        # slices that vanish below t^t_prec still carry their precision
        for j, sl in c.coeffs.items():
            if j not in out.coeffs:
                out.coeffs[j] = sl.truncate(t_prec)
    return out


def _headroom(comps, name: str) -> int:
    """Inner degrees lost when ``name`` is multiplied by the other components."""
    low = 0
    for n, c in comps:
        if n == name:
            continue
        for sl in (c.coeffs.values() if c.is_iterated else [c]):
            low += min([0] + list(sl.coeffs))
    return -low


def _slice_val(c: LaurentSeries):
    v = c.valuation()
    if v is None or (c.prec is not None and not c.coeffs):
        return None
    return v


def staircase(f: LaurentSeries, rep: LaurentSeries, witness: LaurentSeries, t_prec: int, s_prec: int):
    """Cut ``witness`` so each kept coefficient is visible in ``f * witness``.

    Returns ``(cut_witness, window, short)`` where ``short`` is true when the
    computed witness did not carry enough precision for the target shape.
    """
    b = min(f.coeffs)
    vb = _slice_val(f.coeffs[b])
    if vb is None:
        raise Indeterminate("lowest s-slice of the input is not known")
    vals = {k: _slice_val(c) for k, c in f.coeffs.items()}
    wlo = min(witness.coeffs, default=0)
    rep_s = rep.prec
    s_hi = s_prec if rep_s is None else min(s_prec, rep_s - b)
    short = False
    if witness.prec is not None and witness.prec < s_hi:
        short = True
        s_hi = witness.prec
    # backward pass: when a low input slice has a high valuation the bound
    # shrinks from one slice to the next, so early slices start with room
    want = {}
    for j in range(s_hi - 1, wlo - 1, -1):
        w = t_prec
        for r in range(1, s_hi - j):
            vk = vals.get(b + r)
            if vk is not None:
                w = max(w, want[j + r] - (vk - vb))
        want[j] = w
    P = {}
    for j in range(wlo, s_hi):
        bound = want[j]
        rs = rep.coeffs.get(j + b)
        if rs is not None and rs.prec is not None:
            bound = min(bound, rs.prec - vb)
        elif rs is None and rep.prec is None:
            pass
        for r in range(1, j - wlo + 1):
            vk = vals.get(b + r)
            if vk is None:
                if b + r in f.coeffs:
                    raise Indeterminate("input slice not known")
                continue
            bound = min(bound, P[j - r] + vk - vb)
        sl = witness.coeffs.get(j)
        if sl is not None and sl.prec is not None and sl.prec < bound:
            short = True
            bound = sl.prec
        if bound < 0:
            s_hi = j
            break
        P[j] = bound
    base = witness.ring.base
    slices = {}
    for j, p in P.items():
        sl = witness.coeffs.get(j)
        slices[j] = (sl if sl is not None else LaurentSeries(base, {}, None, "t")).truncate(p)
    cut = LaurentSeries(witness.ring, slices, s_hi, witness.var)
    window = Window(wlo + b, s_hi + b, tuple((j + b, p + vb) for j, p in sorted(P.items())))
    return cut, window, short


# -- two-variable driver ------------------------------------------------------

MAX_RETRIES = 6


def _inner_depth(f: LaurentSeries) -> int:
    """Inner degrees lost per outer step: lead unit degree minus lowest degree."""
    depth = 0
    for i in range(f.n_factors()):
        g = f.project(i)
        low = min(min(c.coeffs, default=0) for c in g.coeffs.values())
        lead = None
        for _, c in g.items():
            if any(x.is_unit() for x in c.coeffs.values()):
                lead = _first_unit_degree(c)
                break
        if lead is None:
            lead = max(max(c.coeffs, default=0) for c in g.coeffs.values())
        depth = max(depth, lead - low, -low)
    return depth


def _reduce2(f: LaurentSeries, quotient: str, s_prec: int, t_prec: int) -> NormalFormResult:
    if not f.is_iterated:
        raise ValueError(f"{quotient} expects a two-variable series")
    if f.prec is not None or any(c.prec is not None for c in f.coeffs.values()):
        raise ValueError(f"{quotient} expects an exact input")
    if not f.coeffs:
        raise NotInvertible("zero is not invertible")
    if s_prec < 1 or t_prec < 1:
        raise ValueError("precisions must be positive")
    core = _CORES[quotient]
    span_t = max((max(c.coeffs, default=0) - min(c.coeffs, default=0)) for c in f.coeffs.values())
    span_s = max(f.coeffs) - min(f.coeffs)
    nil = f.test_ring.nil_index
    # small seeds; the retry loop grows them when a cut comes up short.
    # Each outer step can cost `depth` inner degrees of precision.
    depth = _inner_depth(f)
    ws = s_prec + span_s + nil
    wt = t_prec + span_t + nil + 2 + depth * ws
    last = None
    for attempt in range(MAX_RETRIES):
        try:
            m, comps, witness, info = _per_factor(f, lambda g: core(g, s_prec, wt, ws))
            comps = [(n, _cut_component(n, c, t_prec + _headroom(comps, n), s_prec))
                     for n, c in comps]
            partial = NormalFormResult(GROUP, quotient, m, tuple(comps), witness,
                                       Window(0, 0, ()), f, t_prec, s_prec, info)
            cut, window, short = staircase(f, partial.representative, witness, t_prec, s_prec)
            if short:
                raise InsufficientPrecision("witness too short for the target window")
            info = dict(info, attempts=attempt + 1)
            return NormalFormResult(GROUP, quotient, m, tuple(comps), cut, window, f,
                                    t_prec, s_prec, info)
        except InsufficientPrecision as exc:
            last = exc
            # shortfalls are nearly always inner precision eaten by the outer
            # steps, so the inner seed grows faster than the outer one
            wt, ws = 2 * wt, ws + (ws + 1) // 2
    raise InsufficientPrecision(f"{quotient}: gave up after {MAX_RETRIES} precision doublings ({last})")


def reduce_grj(f, s_prec: int = 8, t_prec: int = 8) -> NormalFormResult:
    """Jet representative in ``R((t))[[s]]^* / R[[t]][[s]]^*``."""
    return _reduce2(f, "GRJ", s_prec, t_prec)


def reduce_lgr(f, s_prec: int = 8, t_prec: int = 8) -> NormalFormResult:
    """``s^m + s^{m-1} eps(s)`` with ``eps`` over ``R((t))``, modulo ``R((t))[[s]]^*``."""
    return _reduce2(f, "LGR", s_prec, t_prec)


def reduce_grbig(f, s_prec: int = 8, t_prec: int = 8) -> NormalFormResult:
    """Pair ``(sigma_J, sigma_L)`` modulo ``R[[t]][[s]]^*``."""
    return _reduce2(f, "GRBIG", s_prec, t_prec)


def reduce_grl(f, s_prec: int = 8, t_prec: int = 8) -> NormalFormResult:
    """Pair ``(sigma_J, sigma_minus)`` modulo ``R[[t]]((s))^*``."""
    return _reduce2(f, "GRL", s_prec, t_prec)


def reduce_gr2(f, s_prec: int = 8, t_prec: int = 8) -> NormalFormResult:
    """Pair ``(sigma_fib, sigma_L)`` modulo the units of ``R[[t]] + s R((t))[[s]]``."""
    return _reduce2(f, "GR2", s_prec, t_prec)


def reduce(f: LaurentSeries, quotient: str, s_prec: int = 8, t_prec: int = 8) -> NormalFormResult:
    tag = quotient_tag(quotient)
    if tag == "GR1D":
        if f.is_iterated:
            if set(f.coeffs) - {0} or f.prec is not None:
                raise ValueError("GR1D needs an input without s")
            f = f.get(0)
        return reduce_gr1d(f, t_prec)
    if not f.is_iterated:
        f = lift_inner(f)
    return _reduce2(f, tag, s_prec, t_prec)


# -- nested positive parts ------------------------------------------------------

@dataclass
class NestedBound:
    d: int
    Q: int
    M: int
    vanishes: bool
    first_vanishing_length: int | None
    sequences: int

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def nested_positive_bound(epsilons, exhaustive: bool = True) -> NestedBound:
    """``M = 3Q`` for the nested positive-part products of ``epsilons``.

    ``Q`` certifies nilpotency of the ideal generated by the ``eps_i`` and
    their coefficients in degrees ``[d, -d]``.  The vanishing check runs over
    all ``N^M`` index sequences by closing the set of length-``L`` products
    under ``v -> (eps_i * v)_+``, which is equivalent and exact.
    """
    eps = list(epsilons)
    if not eps:
        raise ValueError("need at least one epsilon")
    ring, var = eps[0].ring, eps[0].var
    for e in eps:
        if e.prec is not None:
            raise ValueError("epsilons must be exact")
        if any(not c.is_nilpotent() for c in e.coeffs.values()):
            raise NotNilpotent("epsilons must have nilpotent coefficients")
    d = min([0] + [min(e.coeffs) for e in eps if e.coeffs])
    gens = list(eps)
    for e in eps:
        for j, c in e.coeffs.items():
            if d <= j <= -d:
                gens.append(LaurentSeries(ring, {0: c}, None, var))
    cert = ideal_nilpotency(gens)
    Q = cert.index
    M = 3 * Q
    first = None
    vanishes = True
    if exhaustive:
        layer = {e.positive_part() for e in eps}
        length = 1
        if all(v.is_zero() for v in layer):
            first = 1
        while length < M:
            layer = {(e * v).positive_part() for e in eps for v in layer if not v.is_zero()}
            layer.discard(LaurentSeries(ring, {}, None, var))
            length += 1
            if first is None and not layer:
                first = length
        vanishes = not any(not v.is_zero() for v in layer)
    return NestedBound(d, Q, M, vanishes, first, len(eps) ** M)
