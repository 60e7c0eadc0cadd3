"""Exhaustive uniqueness checks for normal forms over finite test rings.

The Sigma-elements of a quotient whose support lies in a degree window are
enumerated and every pair is shown to lie in distinct cosets of the
subgroup ``H = Lambda^*`` (``Lambda`` one of the subrings ``R[[t]]``,
``JJ``, ``LJ``, ``JL``, ``O2``).

Two engines are available.

``literal``
    Materialises every Sigma-element over ``R``, inverts each one with the
    series kernel and tests ``sigma_1 * sigma_2^{-1}`` for membership in
    ``H`` pair by pair.  It also multiplies every Sigma-element by every
    unit of ``Lambda`` supported in the window and checks that the product
    is not another windowed Sigma-element.  Quadratic; meant for small
    windows.

``linear``
    For residue fields and for connected rings with square-zero nilradical
    (``F_2[e]/(e^2)`` and the like).  Pairs are decided in bulk, exactly:

    * reduce coefficients modulo the nilradical.  If the reductions of
      ``sigma_1`` and ``sigma_2`` lie in distinct cosets over the field,
      so do ``sigma_1`` and ``sigma_2``.  Over the field the rank-2
      valuation is multiplicative, so elements with different valuation
      signatures are separated at once.  Within one signature the
      windowed Sigma-set is a finite union of affine pieces, and
      ``{x in piece : x / sigma in Lambda}`` is the solution set of a
      linear system over ``F_p``.  Its size is counted; exactly one
      solution (``sigma`` itself) is required.
    * same reduction ``rho``: with ``N^2 = 0`` the quotient
      ``sigma_1 / sigma_2`` equals ``1 + (sigma_1 - sigma_2) / rho``.  It
      lies in ``H`` iff the nilpotent difference divided by ``rho`` lies in
      ``Lambda``.  The differences form a linear space, so one rank
      computation settles every pair in the fibre.

    Linear systems only use coordinates that are known exactly, so the
    counted solution set can only be too large.  A count of exactly one is
    therefore a proof.  The subgroup sweep is implied: ``sigma * q`` for a
    unit ``q`` is a point of the solution set, for every unit rather than
    only windowed ones.

``DOUBLELOOP_ENUM_CAP`` bounds the amount of work either engine accepts.
"""

from __future__ import annotations

import itertools
import os
import time
from dataclasses import dataclass, field

from .parse import format_series
from .ring import TestRing
from .series import Indeterminate, LaurentRing, LaurentSeries, invert_series, is_subring_unit, membership

ENV_CAP = "DOUBLELOOP_ENUM_CAP"
DEFAULT_CAP = 5_000_000


class WindowTooLarge(ValueError):
    pass


def enumeration_cap() -> int:
    raw = os.environ.get(ENV_CAP)
    if raw is None:
        return DEFAULT_CAP
    try:
        return int(raw)
    except ValueError as exc:
        raise ValueError(f"{ENV_CAP} must be an integer, got {raw!r}") from exc


@dataclass
class UniquenessReport:
    ring: str
    quotient: str
    window: tuple  # ((inner_lo, inner_hi), (outer_lo, outer_hi)), inclusive
    method: str
    sigma_count: int = 0
    pairs_covered: int = 0
    systems_solved: int = 0
    subgroup_units_checked: int = 0
    violations: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.violations

    def as_dict(self) -> dict:
        d = dict(self.__dict__)
        d["ok"] = self.ok
        d["window"] = [list(w) for w in self.window]
        return d


# -- Sigma families ----------------------------------------------------------------
# Elements are finite dicts {(outer, inner): coefficient}.  A family value is
# base + (field-free positions, any scalar) + (nil-free positions, nilpotent).

@dataclass(frozen=True)
class _Piece:
    kind: str
    param: int
    base: tuple  # ((pos, 1),)
    field_free: tuple
    nil_free: tuple


def _fam_G(I, J, slack):
    for m in I:
        yield _Piece("G", m, (((0, m), 1),), (), tuple((0, i) for i in I if i < m + slack and i != m))


def _fam_J(I, J, slack):
    for m in I:
        free = tuple((j, i) for j in J if j >= 1 for i in I if i < m + slack)
        nil0 = tuple((0, i) for i in I if i < m)
        yield _Piece("J", m, (((0, m), 1),), free, nil0 + free)


def _fam_L(I, J, slack):
    for n in J:
        yield _Piece("L", n, (((n, 0), 1),), (), tuple((j, i) for j in J if j < n for i in I))


def _fam_minus(I, J, slack):
    yield _Piece("M", 0, (((0, 0), 1),), (), tuple((j, i) for j in J if j < 0 for i in I if i < 0))


# quotient -> (component families, subring Lambda)
FAMILIES = {
    "GR1D": ((_fam_G,), "J1"),
    "GRJ": ((_fam_J,), "JJ"),
    "LGR": ((_fam_L,), "LJ"),
    "GRBIG": ((_fam_J, _fam_L), "JJ"),
    "GRL": ((_fam_J, _fam_minus), "JL"),
    "GR2": ((_fam_G, _fam_L), "O2"),
}


def _complement(tag: str):
    """Predicate on (outer, inner): coordinate outside ``Lambda``."""
    if tag == "J1":
        return lambda k, d: d < 0 or k != 0
    if tag == "JJ":
        return lambda k, d: k < 0 or d < 0
    if tag == "JL":
        return lambda k, d: d < 0
    if tag == "LJ":
        return lambda k, d: k < 0
    if tag == "O2":
        return lambda k, d: k < 0 or (k == 0 and d < 0)
    raise ValueError(tag)


def _signature(tag: str, val: tuple):
    sv, tv = val
    if tag in ("JJ", "O2"):
        return (sv, tv)
    if tag in ("JL", "J1"):
        return (tv,)
    return (sv,)


# -- field-level arithmetic ---------------------------------------------------------
# 1D truncated series: (dict deg -> c, prec or None).  2D: (dict k -> 1D, oprec).

def _val1(a):
    d, prec = a
    if d:
        return min(d)
    return prec  # None for exact zero


def _mul1(a, b, p):
    da, pa = a
    db, pb = b
    va, vb = _val1(a), _val1(b)
    bounds = []
    if pa is not None and vb is not None:
        bounds.append(pa + vb)
    if pb is not None and va is not None:
        bounds.append(pb + va)
    prec = min(bounds) if bounds else None
    if (not da and pa is None) or (not db and pb is None):
        return {}, None
    out = {}
    for i, x in da.items():
        for j, y in db.items():
            k = i + j
            if prec is not None and k >= prec:
                continue
            out[k] = (out.get(k, 0) + x * y) % p
    return {k: c for k, c in out.items() if c}, prec


def _add1(a, b, p):
    da, pa = a
    db, pb = b
    prec = pa if pb is None else pb if pa is None else min(pa, pb)
    out = dict(da)
    for k, c in db.items():
        out[k] = (out.get(k, 0) + c) % p
    return {k: c for k, c in out.items() if c and (prec is None or k < prec)}, prec


def _inv_power(u: dict, n: int, p: int) -> dict:
    """First ``n`` coefficients of ``1/u`` for a power series with unit constant term."""
    c0 = pow(u[0], -1, p)
    b = [c0]
    for k in range(1, n):
        acc = 0
        for i in range(1, k + 1):
            ui = u.get(i)
            if ui:
                acc += ui * b[k - i]
        b.append((-acc * c0) % p)
    return {k: c for k, c in enumerate(b) if c}


def _slices(x: dict) -> dict:
    out = {}
    for (k, d), c in x.items():
        out.setdefault(k, {})[d] = c
    return out


def _valuation(x: dict) -> tuple:
    sv = min(k for k, _ in x)
    tv = min(d for k, d in x if k == sv)
    return sv, tv


def _inverse2(x: dict, K: int, T: int, p: int):
    """``x^{-1}`` with ``K`` outer slices, inner precision ``T`` past its valuation."""
    sl = _slices(x)
    sv, v = _valuation(x)
    a0 = sl[sv]
    u = {d - v: c for d, c in a0.items()}
    b0 = ({d - v: c for d, c in _inv_power(u, T, p).items()}, T - v)
    B = [b0]
    for k in range(1, K):
        acc = ({}, None)
        for i in range(1, k + 1):
            ai = sl.get(sv + i)
            if ai:
                acc = _add1(acc, _mul1((ai, None), B[k - i], p), p)
        term = _mul1(b0, acc, p)
        B.append(({d: (-c) % p for d, c in term[0].items()}, term[1]))
    return {-sv + k: b for k, b in enumerate(B)}, -sv + K


def _mul_fin_inv(x: dict, inv, p: int):
    """Finite ``x`` times a truncated 2D series; returns (coords, known)."""
    islices, ioprec = inv
    xs = _slices(x)
    xlo = min(xs)
    oprec = ioprec + xlo
    out = {}
    for k in range(min(islices) + xlo, oprec):
        acc = ({}, None)
        for j, xj in xs.items():
            b = islices.get(k - j)
            if b is None:
                continue
            acc = _add1(acc, _mul1((xj, None), b, p), p)
        out[k] = acc
    return out, oprec


def _complement_vector(prod, comp):
    """Sparse vector of complement coordinates plus the known region."""
    slices, oprec = prod
    vec = {}
    known = {}
    for k, (d, prec) in slices.items():
        known[k] = prec
        for deg, c in d.items():
            if comp(k, deg):
                vec[(k, deg)] = c
    return vec, known, oprec


def _restrict(vectors):
    """Keep only coordinates known for every vector.

    Slices missing below a vector's outer bound are exact zeros.
    """
    oprec = min(v[2] for v in vectors)
    bound = {}
    for _, known, _ in vectors:
        for k, prec in known.items():
            if prec is not None:
                bound[k] = prec if bound.get(k) is None else min(bound[k], prec)
    out = []
    for vec, _, _ in vectors:
        keep = {}
        for (k, d), c in vec.items():
            if k >= oprec or (bound.get(k) is not None and d >= bound[k]):
                continue
            keep[(k, d)] = c
        out.append(keep)
    return out


def _reduce(vec: dict, basis: dict, p: int) -> dict:
    vec = dict(vec)
    while vec:
        k = min(vec)
        b = basis.get(k)
        if b is None:
            return vec
        c = vec[k]
        for key, val in b.items():
            nv = (vec.get(key, 0) - c * val) % p
            if nv:
                vec[key] = nv
            else:
                vec.pop(key, None)
    return vec


def _add_basis(vec: dict, basis: dict, p: int) -> bool:
    r = _reduce(vec, basis, p)
    if not r:
        return False
    k = min(r)
    inv = pow(r[k], -1, p)
    basis[k] = {key: (val * inv) % p for key, val in r.items()}
    return True


def _count_solutions(dirs: list, target: dict, p: int) -> int:
    """Number of ``x`` in ``F_p^n`` with ``sum x_k dirs_k == target``."""
    basis = {}
    rank = sum(_add_basis(v, basis, p) for v in dirs)
    if _reduce(target, basis, p):
        return 0
    return p ** (len(dirs) - rank)


def _rank(dirs: list, p: int) -> int:
    basis = {}
    return sum(_add_basis(v, basis, p) for v in dirs)


def _mul_fin(a: dict, b: dict, p: int) -> dict:
    out = {}
    for (k1, d1), x in a.items():
        for (k2, d2), y in b.items():
            key = (k1 + k2, d1 + d2)
            out[key] = (out.get(key, 0) + x * y) % p
    return {k: c for k, c in out.items() if c}


# -- helpers over the ring ------------------------------------------------------------

def _window(window):
    (ilo, ihi), (jlo, jhi) = window
    return list(range(ilo, ihi + 1)), list(range(jlo, jhi + 1))


def _pieces(quotient, window, slack):
    fams, tag = FAMILIES[quotient]
    I, J = _window(window)
    return [list(fam(I, J, slack)) for fam in fams], tag


def _structured_ok(ring: TestRing) -> bool:
    return ring.is_connected and ring.field.p > 0 and ring.nil_index <= 2


def _fmt_dict(x: dict, ring: TestRing, coeff=None) -> str:
    """Render a field-level element as a series expression."""
    base = LaurentRing(ring, "t")
    coeff = coeff or (lambda c: ring.scalar(c))
    slices = {}
    for (k, d), c in x.items():
        slices.setdefault(k, {})[d] = coeff(c)
    f = LaurentSeries(base, {k: LaurentSeries(ring, v, None, "t") for k, v in slices.items()}, None, "s")
    return format_series(f)


def _field_values(piece: _Piece, p: int):
    base = dict(piece.base)
    for vals in itertools.product(range(p), repeat=len(piece.field_free)):
        x = dict(base)
        for pos, c in zip(piece.field_free, vals):
            if c:
                x[pos] = c
        yield x


# -- linear engine -------------------------------------------------------------------

def _linear(ring, quotient, window, cap, slack, report):
    p = ring.field.p
    r = ring.dim - 1  # nilpotent directions
    families, tag = _pieces(quotient, window, slack)
    comp = _complement(tag)
    (ilo, ihi), (jlo, jhi) = window
    K0 = (jhi - jlo) + 4
    T0 = (ihi - ilo + 3) * (K0 + 1)

    # field-level elements: one per (piece choice, field values)
    combos = list(itertools.product(*families))
    n_field = 0
    for combo in combos:
        free = [len(pc.field_free) for pc in combo]
        if sum(1 for f in free if f) > 1:
            raise ValueError("at most one component may carry free field coefficients")
        n_field += p ** sum(free)
    if n_field * max(1, len(combos)) > cap:
        raise WindowTooLarge(f"{n_field} field-level elements exceed the cap {cap}")

    elements = []  # (rho, component values, combo)
    for combo in combos:
        for values in itertools.product(*(list(_field_values(pc, p)) for pc in combo)):
            rho = values[0]
            for v in values[1:]:
                rho = _mul_fin(rho, v, p)
            elements.append((rho, values, combo))

    buckets = {}
    for idx, (rho, _, combo) in enumerate(elements):
        buckets.setdefault(_signature(tag, _valuation(rho)), {}).setdefault(combo, []).append(idx)

    inv_cache = {}

    def inverse(x, K, T):
        key = (frozenset(x.items()), K, T)
        if key not in inv_cache:
            inv_cache[key] = _inverse2(x, K, T, p)
        return inv_cache[key]

    total_sigma = 0
    for rho, values, combo in elements:
        sig = _signature(tag, _valuation(rho))
        # field level: every Sigma-element x with x / rho in Lambda
        count = None
        for K, T in ((K0, T0), (2 * K0, 2 * T0)):
            inv = inverse(rho, K, T)
            count = 0
            for other in buckets[sig]:
                base_parts = [dict(pc.base) for pc in other]
                base = base_parts[0]
                for bp in base_parts[1:]:
                    base = _mul_fin(base, bp, p)
                dirs = []
                for ci, pc in enumerate(other):
                    rest = {(0, 0): 1}
                    for cj, bp in enumerate(base_parts):
                        if cj != ci:
                            rest = _mul_fin(rest, bp, p)
                    for pos in pc.field_free:
                        dirs.append(_mul_fin({pos: 1}, rest, p))
                vecs = [_complement_vector(_mul_fin_inv(x, inv, p), comp) for x in [base] + dirs]
                vecs = _restrict(vecs)
                target = {k: (-c) % p for k, c in vecs[0].items()}
                count += _count_solutions(vecs[1:], target, p)
                report.systems_solved += 1
            if count == 1:
                break
        if count != 1:
            report.violations.append(
                f"field level: {count} Sigma-elements in the coset of {_fmt_dict(rho, ring)}")
        # nilpotent fibre
        n_params = sum(len(pc.nil_free) for pc in combo)
        total_sigma += (p ** r) ** n_params if r else 1
        if r and n_params:
            ok = False
            for K, T in ((K0, T0), (2 * K0, 2 * T0)):
                vecs = []
                for pc, val in zip(combo, values):
                    inv_c = inverse(val, K, T)
                    for pos in pc.nil_free:
                        vecs.append(_complement_vector(_mul_fin_inv({pos: 1}, inv_c, p), comp))
                vecs = _restrict(vecs)
                report.systems_solved += 1
                if _rank(vecs, p) == n_params:
                    ok = True
                    break
            if not ok:
                report.violations.append(
                    f"nilpotent fibre over {_fmt_dict(rho, ring)}: distinct elements share a coset")
    report.sigma_count = total_sigma
    report.pairs_covered = total_sigma * (total_sigma - 1) // 2


# -- literal engine -------------------------------------------------------------------

def _ring_values(ring: TestRing, nilpotent: bool):
    return [x for x in ring.elements() if (x.is_nilpotent() or not nilpotent)]


def _literal_count(ring, families) -> int:
    """Number of elements :func:`_literal_elements` would build."""
    n_all, n_nil = len(_ring_values(ring, False)), len(_ring_values(ring, True))
    total = 1
    for fam in families:
        size = 0
        for pc in fam:
            extra = [q for q in pc.nil_free if q not in pc.field_free]
            size += n_all ** len(pc.field_free) * n_nil ** len(extra)
        total *= size
    return total


def _literal_elements(ring, families):
    R_all = _ring_values(ring, False)
    R_nil = _ring_values(ring, True)
    comps = []
    for fam in families:
        vals = []
        for pc in fam:
            positions = list(pc.field_free) + [q for q in pc.nil_free if q not in pc.field_free]
            choices = [R_all if q in pc.field_free else R_nil for q in positions]
            for cs in itertools.product(*choices):
                x = {pos: ring.one() for pos, _ in pc.base}
                for q, c in zip(positions, cs):
                    if not c.is_zero():
                        x[q] = x.get(q, ring.zero()) + c
                vals.append(x)
        comps.append(vals)
    return comps


def _to_series(x: dict, ring, one_var: bool):
    if one_var:
        return LaurentSeries(ring, {d: c for (k, d), c in x.items()}, None, "t")
    base = LaurentRing(ring, "t")
    sl = {}
    for (k, d), c in x.items():
        sl.setdefault(k, {})[d] = c
    return LaurentSeries(base, {k: LaurentSeries(ring, v, None, "t") for k, v in sl.items()}, None, "s")


def _key(f: LaurentSeries):
    return format_series(f)


def _in_H(x: LaurentSeries, tag: str) -> str:
    """'yes', 'no' or 'unknown' for ``x`` in the unit group of ``Lambda``."""
    try:
        if tag == "J1":
            if any(d < 0 for d in x.coeffs):
                return "no"
            if x.prec is not None and x.prec <= 0:
                return "unknown"
            return "yes" if x.get(0).is_unit() else "no"
        if not membership(x, tag):
            return "no"
        return "yes" if is_subring_unit(x, tag) else "no"
    except Indeterminate:
        return "unknown"


def _unit_window(ring, tag, window):
    (ilo, ihi), (jlo, jhi) = window
    I, J = list(range(ilo, ihi + 1)), list(range(jlo, jhi + 1))
    if tag == "J1":
        return [(0, i) for i in I if i >= 0]
    if tag == "JJ":
        return [(j, i) for j in J if j >= 0 for i in I if i >= 0]
    if tag == "JL":
        return [(j, i) for j in J for i in I if i >= 0]
    if tag == "LJ":
        return [(j, i) for j in J if j >= 0 for i in I]
    return [(j, i) for j in J if j >= 0 for i in I if j > 0 or i >= 0]


def _literal(ring, quotient, window, cap, slack, report):
    families, tag = _pieces(quotient, window, slack)
    one_var = quotient == "GR1D"
    # count before building anything so an oversized window fails fast
    n = _literal_count(ring, families)
    positions = _unit_window(ring, tag, window)
    n_units = len(list(ring.elements())) ** len(positions)
    if n * n + n * n_units > cap:
        raise WindowTooLarge(f"{n} Sigma-elements and {n_units} unit candidates exceed the cap {cap}")
    comp_vals = _literal_elements(ring, families)
    elements = []
    for combo in itertools.product(*comp_vals):
        rho = combo[0]
        for v in combo[1:]:
            rho = _dict_mul(rho, v, ring)
        elements.append((rho, combo))
    (ilo, ihi), (jlo, jhi) = window
    S = 3 * (jhi - jlo + 2)
    T = 3 * (ihi - ilo + 2) * (jhi - jlo + 2)
    series = [_to_series(rho, ring, one_var) for rho, _ in elements]
    keys = {}
    for i, f in enumerate(series):
        k = _key(f)
        if k in keys:
            report.violations.append(f"two component tuples give the same product {k}")
        keys[k] = i
    invs = [invert_series(f, T) if one_var else invert_series(f, S, T) for f in series]
    for a in range(len(series)):
        for b in range(a + 1, len(series)):
            state = _in_H(series[a] * invs[b], tag)
            report.pairs_covered += 1
            if state != "no":
                report.violations.append(
                    f"{_key(series[a])} and {_key(series[b])}: quotient in H is {state}")
    # subgroup sweep: sigma * q inside the windowed Sigma-set forces q = 1
    all_vals = list(ring.elements())
    for cs in itertools.product(all_vals, repeat=len(positions)):
        q = {pos: c for pos, c in zip(positions, cs) if not c.is_zero()}
        if not q:
            continue
        qs = _to_series(q, ring, one_var)
        if _in_H(qs, tag) != "yes":
            continue
        is_one = q == {(0, 0): ring.one()}
        report.subgroup_units_checked += 1
        if is_one:
            continue
        for f in series:
            hit = keys.get(_key(f * qs))
            if hit is not None:
                report.violations.append(f"{_key(f)} * ({_key(qs)}) is the Sigma-element {_key(series[hit])}")
    report.sigma_count = len(series)
    report.systems_solved = 0


def _dict_mul(a: dict, b: dict, ring) -> dict:
    out = {}
    for (k1, d1), x in a.items():
        for (k2, d2), y in b.items():
            key = (k1 + k2, d1 + d2)
            out[key] = out.get(key, ring.zero()) + x * y
    return {k: c for k, c in out.items() if not c.is_zero()}


# -- entry point -------------------------------------------------------------------------

def brute_force_uniqueness(ring: TestRing, quotient: str, window=((-2, 2), (-2, 2)),
                           method: str = "auto", cap: int | None = None,
                           slack: int = 0) -> UniquenessReport:
    """Check that distinct windowed Sigma-elements lie in distinct cosets.

    ``window`` is ``((inner_lo, inner_hi), (outer_lo, outer_hi))``, both
    inclusive.  ``slack`` widens the degree bounds of the one-variable and
    jet families; it exists to show the check can fail.
    """
    from .gm import quotient_tag

    quotient = quotient_tag(quotient)
    if ring.field.p == 0:
        raise ValueError("brute force needs a finite base field")
    cap = enumeration_cap() if cap is None else cap
    if method == "auto":
        method = "linear" if _structured_ok(ring) else "literal"
    report = UniquenessReport(ring.describe(), quotient, tuple(tuple(w) for w in window), method)
    start = time.perf_counter()
    if method == "linear":
        if not _structured_ok(ring):
            raise ValueError("the linear engine needs a connected ring with square-zero nilradical")
        _linear(ring, quotient, window, cap, slack, report)
    elif method == "literal":
        _literal(ring, quotient, window, cap, slack, report)
    else:
        raise ValueError(f"unknown method {method!r}")
    report.seconds = time.perf_counter() - start
    return report
