"""Independent checks of reduction results.

:func:`verify_reduction` recomputes ``f * witness`` and compares it with the
representative on the result's window, then checks that the witness is a
unit of the subgroup and that every component has the advertised shape.
Nothing here calls the reduction algorithms.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

from .gm import COMPONENTS, NormalFormResult, Window, reduce
from .series import Indeterminate, LaurentSeries, is_subring_unit, lift_inner, membership

VERIFIED, FAILED, INDETERMINATE = "verified", "failed", "indeterminate"


@dataclass(frozen=True)
class VerificationWindow:
    inner_range: tuple  # (lowest inner degree compared, highest bound used)
    outer_range: tuple  # (outer_lo, outer_hi)
    verdict: str
    checks: tuple  # ((name, status, detail), ...)
    window: Window | None = None

    @property
    def verified(self) -> bool:
        return self.verdict == VERIFIED

    def as_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "inner_range": list(self.inner_range),
            "outer_range": list(self.outer_range),
            "checks": [{"name": n, "status": s, "detail": d} for n, s, d in self.checks],
        }


class _Log:
    def __init__(self):
        self.items = []

    def add(self, name, status, detail=""):
        self.items.append((name, status, detail))

    def verdict(self):
        states = {s for _, s, _ in self.items}
        if FAILED in states:
            return FAILED
        if INDETERMINATE in states:
            return INDETERMINATE
        return VERIFIED


# -- the product identity -------------------------------------------------------

def _slices(x: LaurentSeries) -> dict:
    return x.coeffs if x.is_iterated else {0: x}


def _outer_known(x: LaurentSeries, j: int) -> bool:
    if not x.is_iterated:
        return j == 0 or x.prec is None
    return x.prec is None or j < x.prec


def _compare_identity(f, result: NormalFormResult, log: _Log):
    w = result.witness
    rep = result.representative
    if result.quotient != "GR1D":
        f = f if f.is_iterated else lift_inner(f)
        rep = rep if rep.is_iterated else lift_inner(rep)
    prod = f * w
    win = result.window
    ps, rs = _slices(prod), _slices(rep)
    lows = [j for j in list(ps) + list(rs) if j < win.outer_lo]
    inner_lo = None
    bad, unknown = [], []
    # below the window both sides must vanish wherever they are known
    for j in sorted(set(lows)):
        for side, sl in (("product", ps.get(j)), ("representative", rs.get(j))):
            if sl is not None and sl.coeffs:
                bad.append(f"{side} has terms in s^{j} below the window")
    for j, hi in win.inner_hi:
        if not (_outer_known(prod, j) and _outer_known(rep, j)):
            unknown.append(f"s^{j} unknown")
            continue
        a, b = ps.get(j), rs.get(j)
        for side, sl in (("product", a), ("representative", b)):
            if sl is not None and sl.prec is not None and sl.prec < hi:
                unknown.append(f"{side} slice s^{j} known below t^{sl.prec} < t^{hi}")
        degs = set()
        for sl in (a, b):
            if sl is not None:
                degs.update(d for d in sl.coeffs if d < hi)
        if degs:
            lo = min(degs)
            inner_lo = lo if inner_lo is None else min(inner_lo, lo)
        for d in sorted(degs):
            x = a.get(d) if a is not None else None
            y = b.get(d) if b is not None else None
            known_x = a is None or a.prec is None or d < a.prec
            known_y = b is None or b.prec is None or d < b.prec
            if not (known_x and known_y):
                continue
            zx = x is None or x.is_zero()
            zy = y is None or y.is_zero()
            if zx and zy:
                continue
            if zx != zy or x != y:
                bad.append(f"coefficient of t^{d}*s^{j} differs")
                break
    if bad:
        log.add("identity", FAILED, "; ".join(bad[:3]))
    elif unknown:
        log.add("identity", INDETERMINATE, "; ".join(unknown[:3]))
    else:
        log.add("identity", VERIFIED, f"f*w = representative on {len(win.inner_hi)} outer degrees")
    return inner_lo


# -- witness ----------------------------------------------------------------------

def _check_witness(result: NormalFormResult, log: _Log):
    w = result.witness
    tag = result.subgroup
    if result.quotient == "GR1D":
        if any(d < 0 for d in w.coeffs):
            log.add("witness", FAILED, "witness has negative degrees")
            return
        unit = all(w.project(i).get(0).is_unit() for i in range(w.n_factors()))
        if w.prec is not None and w.prec <= 0:
            log.add("witness", INDETERMINATE, "constant term of the witness unknown")
        elif not unit:
            log.add("witness", FAILED, "witness is not a unit of R[[t]]")
        else:
            log.add("witness", VERIFIED, "unit of R[[t]]")
        return
    try:
        if not membership(w, tag):
            log.add("witness", FAILED, f"witness not in {tag}")
            return
        if not is_subring_unit(w, tag):
            log.add("witness", FAILED, f"witness not a unit of {tag}")
            return
    except Indeterminate as exc:
        log.add("witness", INDETERMINATE, str(exc))
        return
    log.add("witness", VERIFIED, f"unit of {tag} on its known region")


# -- shapes of components ----------------------------------------------------------

def _nil(c) -> bool:
    return c.is_nilpotent()


def check_sigma1(sigma: LaurentSeries, m: int) -> str | None:
    """Problem with ``t^m + (nilpotent lower terms)``, or None."""
    if sigma.prec is not None:
        return "not exact"
    if any(d > m for d in sigma.coeffs):
        return "terms above the index"
    if sigma.get(m) != 1:
        return "leading coefficient is not 1"
    for d, c in sigma.coeffs.items():
        if d < m and not _nil(c):
            return f"non-nilpotent coefficient in degree {d}"
    return None


def check_jet(sigma: LaurentSeries, m: int) -> str | None:
    if any(j < 0 for j in sigma.coeffs):
        return "negative s-degrees"
    if sigma.prec is not None and sigma.prec < 1:
        return "slice s^0 unknown"
    problem = check_sigma1(sigma.get(0), m)
    if problem:
        return f"s^0: {problem}"
    for j, sl in sigma.coeffs.items():
        if j == 0:
            continue
        if sl.prec is not None:
            return f"slice s^{j} not exact"
        if any(d >= m for d in sl.coeffs):
            return f"slice s^{j} reaches t^{m}"
    return None


def check_loop_sigma(sigma: LaurentSeries, m: int) -> str | None:
    if sigma.prec is not None:
        return "outer truncation"
    # slices with no known terms (zero on the window) do not count
    if any(j > m and sl.coeffs for j, sl in sigma.coeffs.items()):
        return "terms above s^m"
    top = sigma.get(m)
    if (top - 1).coeffs:
        return "leading slice is not 1"
    for j, sl in sigma.coeffs.items():
        if j < m and any(not _nil(c) for c in sl.coeffs.values()):
            return f"non-nilpotent coefficient in s^{j}"
    return None


def check_minus(rho: LaurentSeries) -> str | None:
    if rho.prec is not None:
        return "outer truncation"
    if any(j > 0 and sl.coeffs for j, sl in rho.coeffs.items()):
        return "positive s-degrees"
    if (rho.get(0) - 1).coeffs or rho.get(0).prec is not None:
        return "s^0 slice is not 1"
    for j, sl in rho.coeffs.items():
        if j == 0:
            continue
        if sl.prec is not None:
            return f"slice s^{j} not exact"
        if any(d >= 0 for d in sl.coeffs):
            return f"slice s^{j} has nonnegative t-degrees"
        if any(not _nil(c) for c in sl.coeffs.values()):
            return f"non-nilpotent coefficient in s^{j}"
    return None


def _index_map(quotient: str, m) -> dict:
    names = COMPONENTS[quotient]
    if quotient in ("GR1D", "GRJ", "LGR"):
        return {names[0]: m}
    if quotient == "GRL":
        return {"sigma_J": m, "sigma_minus": None}
    return {names[0]: m[0], names[1]: m[1]}


_CHECKS = {
    "sigma": check_sigma1,
    "sigma_fib": check_sigma1,
    "sigma_J": check_jet,
    "sigma_L": check_loop_sigma,
}


def _check_shapes(result: NormalFormResult, log: _Log):
    n = result.source.n_factors()
    problems = []
    for i in range(n):
        m = result.m if n == 1 else result.m[i]
        idx = _index_map(result.quotient, m)
        for name, comp in result.components:
            c = comp if n == 1 else comp.project(i)
            if name == "sigma_minus":
                p = check_minus(c)
            else:
                p = _CHECKS[name](c, idx[name])
            if p:
                problems.append(f"{name}" + (f" (factor {i})" if n > 1 else "") + f": {p}")
    if problems:
        log.add("shape", FAILED, "; ".join(problems))
    else:
        log.add("shape", VERIFIED, "components have the normal-form shape")


def verify_reduction(f: LaurentSeries, result: NormalFormResult) -> VerificationWindow:
    """Exact check of ``result`` against ``f``; never raises on bad data."""
    log = _Log()
    try:
        inner_lo = _compare_identity(f, result, log)
    except Indeterminate as exc:
        log.add("identity", INDETERMINATE, str(exc))
        inner_lo = None
    _check_witness(result, log)
    _check_shapes(result, log)
    win = result.window
    hi = max((h for _, h in win.inner_hi), default=0)
    return VerificationWindow((inner_lo if inner_lo is not None else 0, hi),
                              (win.outer_lo, win.outer_hi), log.verdict(), tuple(log.items), win)


# -- tampering ----------------------------------------------------------------------

def witness_positions(result: NormalFormResult) -> list:
    """Every ``(outer, inner)`` position whose witness coefficient is reported."""
    w = result.witness
    out = []
    for j, sl in sorted(_slices(w).items()):
        lo = min(list(sl.coeffs) + [0])
        hi = sl.prec if sl.prec is not None else max(list(sl.coeffs) + [0]) + 1
        out.extend((j, d) for d in range(lo, hi))
    if w.is_iterated and w.prec is not None:
        # reported slices that happen to be missing are known to be zero
        present = set(w.coeffs)
        for j in range(min(present, default=0), w.prec):
            if j not in present:
                out.append((j, 0))
    return sorted(set(out))


def tamper_witness(result: NormalFormResult, position: tuple, delta=1) -> NormalFormResult:
    """Copy of ``result`` with ``delta`` added to one witness coefficient."""
    j, d = position
    w = result.witness
    if w.is_iterated:
        base = w.ring.base
        bump = LaurentSeries(base, {d: base(delta)}, None, "t")
        new = LaurentSeries(w.ring, dict(w.coeffs), w.prec, w.var)
        sl = new.coeffs.get(j, LaurentSeries(base, {}, None, "t"))
        new.coeffs[j] = sl + bump if sl.prec is None else (sl + bump).truncate(sl.prec)
    else:
        ring = w.ring
        bump = LaurentSeries(ring, {d: ring(delta)}, None, w.var)
        new = w + bump
    return dataclasses.replace(result, witness=new)


# -- coset comparison --------------------------------------------------------------

def coset_equal(f: LaurentSeries, g: LaurentSeries, quotient: str, s_prec: int = 8, t_prec: int = 8) -> bool:
    """Same class in the quotient, judged on the common window of both reductions.

    A ``True`` answer is only as strong as the window: representatives of the
    stream-valued quotients are infinite objects.
    """
    a = reduce(f, quotient, s_prec, t_prec)
    b = reduce(g, quotient, s_prec, t_prec)
    return a.same_class(b)


# -- additive splits and towers -----------------------------------------------------

def _support(x: LaurentSeries):
    if not x.is_iterated:
        return [(0, i) for i in x.coeffs]
    return [(j, i) for j, sl in x.coeffs.items() for i in sl.coeffs]


def _ranges(*xs) -> tuple:
    pts = [p for x in xs for p in _support(x)]
    if not pts:
        return (0, 0), (0, 0)
    return (min(i for _, i in pts), max(i for _, i in pts)), (min(j for j, _ in pts), max(j for j, _ in pts))


def verify_split(f: LaurentSeries, split) -> VerificationWindow:
    """Exact check of an additive split: sum, complement support, subgroup membership."""
    from .ga import in_complement
    log = _Log()
    f2 = f if f.is_iterated or split.quotient == "GR1D" else lift_inner(f)
    total = split.representative + split.subgroup_part
    if total == f2:
        log.add("sum", VERIFIED, "representative + subgroup part = input")
    else:
        log.add("sum", FAILED, "representative + subgroup part differs from the input")
    q = split.quotient
    if q == "GR1D":
        off = [(0, i) for i in split.representative.coeffs if i >= 0]
    else:
        off = [(j, i) for j, i in _support(split.representative) if not in_complement(q, j, i)]
    if off:
        log.add("complement", FAILED, f"representative has subgroup monomials, e.g. s^{off[0][0]} t^{off[0][1]}")
    else:
        log.add("complement", VERIFIED, "representative lies in the complement")
    try:
        if q == "GR1D":
            ok = all(i >= 0 for i in split.subgroup_part.coeffs)
        else:
            ok = membership(split.subgroup_part, split.subgroup)
        log.add("subgroup", VERIFIED if ok else FAILED, f"subgroup part in {split.subgroup}")
    except Indeterminate as exc:
        log.add("subgroup", INDETERMINATE, str(exc))
    inner, outer = _ranges(split.representative, split.subgroup_part)
    return VerificationWindow(inner, outer, log.verdict(), tuple(log.items))


def verify_tower(g, red) -> VerificationWindow:
    """Check ``g * q == representative`` where known and subgroup membership of ``q``.

    Torus layers are additionally checked by :func:`verify_reduction`.
    """
    from .tower import _agree, _torus, subgroup_membership, tower_mul
    log = _Log()
    s_prec = max((r.s_prec or 1) for r in red.torus_results()) if red.torus_results() else 8
    t_prec = max(r.t_prec for r in red.torus_results()) if red.torus_results() else 8
    tq, tf = _torus(red.q), _torus(red.factor)
    try:
        # the torus parts of q and factor must be mutually inverse before either
        # is used as the other's inverse below
        one = g.coords[0].ring.one()
        if all(_agree(tq[n] * tf[n], LaurentSeries(g.coords[0].ring, {0: one}, None, "s")) for n in tq):
            log.add("inverse", VERIFIED, "torus parts of q and factor are inverse")
        else:
            log.add("inverse", FAILED, "q and factor are not inverse on the torus")
        prod = tower_mul(g, red.q, s_prec, t_prec, inverses=tf)
        if prod.agrees_with(red.representative):
            log.add("identity", VERIFIED, "g * q = representative on the known region")
        else:
            log.add("identity", FAILED, "g * q differs from the representative")
        back = tower_mul(red.representative, red.factor, s_prec, t_prec, inverses=tq)
        if back.agrees_with(g):
            log.add("factorisation", VERIFIED, "g = representative * factor on the known region")
        else:
            log.add("factorisation", FAILED, "representative * factor differs from g")
    except Indeterminate as exc:
        log.add("identity", INDETERMINATE, str(exc))
    try:
        ok = subgroup_membership(red.q, red.quotient) and subgroup_membership(red.factor, red.quotient)
        log.add("subgroup", VERIFIED if ok else FAILED, "q and factor in the subgroup")
    except Indeterminate as exc:
        log.add("subgroup", INDETERMINATE, str(exc))
    layer_ranges = []
    for layer, c, res in zip(red.representative.descriptor.layers, g.coords, red.layers):
        if layer.kind == "Gm":
            v = verify_reduction(c, res)
            log.add(f"layer {layer.name}", v.verdict, "torus layer reduction")
            layer_ranges.append(v)
    inner = (min((v.inner_range[0] for v in layer_ranges), default=0),
             max((v.inner_range[1] for v in layer_ranges), default=0))
    outer = (min((v.outer_range[0] for v in layer_ranges), default=0),
             max((v.outer_range[1] for v in layer_ranges), default=0))
    return VerificationWindow(inner, outer, log.verdict(), tuple(log.items))
