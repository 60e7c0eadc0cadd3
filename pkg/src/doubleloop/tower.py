"""Split solvable groups ``T |x U`` built from ``G_m`` and ``G_a`` layers.

``T`` is the product of the ``G_m`` layers and ``U`` the product of the
``G_a`` layers.  A torus element ``x`` acts on the ``G_a`` coordinate of
layer ``k`` through the character ``chi_k(x) = prod x_i^{c_ki}``.  The law is

    (x, u) * (x', u') = (x x', chi(x') u + u'),

which for ``tower(Gm,Gm,Ga[a^-1 d])`` is the Borel subgroup of ``GL_2``
written as ``[[a, a*u], [0, d]]`` (so ``u = b/a`` for ``[[a, b], [0, d]]``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .ga import reduce_ga, SUBGROUP as GA_SUBGROUP
from .gm import MAX_RETRIES, NormalFormResult, quotient_tag, reduce
from .parse import ParseError, format_series, parse_iter, split_top_level
from .series import (Indeterminate, InsufficientPrecision, LaurentSeries, invert_series, lift_inner,
                     membership)


@dataclass(frozen=True)
class Layer:
    kind: str  # "Gm" or "Ga"
    name: str
    character: tuple = ()  # ((gm name, exponent), ...) for Ga layers


@dataclass(frozen=True)
class TowerDescriptor:
    layers: tuple

    @property
    def torus(self) -> list:
        return [i for i, l in enumerate(self.layers) if l.kind == "Gm"]

    @property
    def unipotent(self) -> list:
        return [i for i, l in enumerate(self.layers) if l.kind == "Ga"]

    def index(self, name: str) -> int:
        for i, l in enumerate(self.layers):
            if l.name == name:
                return i
        raise KeyError(name)

    def __str__(self):
        parts = []
        for l in self.layers:
            if l.kind == "Gm":
                parts.append(f"Gm:{l.name}")
            else:
                ch = " ".join(f"{n}^{e}" if e != 1 else n for n, e in l.character)
                parts.append(f"Ga[{ch}]")
        return "tower(" + ",".join(parts) + ")"


_DEFAULT_GM = ("a", "d")


def parse_tower(text: str) -> TowerDescriptor:
    """Parse ``tower(Gm,Gm,Ga[a^-1 d])``.

    ``G_m`` layers are named ``a``, ``d``, then ``x3``, ``x4``...; write
    ``Gm:name`` to choose.  A character lists earlier ``G_m`` names with
    integer exponents, separated by spaces or ``*``.
    """
    m = re.fullmatch(r"\s*tower\s*\((.*)\)\s*", text)
    if not m:
        raise ParseError(f"expected tower(...), got {text!r}")
    layers = []
    gm_count = 0
    for raw in split_top_level(m.group(1), ","):
        item = raw.strip()
        if item.startswith("Gm"):
            rest = item[2:].strip()
            if rest.startswith(":"):
                name = rest[1:].strip()
            elif rest:
                raise ParseError(f"bad layer {item!r}")
            else:
                name = _DEFAULT_GM[gm_count] if gm_count < len(_DEFAULT_GM) else f"x{gm_count + 1}"
            if not re.fullmatch(r"[A-Za-z_]\w*", name) or any(l.name == name for l in layers):
                raise ParseError(f"bad or repeated layer name {name!r}")
            layers.append(Layer("Gm", name))
            gm_count += 1
        elif item.startswith("Ga"):
            cm = re.fullmatch(r"Ga\s*(?:\[(.*)\])?", item)
            if not cm:
                raise ParseError(f"bad layer {item!r}")
            known = {l.name for l in layers if l.kind == "Gm"}
            exps = {}
            for tok in re.split(r"[\s*]+", (cm.group(1) or "").strip()):
                if not tok:
                    continue
                tm = re.fullmatch(r"([A-Za-z_]\w*)(?:\^(-?\d+))?", tok)
                if not tm or tm.group(1) not in known:
                    raise ParseError(f"character factor {tok!r} must name an earlier Gm layer")
                exps[tm.group(1)] = exps.get(tm.group(1), 0) + int(tm.group(2) or 1)
            ch = tuple((n, e) for n, e in exps.items() if e)
            layers.append(Layer("Ga", f"u{len(layers) + 1}", ch))
        else:
            raise ParseError(f"unknown layer {item!r}")
    if not layers:
        raise ParseError("empty tower")
    return TowerDescriptor(tuple(layers))


BOREL = parse_tower("tower(Gm,Gm,Ga[a^-1 d])")


@dataclass(frozen=True)
class TowerElement:
    descriptor: TowerDescriptor
    coords: tuple  # two-variable series, one per layer

    def __post_init__(self):
        if len(self.coords) != len(self.descriptor.layers):
            raise ValueError("one coordinate per layer")
        rings = {c.ring for c in self.coords}
        if len(rings) != 1:
            raise ValueError("coordinates over different rings")

    def __str__(self):
        return "(" + ", ".join(format_series(c) for c in self.coords) + ")"

    def __eq__(self, other):
        return (isinstance(other, TowerElement) and self.descriptor == other.descriptor
                and all((a - b).is_zero() for a, b in zip(self.coords, other.coords)))

    __hash__ = None

    def agrees_with(self, other: "TowerElement") -> bool:
        """Coordinates agree wherever both are known."""
        return all(_agree(a, b) for a, b in zip(self.coords, other.coords))


def _agree(a, b) -> bool:
    d = a - b
    return all(not c.coeffs for c in d.coeffs.values())


def _lift(c: LaurentSeries) -> LaurentSeries:
    return c if c.is_iterated else lift_inner(c)


def element(descriptor: TowerDescriptor, coords) -> TowerElement:
    return TowerElement(descriptor, tuple(_lift(c) for c in coords))


def parse_tower_element(text: str, descriptor: TowerDescriptor, ring, t_prec: int = 8, s_prec: int = 8) -> TowerElement:
    body = text.strip()
    if not (body.startswith("(") and body.endswith(")")):
        raise ParseError("tower element must be a parenthesised coordinate list")
    parts = split_top_level(body[1:-1], ",")
    if len(parts) != len(descriptor.layers):
        raise ParseError(f"expected {len(descriptor.layers)} coordinates, got {len(parts)}")
    return element(descriptor, [parse_iter(p, ring, t_prec, s_prec) for p in parts])


def identity(descriptor: TowerDescriptor, ring) -> TowerElement:
    one = parse_iter("1", ring)
    zero = parse_iter("0", ring)
    return element(descriptor, [one if l.kind == "Gm" else zero for l in descriptor.layers])


def _inv(x: LaurentSeries, s_prec: int, t_prec: int) -> LaurentSeries:
    if len(x.coeffs) == 1 and x.prec is None:
        (j, sl), = x.coeffs.items()
        if len(sl.coeffs) == 1 and sl.prec is None:
            (d, c), = sl.coeffs.items()
            if c.is_unit():
                return LaurentSeries(x.ring, {-j: LaurentSeries(sl.ring, {-d: c.inverse()}, None, sl.var)},
                                     None, x.var)
    return invert_series(x, s_prec, t_prec)


def character(layer: Layer, descriptor: TowerDescriptor, torus: dict, s_prec: int, t_prec: int,
              inverses: dict | None = None, invert: bool = False) -> LaurentSeries:
    """``chi(x)`` for torus coordinates ``torus`` (layer name -> series).

    ``inverses`` may supply known inverses for negative exponents; ``invert``
    gives ``chi(x)^-1`` by negating the exponents.
    """
    ring = next(iter(torus.values())).ring
    out = LaurentSeries(ring, {0: ring.one()}, None, "s")
    for name, e in layer.character:
        if invert:
            e = -e
        if e > 0:
            base = torus[name]
        elif inverses is not None and name in inverses:
            base = inverses[name]
        else:
            base = _inv(torus[name], s_prec, t_prec)
        for _ in range(abs(e)):
            out = out * base
    return out


def _torus(g: TowerElement) -> dict:
    return {l.name: c for l, c in zip(g.descriptor.layers, g.coords) if l.kind == "Gm"}


def _check_same(g: TowerElement, h: TowerElement):
    if g.descriptor != h.descriptor:
        raise ValueError("tower descriptors differ")
    if g.coords[0].ring != h.coords[0].ring:
        raise ValueError("tower elements over different rings")


def tower_mul(g: TowerElement, h: TowerElement, s_prec: int = 8, t_prec: int = 8,
              inverses: dict | None = None) -> TowerElement:
    """``g * h``; ``inverses`` may give the inverses of ``h``'s torus coordinates."""
    _check_same(g, h)
    d = g.descriptor
    th = _torus(h)
    out = []
    for l, a, b in zip(d.layers, g.coords, h.coords):
        if l.kind == "Gm":
            out.append(a * b)
        else:
            out.append(character(l, d, th, s_prec, t_prec, inverses) * a + b)
    return TowerElement(d, tuple(out))


def tower_inv(g: TowerElement, s_prec: int = 8, t_prec: int = 8) -> TowerElement:
    d = g.descriptor
    tg = _torus(g)
    for name, x in tg.items():
        if not x.is_unit():
            raise ValueError(f"torus coordinate {name} is not a unit")
    out = []
    for l, a in zip(d.layers, g.coords):
        if l.kind == "Gm":
            out.append(_inv(a, s_prec, t_prec))
        else:
            out.append(-(character(l, d, tg, s_prec, t_prec, invert=True) * a))
    return TowerElement(d, tuple(out))


# -- B_2 matrices --------------------------------------------------------------------

def to_matrix(g: TowerElement):
    """``[[a, a*u], [0, d]]`` for an element of the Borel tower."""
    if g.descriptor != BOREL:
        raise ValueError("matrix form is only defined for tower(Gm,Gm,Ga[a^-1 d])")
    a, d, u = g.coords
    zero = LaurentSeries(a.ring, {}, None, a.var)
    return ((a, a * u), (zero, d))


def matmul(x, y):
    return tuple(tuple(x[i][0] * y[0][j] + x[i][1] * y[1][j] for j in range(2)) for i in range(2))


# -- normal forms --------------------------------------------------------------------

@dataclass(frozen=True)
class TowerReduction:
    """``g * q == representative`` and ``g == representative * factor``.

    ``q`` and ``factor = q^{-1}`` have every coordinate in the subgroup.
    """

    quotient: str
    representative: TowerElement
    q: TowerElement
    factor: TowerElement
    layers: tuple  # per layer: NormalFormResult or AdditiveSplit

    def torus_results(self) -> list:
        return [r for r in self.layers if isinstance(r, NormalFormResult)]


def reduce_tower(g: TowerElement, quotient: str, s_prec: int = 8, t_prec: int = 8) -> TowerReduction:
    """Reduce the torus layers, transport the witness, then split the ``G_a`` layers.

    Products with truncated witnesses lose window, so the work is redone at a
    larger precision until every output coordinate is known through
    ``s^(s_prec-1)`` and, on those slices, through ``t^(t_prec-1)``.
    """
    tag = quotient_tag(quotient)
    if tag == "GR1D":
        raise ValueError("towers use the two-variable quotients; view one-variable data as s-constant")
    for c in g.coords:
        if c.prec is not None or any(sl.prec is not None for sl in c.coeffs.values()):
            raise ValueError("reduce_tower expects exact coordinates")
    sp, tp = s_prec, t_prec
    last = prev = None
    for _ in range(2 * MAX_RETRIES):
        try:
            red = _reduce_tower_at(g, tag, sp, tp)
            coords = [c for x in (red.representative, red.q, red.factor) for c in x.coords]
            s_short = max((s_prec - c.prec for c in coords if c.prec is not None), default=0)
            if s_short <= 0 and all(_covers(c, s_prec, t_prec) for c in coords):
                cut = [TowerElement(g.descriptor, tuple(_cut(c, s_prec, t_prec) for c in x.coords))
                       for x in (red.representative, red.q, red.factor)]
                return TowerReduction(tag, *cut, red.layers)
            # outer windows usually fall short by a fixed offset (valuations of
            # the representative); a shortfall that does not shrink comes from
            # witnesses cut for lack of inner precision
            outer_helps = prev is None or prev[0] - s_short >= (prev[1] + 1) // 2
            if s_short > 0 and outer_helps:
                prev = (s_short, s_short)
                sp += s_short
            else:
                prev = (s_short, 0) if s_short > 0 else None
                tp *= 2
            continue
        except (InsufficientPrecision, Indeterminate) as exc:
            last = exc
        sp, tp = sp + (sp + 1) // 2, 2 * tp
    raise InsufficientPrecision(f"tower reduction did not settle: {last}")


def _covers(c: LaurentSeries, s_prec: int, t_prec: int) -> bool:
    if c.prec is not None and c.prec < s_prec:
        return False
    return all(sl.prec is None or sl.prec >= t_prec for j, sl in c.coeffs.items() if j < s_prec)


def _cut(c: LaurentSeries, s_prec: int, t_prec: int) -> LaurentSeries:
    if c.prec is None and all(sl.prec is None for sl in c.coeffs.values()):
        return c
    slices = {j: sl if sl.prec is None else sl.truncate(t_prec) for j, sl in c.coeffs.items() if j < s_prec}
    return LaurentSeries(c.ring, slices, s_prec, c.var)


def _reduce_tower_at(g: TowerElement, tag: str, s_prec: int, t_prec: int) -> TowerReduction:
    d = g.descriptor
    torus_res = {}
    witness, winv = {}, {}
    for l, c in zip(d.layers, g.coords):
        if l.kind == "Gm":
            r = reduce(c, tag, s_prec, t_prec)
            torus_res[l.name] = r
            witness[l.name] = r.witness
            winv[l.name] = _witness_inverse(c, r, s_prec, t_prec)
    rep, q, factor, layers = [], [], [], []
    for l, c in zip(d.layers, g.coords):
        if l.kind == "Gm":
            r = torus_res[l.name]
            rep.append(_lift(r.representative))
            q.append(r.witness)
            factor.append(winv[l.name])
            layers.append(r)
        else:
            moved = character(l, d, witness, s_prec, t_prec, inverses=winv) * c
            split = _split_known(moved, tag)
            rep.append(split.representative)
            q.append(-split.subgroup_part)
            factor.append(character(l, d, winv, s_prec, t_prec, inverses=witness) * split.subgroup_part)
            layers.append(split)
    return TowerReduction(tag, TowerElement(d, tuple(rep)), TowerElement(d, tuple(q)),
                          TowerElement(d, tuple(factor)), tuple(layers))


def _witness_inverse(x, r: NormalFormResult, s_prec: int, t_prec: int) -> LaurentSeries:
    # x w = sigma, so w^{-1} = x sigma^{-1}; keep whichever route leaves the wider window
    sigma = _lift(r.representative)
    found = []
    for route in (lambda: x * _inv(sigma, s_prec, t_prec), lambda: _inv(r.witness, s_prec, t_prec)):
        try:
            c = route()
        except Indeterminate:
            continue
        if c.prec is None and all(sl.prec is None for sl in c.coeffs.values()):
            return c
        found.append(c)
    if not found:
        raise InsufficientPrecision("neither the witness nor the representative can be inverted")
    return max(found, key=_window_key)


def _window_key(c: LaurentSeries):
    big = 1 << 30
    outer = big if c.prec is None else c.prec
    inner = min((sl.prec for j, sl in c.coeffs.items() if sl.prec is not None and j < outer), default=big)
    return (outer, inner)


def _split_known(f: LaurentSeries, tag: str):
    """Additive split of a possibly truncated series.

    Slices whose whole support is on the representative side keep their
    precision; otherwise the slice must be known through ``t^-1``.
    """
    from .ga import AdditiveSplit, in_complement
    if f.prec is None and all(sl.prec is None for sl in f.coeffs.values()):
        return reduce_ga(f, tag)
    outer_rep = tag in ("LGR", "GRBIG", "GR2")
    # a slice too short to split makes it and everything above it unknown
    prec = f.prec
    for j in sorted(f.coeffs):
        sl = f.coeffs[j]
        if (prec is None or j < prec) and not (outer_rep and j < 0) and sl.prec is not None and sl.prec < 0 \
                and any(in_complement(tag, j, i) for i in range(sl.prec, 0)):
            prec = j
            break
    if outer_rep and prec is not None and prec <= (1 if tag == "GR2" else 0):
        raise InsufficientPrecision("low s-degrees not determined")
    f = LaurentSeries(f.ring, {j: sl for j, sl in f.coeffs.items() if prec is None or j < prec}, prec, f.var)
    rep, sub = {}, {}
    base = f.ring.base
    for j, sl in f.coeffs.items():
        whole = outer_rep and j < 0
        a = {i: c for i, c in sl.coeffs.items() if in_complement(tag, j, i)}
        b = {i: c for i, c in sl.coeffs.items() if not in_complement(tag, j, i)}
        if a or whole:
            rep[j] = LaurentSeries(base, a, sl.prec if whole else None, sl.var)
        sub[j] = LaurentSeries(base, b, None if whole else sl.prec, sl.var)
    rep_prec = f.prec if tag in ("GRJ", "GRL", "GRBIG") else None
    return AdditiveSplit(tag, LaurentSeries(f.ring, rep, rep_prec, f.var),
                         LaurentSeries(f.ring, sub, f.prec, f.var))


def subgroup_membership(x: TowerElement, quotient: str) -> bool:
    """Every coordinate lies in the quotient's subgroup ring (units for G_m)."""
    from .series import is_subring_unit
    tag = GA_SUBGROUP[quotient_tag(quotient)]
    for l, c in zip(x.descriptor.layers, x.coords):
        if not membership(c, tag):
            return False
        if l.kind == "Gm" and not is_subring_unit(c, tag):
            return False
    return True


def matrix_membership(mat, quotient: str) -> bool:
    """Entries of an upper triangular matrix lie in the subgroup ring, diagonal entries as units."""
    from .series import is_subring_unit
    tag = GA_SUBGROUP[quotient_tag(quotient)]
    (a, b), (c, d) = mat
    if not c.is_zero():
        return False
    return (membership(b, tag) and all(membership(x, tag) and is_subring_unit(x, tag) for x in (a, d)))
