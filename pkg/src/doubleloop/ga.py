"""Normal forms for the additive group.

For ``G_a`` every quotient is a quotient of additive groups, and the
subgroup is spanned by a set of monomials.  The canonical representative is
therefore the part of ``f`` supported on the complementary monomials.
"""

from __future__ import annotations

from dataclasses import dataclass

from .gm import quotient_tag
from .series import Indeterminate, LaurentSeries, lift_inner, membership

GROUP = "ga"


def in_complement(quotient: str, j: int, i: int) -> bool:
    """Monomial ``t^i s^j`` belongs to the representative side."""
    if quotient == "GR1D":
        return i < 0
    if quotient in ("GRJ", "GRL"):
        return i < 0
    if quotient == "LGR":
        return j < 0
    if quotient == "GRBIG":
        return i < 0 or j < 0
    if quotient == "GR2":
        return j < 0 or (j == 0 and i < 0)
    raise ValueError(quotient)


SUBGROUP = {"GR1D": "J", "GRJ": "JJ", "LGR": "LJ", "GRBIG": "JJ", "GRL": "JL", "GR2": "O2"}


@dataclass(frozen=True)
class AdditiveSplit:
    quotient: str
    representative: LaurentSeries
    subgroup_part: LaurentSeries

    group = GROUP

    @property
    def subgroup(self) -> str:
        return SUBGROUP[self.quotient]

    def check(self, f: LaurentSeries) -> bool:
        return self.representative + self.subgroup_part == f


def _split2(f: LaurentSeries, quotient: str):
    base = f.ring.base
    rep, sub = {}, {}
    for j, sl in f.coeffs.items():
        a = {i: c for i, c in sl.coeffs.items() if in_complement(quotient, j, i)}
        b = {i: c for i, c in sl.coeffs.items() if not in_complement(quotient, j, i)}
        if a:
            rep[j] = LaurentSeries(base, a, None, sl.var)
        if b:
            sub[j] = LaurentSeries(base, b, None, sl.var)
    return LaurentSeries(f.ring, rep, None, f.var), LaurentSeries(f.ring, sub, None, f.var)


def reduce_ga(f: LaurentSeries, quotient: str) -> AdditiveSplit:
    """Split exact ``f`` into representative plus subgroup part."""
    tag = quotient_tag(quotient)
    if f.prec is not None or (f.is_iterated and any(c.prec is not None for c in f.coeffs.values())):
        raise Indeterminate("additive reduction needs an exact input")
    if tag == "GR1D":
        if f.is_iterated:
            if set(f.coeffs) - {0}:
                raise ValueError("GR1D needs an input without s")
            f = f.get(0)
        rep = LaurentSeries(f.ring, {i: c for i, c in f.coeffs.items() if i < 0}, None, f.var)
        return AdditiveSplit(tag, rep, f - rep)
    if not f.is_iterated:
        f = lift_inner(f)
    if tag == "GRJ" and not membership(f, "LJ"):
        raise ValueError("GRJ needs an input in R((t))[[s]]")
    rep, sub = _split2(f, tag)
    return AdditiveSplit(tag, rep, sub)


@dataclass(frozen=True)
class Chart:
    """Smallest chart containing a representative.

    ``h`` is the lowest outer degree and ``alpha`` maps each outer degree to
    the lowest inner degree present there.
    """

    h: int | None
    alpha: tuple  # ((j, lowest inner degree), ...)

    def as_dict(self) -> dict:
        return {"h": self.h, "alpha": {str(j): a for j, a in self.alpha}}


def chart(rep: LaurentSeries) -> Chart:
    if not rep.is_iterated:
        rep = lift_inner(rep)
    if rep.prec is not None:
        raise Indeterminate("chart of a truncated representative")
    alpha = tuple((j, min(sl.coeffs)) for j, sl in sorted(rep.coeffs.items()) if sl.coeffs)
    h = alpha[0][0] if alpha else None
    return Chart(h, alpha)
