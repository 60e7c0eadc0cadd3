"""Fiber rings of the model flag ``(A^2, {y=0}, origin)``.

Variables are identified as ``x = t`` (inner) and ``y = s`` (outer).  Each
tag resolves to a ring description and a membership predicate on two
variable series; most of them are one of the subring tags of
:mod:`doubleloop.series`.  Nothing geometric is constructed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from . import ga, gm
from .series import Indeterminate, LaurentSeries, lift_inner, membership


def _iter(f: LaurentSeries) -> LaurentSeries:
    return f if f.is_iterated else lift_inner(f)


def _polynomial_inner(sl: LaurentSeries) -> bool:
    if any(d < 0 for d in sl.coeffs):
        return False
    if sl.prec is not None:
        raise Indeterminate("a truncated slice may hide infinitely many terms")
    return True


def _in_poly_x_series_y(f):
    f = _iter(f)
    return all(j >= 0 for j in f.coeffs) and all(_polynomial_inner(sl) for sl in f.coeffs.values())


def _in_poly_xy(f):
    f = _iter(f)
    if f.prec is not None:
        raise Indeterminate("outer truncation hides the y-degree")
    return _in_poly_x_series_y(f)


def _in_series_x_poly_y(f):
    f = _iter(f)
    if f.prec is not None:
        raise Indeterminate("outer truncation hides the y-degree")
    return membership(f, "JJ")


@dataclass(frozen=True)
class FiberRing:
    tag: str
    description: str  # in the x, y alphabet
    subring: str | None  # subring tag, None for colimit-only descriptions
    colimit: bool
    predicate: Callable = None

    def contains(self, f: LaurentSeries) -> bool:
        """Membership of ``f``; raises Indeterminate when truncation hides the answer."""
        if self.subring is not None:
            return membership(_iter(f), self.subring)
        return self.predicate(f)

    def as_dict(self) -> dict:
        return {"tag": self.tag, "description": self.description,
                "subring": self.subring, "colimit": self.colimit}

    def __str__(self):
        head = self.subring if self.subring is not None else "colim"
        return f"{head} / {self.description}"


FIBERS = {
    "Dhat": FiberRing("Dhat", "colim_n R[x,y]/y^n", None, True, _in_poly_xy),
    "Dhat_aff": FiberRing("Dhat_aff", "R[x][[y]]", None, False, _in_poly_x_series_y),
    "Zhat_aff": FiberRing("Zhat_aff", "R[[x,y]]", "JJ", False),
    "Zhat_Dhat_affDhat": FiberRing("Zhat_Dhat_affDhat", "colim_n R[[x]][y]/y^n", None, True,
                                   _in_series_x_poly_y),
    "Zhat_minus_D": FiberRing("Zhat_minus_D", "R[[x]]((y))", "JL", False),
    "Zhat_Dhat_minus_Z_aff": FiberRing("Zhat_Dhat_minus_Z_aff", "R((x))[[y]]", "LJ", False),
    "Zhat_Dhat_minus_Z_minus_D": FiberRing("Zhat_Dhat_minus_Z_minus_D", "R((x))((y))", "LL", False),
    "pushout": FiberRing("pushout", "R[[x]] + y R((x))[[y]]", "O2", False),
}

_TAG_ALIASES = {k.lower(): k for k in FIBERS}


def fiber_ring(tag: str) -> FiberRing:
    key = _TAG_ALIASES.get(tag.strip().lower())
    if key is None:
        raise ValueError(f"unknown flag tag {tag!r}; expected one of {', '.join(FIBERS)}")
    return FIBERS[key]


def fiber_for_subring(subring: str) -> FiberRing:
    for fr in FIBERS.values():
        if fr.subring == subring:
            return fr
    raise KeyError(subring)


@dataclass(frozen=True)
class GeometricMatch:
    name: str
    quotient: str
    caveat: str | None = None

    def as_dict(self) -> dict:
        return {"name": self.name, "quotient": self.quotient, "caveat": self.caveat}


GEOMETRIC = {
    "geomLGr": GeometricMatch("geomLGr", "LGR"),
    "geomBig": GeometricMatch("geomBig", "GRBIG"),
    "geomJet": GeometricMatch("geomJet", "GRJ"),
    "geom2": GeometricMatch("geom2", "GR2"),
    "geomLoopGr": GeometricMatch(
        "geomLoopGr", "GRL",
        "comparison known only on k-points and for special or solvable G; recorded as data"),
}

_GEOM_ALIASES = {k.lower(): k for k in GEOMETRIC}


def geometric_to_quotient(name: str) -> GeometricMatch:
    key = _GEOM_ALIASES.get(name.strip().lower())
    if key is None:
        raise ValueError(f"unknown geometric Grassmannian {name!r}; expected one of {', '.join(GEOMETRIC)}")
    return GEOMETRIC[key]


def resolve_quotient(name: str) -> tuple:
    """Quotient tag for a quotient or geometric name, with the caveat if any."""
    try:
        m = geometric_to_quotient(name)
        return m.quotient, m.caveat
    except ValueError:
        return gm.quotient_tag(name), None


def quotient_fibers(quotient: str) -> tuple:
    """``(ambient, subgroup)`` fiber rings of a two-variable quotient."""
    amb, sub = gm.QUOTIENTS[gm.quotient_tag(quotient)]
    return fiber_for_subring(amb), fiber_for_subring(sub)


def round_trip_problems(window: int = 3) -> list:
    """Disagreements between the fiber table and the normal-form modules.

    Checks that every two-variable quotient has fiber rings for its ambient
    and subgroup rings, that the additive subgroup tag matches, and that a
    monomial ``t^i s^j`` with ``|i|, |j| <= window`` is on the additive
    complement side exactly when it is outside the subgroup ring (monomials
    outside the ambient ring are skipped).
    """
    from .ring import TestRing
    from .series import iter_series
    ring = TestRing.field_ring(0)
    problems = []
    for q in gm.TWO_VARIABLE:
        try:
            amb, sub = quotient_fibers(q)
        except KeyError as exc:
            problems.append(f"{q}: no fiber ring for {exc}")
            continue
        if ga.SUBGROUP[q] != sub.subring:
            problems.append(f"{q}: additive subgroup {ga.SUBGROUP[q]} but fiber {sub.subring}")
        for j in range(-window, window + 1):
            for i in range(-window, window + 1):
                mono = iter_series(ring, {(i, j): 1})
                if not amb.contains(mono):
                    continue
                inside = sub.contains(mono)
                if inside == ga.in_complement(q, j, i):
                    problems.append(f"{q}: t^{i}*s^{j} misclassified")
    for m in GEOMETRIC.values():
        if m.quotient not in gm.TWO_VARIABLE:
            problems.append(f"{m.name}: {m.quotient} is not a two-variable quotient")
    return problems
