"""Text forms: ring declarations, series expressions, canonical printing.

Ring grammar::

    ring    := factor ( 'x' factor )*
    factor  := field [ '[' gens ']' '/' '(' relations ')' ]
    field   := 'Q' | 'F' prime | 'F_' prime

Series grammar (``t``/``s``, with ``x``/``y`` accepted as aliases)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := atom ('^' ['-'] int)?
    atom    := int | name | '(' expr ')' | '(' expr (',' expr)+ ')'
             | 'inv' '(' expr ')' | 'O' '(' var '^' ['-'] int ')'

A parenthesised tuple gives one component per ring factor.  ``inv`` and
negative powers of non-monomials expand to the requested precisions.
"""

from __future__ import annotations

import re

from .ring import BaseField, LocalFactor, RingElement, TestRing, _parse_monomial
from .series import LaurentRing, LaurentSeries, embed_series, invert_series


class ParseError(ValueError):
    pass


INNER_ALIASES = ("t", "x")
OUTER_ALIASES = ("s", "y")


# -- helpers ------------------------------------------------------------------

def split_top_level(text: str, sep: str) -> list:
    """Split on ``sep`` outside any brackets."""
    out, depth, cur = [], 0, []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth -= 1
            if depth < 0:
                raise ParseError(f"unbalanced brackets in {text!r}")
        if depth == 0 and text.startswith(sep, i):
            out.append("".join(cur))
            cur = []
            i += len(sep)
            continue
        cur.append(ch)
        i += 1
    if depth:
        raise ParseError(f"unbalanced brackets in {text!r}")
    out.append("".join(cur))
    return out


# -- rings --------------------------------------------------------------------

_FIELD_RE = re.compile(r"^(Q|F_?(\d+))$")


def _parse_field(text: str) -> BaseField:
    m = _FIELD_RE.match(text.strip())
    if not m:
        raise ParseError(f"unknown base field {text!r} (use Q or Fp)")
    try:
        return BaseField(0 if m.group(1) == "Q" else int(m.group(2)))
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def _parse_factor(text: str):
    text = text.strip()
    if "[" not in text:
        return _parse_field(text), LocalFactor((), [])
    m = re.match(r"^([^\[]+)\[([^\]]*)\]\s*/\s*\((.*)\)$", text)
    if not m:
        raise ParseError(f"cannot read ring factor {text!r}")
    field = _parse_field(m.group(1))
    gens = [g.strip() for g in m.group(2).split(",") if g.strip()]
    for g in gens:
        if not re.match(r"^[A-Za-z_][A-Za-z0-9_]*$", g) or g in ("t", "s", "inv", "O"):
            raise ParseError(f"bad generator name {g!r}")
    try:
        rels = [_parse_monomial(r, gens) for r in m.group(3).split(",") if r.strip()]
        return field, LocalFactor(gens, rels)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def parse_ring(text: str) -> TestRing:
    parts = [p for p in split_top_level(text.strip(), "x")]
    if any(not p.strip() for p in parts):
        raise ParseError(f"empty ring factor in {text!r}")
    fields, factors = [], []
    for p in parts:
        fld, fac = _parse_factor(p)
        fields.append(fld)
        factors.append(fac)
    if any(f != fields[0] for f in fields):
        raise ParseError("all factors must share one base field")
    return TestRing(fields[0], factors)


# -- series expressions -------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


def _tokenize(text: str) -> list:
    toks = []
    for m in _TOKEN_RE.finditer(text):
        num, name, sym = m.groups()
        if num is not None:
            toks.append(("num", int(num)))
        elif name is not None:
            toks.append(("name", name))
        elif sym is not None:
            if sym.isspace():
                continue
            if sym not in "+-*/^(),":
                raise ParseError(f"unexpected character {sym!r}")
            toks.append(("sym", sym))
    return toks


class _Parser:
    def __init__(self, text, ring: TestRing, t_prec: int, s_prec: int):
        self.text = text
        self.toks = _tokenize(text)
        self.pos = 0
        self.ring = ring
        self.lring = LaurentRing(ring, "t")
        self.t_prec = t_prec
        self.s_prec = s_prec
        names = {g for f in ring.factors for g in f.gens}
        self.inner = {v for v in INNER_ALIASES if v not in names}
        self.outer = {v for v in OUTER_ALIASES if v not in names}
        self.used_outer = False

    # token helpers
    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else (None, None)

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value is not None and tok[1] != value):
            want = value if value is not None else kind
            raise ParseError(f"expected {want!r} at token {self.pos} of {self.text!r}, got {tok[1]!r}")
        self.pos += 1
        return tok

    def at(self, value):
        tok = self.peek()
        return tok[0] == "sym" and tok[1] == value

    # values are series in s over R((t))
    def const(self, c) -> LaurentSeries:
        inner = LaurentSeries(self.ring, {0: self.ring(c)}, None, "t")
        return LaurentSeries(self.lring, {0: inner}, None, "s")

    def mono(self, i: int, j: int) -> LaurentSeries:
        inner = LaurentSeries(self.ring, {i: self.ring.one()}, None, "t")
        return LaurentSeries(self.lring, {j: inner}, None, "s")

    def parse(self) -> LaurentSeries:
        v = self.expr()
        if self.pos != len(self.toks):
            raise ParseError(f"trailing input at token {self.pos} of {self.text!r}")
        return v

    def expr(self):
        v = self.term()
        while self.at("+") or self.at("-"):
            op = self.take()[1]
            rhs = self.term()
            v = v + rhs if op == "+" else v - rhs
        return v

    def term(self):
        v = self.unary()
        while self.at("*") or self.at("/"):
            op = self.take()[1]
            rhs = self.unary()
            v = v * rhs if op == "*" else v * self.invert(rhs)
        return v

    def unary(self):
        if self.at("-"):
            self.take()
            return -self.unary()
        if self.at("+"):
            self.take()
            return self.unary()
        return self.power()

    def exponent(self) -> int:
        neg = False
        if self.at("-"):
            self.take()
            neg = True
        n = self.take("num")[1]
        return -n if neg else n

    def power(self):
        tok = self.peek()
        var = tok[1] if tok[0] == "name" else None
        base = self.atom()
        if not self.at("^"):
            return base
        self.take()
        n = self.exponent()
        if var in self.inner:
            return self.mono(n, 0)
        if var in self.outer:
            return self.mono(0, n)
        if n >= 0:
            return base ** n
        return self.invert(base) ** (-n)

    def invert(self, v: LaurentSeries) -> LaurentSeries:
        # exact monomials invert exactly
        if len(v.coeffs) == 1 and v.prec is None:
            (j, c), = v.coeffs.items()
            if len(c.coeffs) == 1 and c.prec is None:
                (i, a), = c.coeffs.items()
                if a.is_unit():
                    inner = LaurentSeries(self.ring, {-i: a.inverse()}, None, "t")
                    return LaurentSeries(self.lring, {-j: inner}, None, "s")
        try:
            if v.prec is None and set(v.coeffs) == {0}:
                inner = invert_series(v.coeffs[0], self.t_prec)
                return LaurentSeries(self.lring, {0: inner}, None, "s")
            return invert_series(v, self.s_prec, self.t_prec)
        except ArithmeticError as exc:
            raise ParseError(f"inv: {exc}") from None

    def atom(self):
        kind, val = self.peek()
        if kind == "num":
            self.take()
            return self.const(val)
        if kind == "name":
            self.take()
            if val in self.inner:
                return self.mono(1, 0)
            if val in self.outer:
                self.used_outer = True
                return self.mono(0, 1)
            if val == "inv":
                self.take("sym", "(")
                v = self.expr()
                self.take("sym", ")")
                return self.invert(v)
            if val == "O":
                self.take("sym", "(")
                var = self.take("name")[1]
                self.take("sym", "^")
                n = self.exponent()
                self.take("sym", ")")
                if var in self.inner:
                    inner = LaurentSeries(self.ring, {}, n, "t")
                    return LaurentSeries(self.lring, {0: inner}, None, "s")
                if var in self.outer:
                    self.used_outer = True
                    return LaurentSeries(self.lring, {}, n, "s")
                raise ParseError(f"O(...) needs t or s, got {var!r}")
            try:
                return self.const(self.ring.gen(val))
            except KeyError as exc:
                raise ParseError(str(exc.args[0])) from None
        if kind == "sym" and val == "(":
            self.take()
            v = self.expr_in_sub()
            self.take("sym", ")")
            return v
        if val is None:
            raise ParseError(f"unexpected end of input in {self.text!r}")
        raise ParseError(f"unexpected token {val!r} in {self.text!r}")

    def expr_in_sub(self):
        # A parenthesised group is either a plain expression or a tuple with
        # one component per factor; tuples are parsed in the factor rings.
        start = self.pos
        depth = 0
        j = start
        commas = []
        while j < len(self.toks):
            k, v = self.toks[j]
            if k == "sym" and v == "(":
                depth += 1
            elif k == "sym" and v == ")":
                if depth == 0:
                    break
                depth -= 1
            elif k == "sym" and v == "," and depth == 0:
                commas.append(j)
            j += 1
        if j >= len(self.toks):
            raise ParseError(f"unclosed parenthesis in {self.text!r}")
        if not commas:
            return self.expr()
        bounds = [start] + [c + 1 for c in commas]
        ends = commas + [j]
        n = len(self.ring.factors)
        if len(bounds) != n:
            raise ParseError(f"tuple has {len(bounds)} components, ring has {n} factors")
        total = LaurentSeries(self.lring, {}, None, "s")
        for i, (a, b) in enumerate(zip(bounds, ends)):
            sub = _Parser("", self.ring.factor_ring(i), self.t_prec, self.s_prec)
            sub.toks = self.toks[a:b]
            sub.text = self.text
            sub.inner, sub.outer = self.inner, self.outer
            comp = sub.parse()
            self.used_outer |= sub.used_outer
            total = total + embed_series(self.lring, i, comp)
        self.pos = j
        return total


def parse_series(text: str, ring: TestRing, t_prec: int = 8, s_prec: int = 8, dim: int | None = None):
    """Parse an expression; returns a one-variable series unless ``s`` occurs or ``dim == 2``."""
    p = _Parser(text, ring, t_prec, s_prec)
    v = p.parse()
    if dim == 2 or (dim is None and (p.used_outer or v.prec is not None or any(j != 0 for j in v.coeffs))):
        return v
    if v.prec is not None or any(j != 0 for j in v.coeffs):
        raise ParseError(f"{text!r} depends on s but a one-variable series was requested")
    c = v.coeffs.get(0)
    return c if c is not None else LaurentSeries(ring, {}, None, "t")


def parse_element(text: str, ring: TestRing) -> RingElement:
    f = parse_series(text, ring, dim=1)
    if f.prec is not None or any(d != 0 for d in f.coeffs):
        raise ParseError(f"{text!r} is not a ring element")
    return f.get(0)


def parse_iter(text: str, ring: TestRing, t_prec: int = 8, s_prec: int = 8) -> LaurentSeries:
    return parse_series(text, ring, t_prec, s_prec, dim=2)


# -- printing -----------------------------------------------------------------

def _scalar_str(c) -> str:
    return str(c)


def element_terms(c: RingElement) -> list:
    """``(scalar, monomial_text)`` pairs of a connected-ring element."""
    ring = c.ring
    fac = ring.factors[0]
    return [(x, fac.mono_name(m)) for m, x in zip(fac.basis, c.coeffs) if x]


def _join(terms: list) -> str:
    """Join ``(negative, body)`` pairs into ``a + b - c``."""
    if not terms:
        return "0"
    neg, body = terms[0]
    out = ("-" if neg else "") + body
    for neg, body in terms[1:]:
        out += (" - " if neg else " + ") + body
    return out


def _var_part(var: str, d: int) -> str:
    if d == 0:
        return ""
    return var if d == 1 else f"{var}^{d}"


def _coeff_terms(c: RingElement, suffix: list) -> list:
    ring = c.ring
    field = ring.field
    if not ring.is_connected:
        body = "*".join([str(c)] + suffix)
        return [(False, body)]
    out = []
    for x, mono in element_terms(c):
        neg = False
        if not field.p and x < 0:
            neg, x = True, -x
        factors = [f for f in [mono] + suffix if f]
        if not factors:
            out.append((neg, str(x)))
        elif x == 1:
            out.append((neg, "*".join(factors)))
        else:
            out.append((neg, "*".join([str(x)] + factors)))
    return out


def _series1_terms(f: LaurentSeries, suffix: list) -> list:
    terms = []
    for d, c in f.items():
        tp = _var_part(f.var, d)
        terms.extend(_coeff_terms(c, ([tp] if tp else []) + suffix))
    return terms


def format_series(f: LaurentSeries) -> str:
    """Canonical text: terms by (outer degree, inner degree), then O-markers."""
    if not f.is_iterated:
        terms = _series1_terms(f, [])
        if f.prec is not None:
            terms.append((False, f"O({f.var}^{f.prec})"))
        return _join(terms)
    terms = []
    for j, c in f.items():
        sp = _var_part(f.var, j)
        if c.prec is None:
            terms.extend(_series1_terms(c, [sp] if sp else []))
        else:
            inner = _series1_terms(c, []) + [(False, f"O({c.var}^{c.prec})")]
            group = "(" + _join(inner) + ")"
            terms.append((False, group + ("*" + sp if sp else "")))
    if f.prec is not None:
        terms.append((False, f"O({f.var}^{f.prec})"))
    return _join(terms)


def format_element(c: RingElement) -> str:
    return str(c)


def series_terms(f: LaurentSeries) -> list:
    """Structured term list ``[[outer, inner, coeff_text], ...]`` (1D: outer 0)."""
    out = []
    if not f.is_iterated:
        for d, c in f.items():
            out.append([0, d, str(c)])
        return out
    for j, c in f.items():
        for i, a in c.items():
            out.append([j, i, str(a)])
    return out
