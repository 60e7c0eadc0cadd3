"""Command line front end.

Exit status: 0 when the requested result is verified, 1 on a mathematical
failure (non-unit input, failed or inconclusive verification), 2 on parse or
usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .flags import FIBERS, GEOMETRIC, fiber_ring, geometric_to_quotient, resolve_quotient
from .parse import ParseError, format_series, parse_ring, parse_series, series_terms
from .ring import NotInvertible
from .series import Indeterminate, SUBRING_DESCRIPTIONS, unit_decompose

SCHEMA_VERSION = 1
EXIT_OK, EXIT_MATH, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- serialisation -----------------------------------------------------------------

def series_record(f) -> dict:
    rec = {"text": format_series(f), "terms": series_terms(f)}
    if f.prec is not None:
        rec["outer_prec" if f.is_iterated else "prec"] = f.prec
    return rec


def normal_form_record(result) -> dict:
    return {
        "group": result.group,
        "quotient": result.quotient,
        "m": _jsonable(result.m),
        "components": {n: series_record(c) for n, c in result.components},
        "representative": series_record(result.representative),
        "witness": series_record(result.witness),
        "window": result.window.as_dict(),
    }


def split_record(split) -> dict:
    from .ga import chart
    rec = {
        "group": "ga",
        "quotient": split.quotient,
        "representative": series_record(split.representative),
        "subgroup_part": series_record(split.subgroup_part),
    }
    if split.quotient != "GR1D":
        rec["chart"] = chart(split.representative).as_dict()
    return rec


def tower_record(red) -> dict:
    d = red.representative.descriptor
    names = [l.name for l in d.layers]
    return {
        "group": "tower",
        "descriptor": str(d),
        "quotient": red.quotient,
        "representative": {n: series_record(c) for n, c in zip(names, red.representative.coords)},
        "q": {n: series_record(c) for n, c in zip(names, red.q.coords)},
        "factor": {n: series_record(c) for n, c in zip(names, red.factor.coords)},
    }


def _jsonable(x):
    if isinstance(x, tuple):
        return [_jsonable(v) for v in x]
    return x


# -- output ------------------------------------------------------------------------

class Output:
    def __init__(self, args, command: str):
        self.fmt = args.format
        self.doc = {"schema_version": SCHEMA_VERSION, "command": command}
        self.lines = []

    def put(self, key, value, text=None):
        self.doc[key] = value
        if text is not None:
            self.lines.append(f"{key}: {text}")

    def line(self, text: str):
        self.lines.append(text)

    def render(self) -> str:
        if self.fmt == "json":
            return json.dumps(self.doc, indent=2, ensure_ascii=False) + "\n"
        return "\n".join(self.lines) + "\n"


def _verification_lines(out: Output, v):
    out.put("verification", v.as_dict(), v.verdict)
    for name, status, detail in v.checks:
        out.line(f"  {name}: {status}" + (f" ({detail})" if detail else ""))


def _exit_for(verdict: str) -> int:
    return EXIT_OK if verdict == "verified" else EXIT_MATH


# -- shared argument handling --------------------------------------------------------

def _common(p, expr=True, quotient=True):
    p.add_argument("--ring", default="Q", help='test ring, e.g. "Q[e]/(e^2)" or "QxQ"')
    if expr:
        p.add_argument("--expr", required=True, help="series expression in t, s (or x, y)")
    if quotient:
        p.add_argument("--quotient", required=True, help="quotient tag (GR1D, GRJ, LGR, GRBIG, GRL, GR2) "
                       "or geometric name (" + ", ".join(GEOMETRIC) + ")")
    p.add_argument("--t-prec", type=int, default=8)
    p.add_argument("--s-prec", type=int, default=8)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out", help="write the output to this file as well")


def _ring(args):
    try:
        return parse_ring(args.ring)
    except ParseError as exc:
        raise UsageError(f"bad ring {args.ring!r}: {exc}")


def _quotient(args):
    try:
        return resolve_quotient(args.quotient)
    except ValueError as exc:
        raise UsageError(str(exc))


def _precisions(args):
    if args.t_prec < 1 or args.s_prec < 1:
        raise UsageError("precisions must be positive")


# -- commands ------------------------------------------------------------------------

def _reduce_any(args, out: Output, verify_only=False) -> int:
    from .ga import reduce_ga
    from .gm import reduce
    from .tower import parse_tower, parse_tower_element, reduce_tower
    from .verify import verify_reduction, verify_split, verify_tower
    _precisions(args)
    ring = _ring(args)
    tag, caveat = _quotient(args)
    out.put("group", args.group, args.group)
    out.put("quotient", tag, tag)
    if caveat:
        out.put("caveat", caveat, caveat)
    out.put("ring", args.ring, args.ring)
    out.put("input", args.expr, args.expr)
    if args.group == "tower":
        try:
            desc = parse_tower(args.tower)
            g = parse_tower_element(args.expr, desc, ring, args.t_prec, args.s_prec)
        except ParseError as exc:
            raise UsageError(str(exc))
        red = reduce_tower(g, tag, args.s_prec, args.t_prec)
        v = verify_tower(g, red)
        rec = tower_record(red)
        out.put("descriptor", rec["descriptor"], rec["descriptor"])
        if not verify_only:
            out.put("result", rec)
            for n, c in zip((l.name for l in desc.layers), red.representative.coords):
                out.line(f"representative.{n}: {format_series(c)}")
            for n, c in zip((l.name for l in desc.layers), red.q.coords):
                out.line(f"q.{n}: {format_series(c)}")
    else:
        try:
            f = parse_series(args.expr, ring, args.t_prec, args.s_prec,
                             dim=1 if tag == "GR1D" else None)
        except ParseError as exc:
            raise UsageError(str(exc))
        if args.group == "ga":
            split = reduce_ga(f, tag)
            v = verify_split(f, split)
            rec = split_record(split)
            if not verify_only:
                out.put("result", rec)
                out.line(f"representative: {rec['representative']['text']}")
                out.line(f"subgroup part: {rec['subgroup_part']['text']}")
                if "chart" in rec:
                    out.line(f"chart: h={rec['chart']['h']} alpha={rec['chart']['alpha']}")
        else:
            result = reduce(f, tag, args.s_prec, args.t_prec)
            v = verify_reduction(f, result)
            rec = normal_form_record(result)
            if not verify_only:
                out.put("result", rec)
                out.line(f"m: {rec['m']}")
                for n, c in rec["components"].items():
                    out.line(f"{n}: {c['text']}")
                out.line(f"representative: {rec['representative']['text']}")
                out.line(f"witness: {rec['witness']['text']}")
                w = result.window
                out.line(f"window: s^{w.outer_lo}..s^{w.outer_hi - 1}, inner bounds {dict(w.inner_hi)}")
    _verification_lines(out, v)
    return _exit_for(v.verdict)


def cmd_reduce(args, out):
    return _reduce_any(args, out)


def cmd_verify(args, out):
    return _reduce_any(args, out, verify_only=True)


def cmd_coset_eq(args, out):
    from .verify import coset_equal
    _precisions(args)
    ring = _ring(args)
    tag, caveat = _quotient(args)
    try:
        f = parse_series(args.expr, ring, args.t_prec, args.s_prec, dim=1 if tag == "GR1D" else None)
        g = parse_series(args.expr2, ring, args.t_prec, args.s_prec, dim=1 if tag == "GR1D" else None)
    except ParseError as exc:
        raise UsageError(str(exc))
    same = coset_equal(f, g, tag, args.s_prec, args.t_prec)
    out.put("quotient", tag, tag)
    if caveat:
        out.put("caveat", caveat, caveat)
    out.put("equal", same, "true" if same else "false")
    note = ("exact" if tag == "GR1D" else
            f"decided on the common window (t-prec {args.t_prec}, s-prec {args.s_prec})")
    out.put("scope", note, note)
    return EXIT_OK


def cmd_decompose(args, out):
    ring = _ring(args)
    try:
        f = parse_series(args.expr, ring, args.t_prec, args.s_prec, dim=1)
    except ParseError as exc:
        raise UsageError(str(exc))
    dec = unit_decompose(f)
    out.put("input", args.expr, args.expr)
    out.put("h", dec.h, str(dec.h))
    groups = []
    for k, (deg, factors) in enumerate(dec.groups):
        part = dec.restriction(k)
        groups.append({"degree": deg, "factors": list(factors), "summand": series_record(part)})
        out.line(f"group {k}: degree {deg}, factors {list(factors)}: {format_series(part)}")
    out.put("groups", groups)
    ok = dec.check()
    out.put("check", ok, "verified" if ok else "failed")
    return EXIT_OK if ok else EXIT_MATH


def cmd_bound(args, out):
    from .gm import nested_positive_bound
    ring = _ring(args)
    try:
        eps = [parse_series(e, ring, args.t_prec, args.s_prec, dim=1) for e in args.eps]
    except ParseError as exc:
        raise UsageError(str(exc))
    try:
        b = nested_positive_bound(eps, exhaustive=not args.no_check)
    except ValueError as exc:
        out.put("error", str(exc), str(exc))
        return EXIT_MATH
    out.put("epsilons", [format_series(e) for e in eps], ", ".join(format_series(e) for e in eps))
    for k in ("d", "Q", "M"):
        out.put(k, getattr(b, k), str(getattr(b, k)))
    if not args.no_check:
        out.put("vanishes", b.vanishes, "yes" if b.vanishes else "NO")
        out.put("first_vanishing_length", b.first_vanishing_length, str(b.first_vanishing_length))
        out.put("sequences", b.sequences, str(b.sequences))
    return EXIT_OK if b.vanishes else EXIT_MATH


def cmd_fiber(args, out):
    if args.tag:
        try:
            fr = fiber_ring(args.tag)
        except ValueError as exc:
            raise UsageError(str(exc))
        out.put("fiber", fr.as_dict())
        out.line(str(fr))
        return EXIT_OK
    if args.geom:
        try:
            m = geometric_to_quotient(args.geom)
        except ValueError as exc:
            raise UsageError(str(exc))
        from .gm import QUOTIENTS
        amb, sub = QUOTIENTS[m.quotient]
        out.put("geometric", m.as_dict(), f"{m.name} -> {m.quotient}")
        out.put("rings", {"ambient": amb, "subgroup": sub},
                f"{SUBRING_DESCRIPTIONS[amb]}^* / {SUBRING_DESCRIPTIONS[sub]}^*")
        if m.caveat:
            out.put("caveat", m.caveat, m.caveat)
        return EXIT_OK
    for fr in FIBERS.values():
        out.line(f"{fr.tag}: {fr}")
    out.put("fibers", [fr.as_dict() for fr in FIBERS.values()])
    return EXIT_OK


def cmd_selftest(args, out):
    from .selftest import run_selftest
    results = run_selftest(quick=not args.full)
    ok = True
    recs = []
    for name, passed, detail in results:
        ok = ok and passed
        recs.append({"name": name, "passed": passed, "detail": detail})
        out.line(f"{'PASS' if passed else 'FAIL'} {name}" + (f": {detail}" if detail else ""))
    out.put("checks", recs)
    out.put("passed", ok, "all passed" if ok else "failures")
    return EXIT_OK if ok else EXIT_MATH


# -- parser ----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="doubleloop", description="Normal forms for double loop Grassmannians.")
    p.add_argument("--version", action="version", version=f"doubleloop {__version__}")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    for name, fn, helptext in (("reduce", cmd_reduce, "canonical representative with its verdict"),
                               ("verify", cmd_verify, "reduce and report only the verification")):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("--group", choices=("gm", "ga", "tower"), default="gm")
        sp.add_argument("--tower", default="tower(Gm,Gm,Ga[a^-1 d])", help="tower descriptor for --group tower")
        _common(sp)
        sp.set_defaults(func=fn)
    sp = sub.add_parser("coset-eq", help="compare two classes on the common window")
    _common(sp)
    sp.add_argument("--expr2", required=True)
    sp.set_defaults(func=cmd_coset_eq)
    sp = sub.add_parser("decompose", help="unit decomposition of a one-variable series")
    _common(sp, quotient=False)
    sp.set_defaults(func=cmd_decompose)
    sp = sub.add_parser("bound", help="nested positive-part bound M = 3Q")
    _common(sp, expr=False, quotient=False)
    sp.add_argument("--eps", action="append", required=True, help="one epsilon; repeat for several")
    sp.add_argument("--no-check", action="store_true", help="skip the exhaustive vanishing check")
    sp.set_defaults(func=cmd_bound)
    sp = sub.add_parser("fiber", help="fiber rings of the model flag")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--tag", help="flag tag, e.g. Zhat_aff")
    g.add_argument("--geom", help="geometric Grassmannian name, e.g. geomJet")
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_fiber)
    sp = sub.add_parser("selftest", help="run the built-in consistency checks")
    sp.add_argument("--full", action="store_true", help="include the slower checks")
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_selftest)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"doubleloop: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.command is None:
        parser.print_help(sys.stderr)
        return EXIT_USAGE
    out = Output(args, args.command)
    try:
        code = args.func(args, out)
    except UsageError as exc:
        print(f"doubleloop: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NotInvertible, Indeterminate, ValueError, ArithmeticError) as exc:
        out.put("error", f"{type(exc).__name__}: {exc}", f"{type(exc).__name__}: {exc}")
        code = EXIT_MATH
    text = out.render()
    sys.stdout.write(text)
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
