"""Fast consistency checks behind ``doubleloop selftest``.

Each check returns ``(name, passed, detail)``.  The quick suite runs in a few
seconds; ``quick=False`` adds the exhaustive uniqueness windows and larger
random batches.
"""

from __future__ import annotations

import random
import time

from . import flags
from .gm import TWO_VARIABLE, reduce, reduce_gr1d, reduce_grj, reduce_lsigma_mod_jsigma
from .parse import format_series, parse_iter, parse_ring, parse_series
from .series import Indeterminate


def _pinned():
    E = parse_ring("Q[e]/(e^2)")
    Q = parse_ring("Q")
    problems = []
    r = reduce_gr1d(parse_series("1 + e*t^-1 + t", E), 8)
    if format_series(r.representative) != "e*t^-1 + 1":
        problems.append(f"gr1d gave {format_series(r.representative)}")
    r = reduce_grj(parse_iter("(1 + e*t^-1) + t*s", E), 6, 6)
    if [j for j, sl in r.representative.coeffs.items() if j > 0 and sl.coeffs]:
        problems.append("grj example has higher slices")
    rep, _, _ = reduce_lsigma_mod_jsigma(parse_iter("1 - e*(1+t^-1)*s^-1", E))
    if format_series(rep) != "-e*t^-1*s^-1 + 1":
        problems.append(f"lsigma gave {format_series(rep)}")
    r = reduce_grj(parse_iter("1 + (t^-1 + t)*s", Q), 6, 4)
    got = {j: format_series(sl) for j, sl in r.representative.coeffs.items() if sl.coeffs}
    want = {0: "1", 1: "t^-1", 3: "t^-1", 5: "2*t^-1"}
    if got != want:
        problems.append(f"grj slices {got}")
    return problems


def _coset(rng: random.Random, pairs: int):
    from .generators import ambient_unit, subgroup_unit
    ring = parse_ring("Q[e]/(e^2)")
    bad = []
    for q in ("GR1D",) + TWO_VARIABLE:
        for _ in range(pairs):
            f = ambient_unit(ring, q, rng, 1, 1)
            h = subgroup_unit(ring, q, rng, 1, 1)
            a, b = reduce(f, q, 3, 3), reduce(f * h, q, 3, 3)
            if not a.same_class(b):
                bad.append(f"{q}: {format_series(f)}")
    return bad


def _towers(rng: random.Random, n: int):
    from .generators import tower_element
    from .tower import BOREL, _agree, matmul, matrix_membership, reduce_tower, to_matrix, tower_mul
    ring = parse_ring("Q[e]/(e^2)")
    bad = []
    for _ in range(n):
        g = tower_element(BOREL, ring, "GRBIG", rng)
        h = tower_element(BOREL, ring, "GRBIG", rng)
        lhs, rhs = to_matrix(tower_mul(g, h)), matmul(to_matrix(g), to_matrix(h))
        if not all(_agree(lhs[i][j], rhs[i][j]) for i in range(2) for j in range(2)):
            bad.append(f"product {g} * {h}")
    for q in TWO_VARIABLE:
        g = tower_element(BOREL, ring, q, rng)
        red = reduce_tower(g, q, 3, 3)
        back = matmul(to_matrix(red.representative), to_matrix(red.factor))
        G = to_matrix(g)
        if not all(_agree(back[i][j], G[i][j]) for i in range(2) for j in range(2)):
            bad.append(f"{q}: M*Q differs from g")
        if not matrix_membership(to_matrix(red.factor), q):
            bad.append(f"{q}: Q leaves the subgroup")
    return bad


def _uniqueness(windows: int, quotients):
    from .uniqueness import brute_force_uniqueness
    bad = []
    for text in ("F2", "F2[e]/(e^2)"):
        ring = parse_ring(text)
        for q in quotients:
            rep = brute_force_uniqueness(ring, q, ((-windows, windows), (-windows, windows)), method="linear")
            if not rep.ok:
                bad.append(f"{q} over {text}: {rep.violations[:1]}")
    return bad


def run_selftest(quick: bool = True, seed: int = 0) -> list:
    rng = random.Random(seed)
    checks = [
        ("fiber table round trip", lambda: flags.round_trip_problems()),
        ("pinned examples", _pinned),
        ("coset invariance", lambda: _coset(rng, 5 if quick else 50)),
        ("B2 tower and matrices", lambda: _towers(rng, 10 if quick else 100)),
        ("uniqueness windows", lambda: _uniqueness(1 if quick else 2,
                                                   ("GR1D", "GRJ", "GRL", "GRBIG", "GR2"))),
    ]
    results = []
    for name, fn in checks:
        start = time.perf_counter()
        try:
            problems = fn()
        except (Indeterminate, ArithmeticError, ValueError) as exc:
            problems = [f"{type(exc).__name__}: {exc}"]
        took = f"{time.perf_counter() - start:.2f}s"
        detail = took if not problems else f"{problems[0]} ({len(problems)} problems, {took})"
        results.append((name, not problems, detail))
    return results
