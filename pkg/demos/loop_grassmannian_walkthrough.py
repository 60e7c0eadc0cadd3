"""Walk one element through every two-variable quotient.

Run with ``python3 demos/loop_grassmannian_walkthrough.py``.
"""

from doubleloop import parse_iter, parse_ring, reduce, verify_reduction
from doubleloop.gm import TWO_VARIABLE

ring = parse_ring("Q[e]/(e^2)")
f = parse_iter("(1 + t) * (1 - e*(1 + t^-1)*s^-1)", ring)
print("input:", f)

for q in TWO_VARIABLE:
    try:
        r = reduce(f, q, 6, 6)
    except ValueError as exc:
        # GRJ only accepts power series in s
        print(f"{q:6s} not defined here ({exc})")
        continue
    v = verify_reduction(f, r)
    print(f"{q:6s} m={r.m}  rep={r.representative.truncate(4)}  [{v.verdict}]")
