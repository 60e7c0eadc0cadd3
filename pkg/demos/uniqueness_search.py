"""Exhaustive uniqueness over a finite window, and what breaks it."""

from doubleloop import brute_force_uniqueness, parse_ring

F2E = parse_ring("F2[e]/(e^2)")

rep = brute_force_uniqueness(F2E, "GR1D", ((-1, 1), (-1, 1)))
print("GR1D over F2[e]:", "unique" if rep.ok else "collision", f"({rep.sigma_count} representatives, {rep.pairs_covered} pairs)")

# one extra degree of freedom in the representative family is enough for a collision
rep = brute_force_uniqueness(F2E, "GR1D", ((-1, 1), (-1, 1)), slack=2)
print("with slack 2:", "unique" if rep.ok else "collision")

for method in ("linear", "literal"):
    rep = brute_force_uniqueness(F2E, "GRL", ((-1, 0), (-1, 0)), method=method)
    print(f"GRL ({method}):", rep.ok, rep.pairs_covered, "pairs")
