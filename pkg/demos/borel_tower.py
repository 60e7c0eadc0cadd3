"""Reduce an upper triangular 2x2 loop matrix modulo the positive loops."""

from doubleloop import BOREL, parse_ring, parse_tower_element, reduce_tower, verify_tower
from doubleloop.tower import to_matrix

E = parse_ring("Q[e]/(e^2)")
g = parse_tower_element("(t*(1 + e*s^-1), 1 + t^-1*s, t^-2 + e*s^-1 + t*s)", BOREL, E)

for row in to_matrix(g):
    print("  ", " | ".join(str(x.truncate(3)) for x in row))

red = reduce_tower(g, "GRL", 4, 4)
for layer, c in zip(("a", "d", "u"), red.representative.coords):
    print(layer, "->", c.truncate(3))
print("check:", verify_tower(g, red).verdict)
