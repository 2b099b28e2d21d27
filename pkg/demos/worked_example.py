"""Reduce the standard non-reduced 1-sharbly over Q(sqrt 2), step by step.

Run with ``python3 demos/worked_example.py``.
"""

from vreduce import LiftedChain, LiftedSharbly1, field, is_voronoi_reduced, reduce_chain, reducing_point, subdivide
from vreduce.gl2 import Vec2

F = field(2)

T = LiftedSharbly1([
    Vec2(F(3, 1), F(0, 1)),
    Vec2(F(4, 4), F(-1, 5)),
    Vec2(F(-4, 3), F(-5, -3)),
])


def show(tri, indent="  "):
    cols = ", ".join(f"({v.x1}, {v.x2})" for v in tri.verts)
    print(f"{indent}[{cols}]  sizes {tri.sizes()}")


print("T:")
show(T)

print("\nreducing points of the three edges:")
for (x, y), M in zip(T.edge_pairs(), T.lifts):
    u = reducing_point(x, y, M)
    print(f"  ({x.x1}, {x.x2}) -- ({y.x1}, {y.x2})  ->  ({u.x1}, {u.x2})")

first = subdivide(T)
print(f"\nfirst subdivision: case {first.case}")
for child in first.children:
    show(child)

out, trace = reduce_chain(LiftedChain(2, [(1, T)]))
print(f"\nreduction finished after {trace.passes} passes, case counts {trace.case_counts()}")
for i, table in enumerate(trace.size_tables, 1):
    print(f"  pass {i}: {table}")

print(f"\noutput: {len(out)} reduced 1-sharblies")
for s, c in out.items():
    assert is_voronoi_reduced(s)
    print(f"  {c:+d} {s}")
