"""Closed-form optimal constants and the catalog bound calculus.

The optimal constant Y(p1, p2; G) of the convolution inequality

    ||phi1 * (phi2 Delta^(1/p1'))||_p <= Y ||phi1||_p1 ||phi2||_p2

is exactly 1 on boundary triples (p1 = 1, p2 = 1 or 1/p1 + 1/p2 = 1), is
given on R^n by Beckner's closed form, and for a connected Lie group G in
class A is bounded by Y(R)^(dim G - r(G)) where r(G) is the dimension of
the maximal compact subgroups.
"""

import math

from youngconv import (
    beckner_B,
    beckner_Y_Rn,
    boundary_value,
    builtin_catalog,
    holder_conjugate,
    max_compact_bound,
    neg_log_constant,
    nielsen_exact,
    young_p,
)

print("== exponent arithmetic (exact rationals, inf is exact) ==")
for p in ("1", "4/3", "2", "4", "inf"):
    print(f"  p = {p:4s} -> p' = {holder_conjugate(p)}")
ex = young_p("4/3", "4/3")
print(f"  (4/3, 4/3) solves to p = {ex.p}, boundary: {ex.boundary}")
print(f"  (2, 2)     solves to p = {young_p(2, 2).p} (boundary, constant 1)")

print("\n== Beckner's constant on R ==")
for p1, p2 in [("4/3", "4/3"), ("3/2", "3/2"), ("5/4", "10/7"), (2, 2)]:
    ex = young_p(p1, p2)
    y = beckner_Y_Rn(p1, p2, 1)
    tag = " (boundary)" if boundary_value(ex) else ""
    print(f"  Y({p1}, {p2}; R)   = {y:.10f}{tag}")
print(f"  B(4/3) = (4/3)^(3/4) / 4^(1/4) = {beckner_B('4/3'):.10f}")
print(f"  power law: Y(R^2) = Y(R)^2 = {beckner_Y_Rn('4/3', '4/3', 2):.10f}")

print("\n== catalog bounds: Y <= Y(R)^(dim - r) ==")
ex = young_p("4/3", "4/3")
for desc in builtin_catalog():
    if not desc.flag("in_class_A"):
        continue
    bound = max_compact_bound(desc, ex)
    exact = nielsen_exact(desc, ex)
    line = f"  {desc.name:12s} dim={desc.dim} r={desc.r}  bound={bound:.6f}"
    if exact is not None:
        line += f"  exact={exact:.6f}"
    print(line)

print("\n== the -ln calculus behind the bound ==")
y = beckner_Y_Rn("4/3", "4/3", 1)
d1 = neg_log_constant(y)
print(f"  d(R)  = -ln Y(R)  = {d1:.10f}")
print(f"  d(R^3) = 3 d(R)   = {neg_log_constant(y**3):.10f}")
print(
    "  superadditive under extensions, zero on compact groups; summing the\n"
    "  per-factor contributions is exactly the dim - r exponent above"
)
assert math.isclose(neg_log_constant(y**3), 3 * d1, rel_tol=1e-12)
