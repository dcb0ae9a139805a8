"""The ax+b group: a non-unimodular model and its twisted convolution.

The affine group {x -> a x + b, a > 0} has left Haar measure da db / a^2
and modular function Delta(a, b) = 1/a, so the inequality needs the
twisted convolution phi1 * (phi2 Delta^(1/p1')).  The model lives on a
uniform grid in (u, b) with u = log a; the convention Delta = 1/a is
validated numerically, never assumed.
"""

import numpy as np

from youngconv import (
    EstimatorConfig,
    GroupFunction,
    beckner_Y_Rn,
    check_modular_identity,
    estimate,
    make_affine_group,
    transform_identity_check,
    young_p,
)

ex = young_p("4/3", "4/3")
aff = make_affine_group(0.05, 1.0, 0.05, 2.0)
print(f"model: {aff.name} ({aff.size} cells)")


def bump(cu, cb, su, sb):
    uu = aff.u_centers[:, None]
    bb = aff.b_centers[None, :]
    return np.exp(-((uu - cu) ** 2) / (2 * su**2) - ((bb - cb) ** 2) / (2 * sb**2))


print("\n== the modular identity int phi(g^-1) dg = int phi/Delta dg ==")
phi = GroupFunction(aff, bump(0.0, 0.0, 0.25, 0.18))
print(f"  residual on a bump: {check_modular_identity(aff, phi):.2e}")

print("\n== the reversal identity for the twisted convolution ==")
f1 = GroupFunction(aff, bump(0.05, 0.1, 0.25, 0.25))
f2 = GroupFunction(aff, bump(-0.05, -0.1, 0.3, 0.3))
print(f"  max relative residual: {transform_identity_check(f1, f2, ex):.2e}")

print("\n== estimated lower bound vs the exact value ==")
exact = beckner_Y_Rn("4/3", "4/3", 1) ** 2  # dim 2, max compact dim 0
report = estimate(
    make_affine_group(0.05, 1.5, 0.05, 3.0),
    ex,
    EstimatorConfig(restarts=3, max_iters=50, tol=1e-8),
)
print(f"  exact value (simply connected solvable): {exact:.8f}")
print(f"  estimated lower bound:                   {report.lower_bound:.8f}")
print(f"  truncation diagnostic:                   {report.truncation_mass:.2e}")
print(
    "\nnon-abelian and non-unimodular, yet the alternating ascent walks the\n"
    "grid ratio right up to the exact constant from below"
)
