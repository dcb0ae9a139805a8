"""Certified lower bounds on the real line converging to the closed form.

Step functions on a grid are genuine members of every Lp space, so any
evaluated ratio is a true lower bound for Y(p1, p2; R).  The convolution
of two step functions is computed exactly as a piecewise-linear function
(discrete convolution at the knots) and its Lp norm by per-interval
Gauss-Legendre quadrature; naive cell sampling would let point masses push
every ratio to 1 and destroy the convergence seen here.
"""

import numpy as np

from youngconv import (
    EstimatorConfig,
    GroupFunction,
    beckner_Y_Rn,
    estimate,
    gaussian_ansatz,
    make_real_line,
    young_p,
    young_ratio,
)

ex = young_p("4/3", "4/3")
target = beckner_Y_Rn("4/3", "4/3", 1)
print(f"target: Y(4/3, 4/3; R) = {target:.10f}")

print("\n== hand-picked pairs give certified lower bounds ==")
line = make_real_line(0.05, 8.0)
box = GroupFunction(line, np.where(np.abs(line.centers) < 0.5, 1.0, 0.0))
print(f"  unit boxes:        {young_ratio(box, box, ex):.6f}")
ratio, s1, s2 = gaussian_ansatz(ex)
g1 = GroupFunction(line, np.exp(-line.centers**2 / (2 * s1 * s1)))
g2 = GroupFunction(line, np.exp(-line.centers**2 / (2 * s2 * s2)))
print(f"  matched gaussians: {young_ratio(g1, g2, ex):.6f}")
print(f"  (gaussian ansatz, grid-free closed forms: {ratio:.10f})")

print("\n== alternating maximization from random starts ==")
for h, half_width in [(0.2, 4.0), (0.1, 6.0), (0.05, 8.0)]:
    model = make_real_line(h, half_width)
    report = estimate(model, ex, EstimatorConfig(restarts=8, max_iters=400))
    gap = target - report.lower_bound
    print(
        f"  h={h:4} L={half_width}: lower bound {report.lower_bound:.8f}"
        f"   (gap to closed form {gap:.2e})"
    )
print(
    "\nthe three grids are nested, so the lower bounds increase with\n"
    "refinement and approach the closed-form constant from below"
)
