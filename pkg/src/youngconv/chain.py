"""Executable replay of the subgroup bound through coset functionals.

For a finite subgroup pair and an interior triple, the twisted convolution
on G decomposes through three coset functionals built from fibers over H:

    S(x)     = sum_h phi1(h g_x)^p1 * delta(g_x)
    T(x, x') = sum_h phi2(g_x^-1 h g_x')^p2 * delta(g_x')
    U(x, x') = sum_h phi2(g_x^-1 h g_x')^p2 Delta(g_x^-1 h g_x')
               * delta(g_x) / delta(h)

with g_x the coset representatives.  Everything here is an exact finite
sum, so the integral identities hold to float roundoff and every
inequality of the chain (Young's inequality on H applied fiberwise, two
weighted Hoelder steps, one Minkowski step, and the final contraction) can
be asserted step by step.  The chain ends at

    ||phi1 * (phi2 Delta^(1/p1'))||_p <= Y(p1, p2; H),

the subgroup monotonicity of the optimal constant.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .convolution import lp_norm, twisted_convolve
from .exponents import YoungExponents
from .groups import GroupFunction
from .quotient import FiniteSubgroupPair


class ChainError(ValueError):
    """Non-finite intermediates or an unsupported pair."""


@dataclass
class ChainObjects:
    """Coset functionals of one (pair, exponents, phi1, phi2) instance."""

    pair: FiniteSubgroupPair
    ex: YoungExponents
    phi1: np.ndarray  # normalized to unit p1 norm
    phi2: np.ndarray  # normalized to unit p2 norm
    S: np.ndarray  # (nx,)
    T: np.ndarray  # (nx, nx)
    U: np.ndarray  # (nx, nx)
    rep_independence_residual: float

    @property
    def n_cosets(self):
        return self.pair.n_cosets


def _stu(pair, ex, v1, v2, reps):
    g = pair.group
    h_idx = pair.h_indices
    delta = pair.delta
    delta_h = delta[h_idx]
    big_delta = g.delta
    p1f, p2f = float(ex.p1), float(ex.p2)
    nx = reps.size
    inv_reps = g.inv[reps]
    s_mat = np.empty(nx)
    t_mat = np.empty((nx, nx))
    u_mat = np.empty((nx, nx))
    for x, rep in enumerate(reps):
        hg = g.table[h_idx, rep]
        s_mat[x] = float(np.sum(v1[hg] ** p1f)) * delta[rep]
    for x, rep in enumerate(reps):
        ginv = inv_reps[x]
        for xp, repp in enumerate(reps):
            mids = g.table[np.full_like(h_idx, ginv), g.table[h_idx, repp]]
            powers = v2[mids] ** p2f
            t_mat[x, xp] = float(np.sum(powers)) * delta[repp]
            u_mat[x, xp] = float(
                np.sum(powers * big_delta[mids] / delta_h)
            ) * delta[rep]
    return s_mat, t_mat, u_mat


def build_coset_functionals(
    pair: FiniteSubgroupPair, ex: YoungExponents, phi1: GroupFunction, phi2: GroupFunction
) -> ChainObjects:
    """Compute S, T, U (inputs normalized first) and check that a different
    choice of coset representatives reproduces them exactly."""
    if not isinstance(pair, FiniteSubgroupPair):
        raise ChainError("the chain harness runs on finite subgroup pairs only")
    if not ex.interior:
        raise ChainError("interior triples only")
    v1 = np.asarray(phi1.values, dtype=float)
    v2 = np.asarray(phi2.values, dtype=float)
    if np.any(v1 < 0) or np.any(v2 < 0):
        raise ChainError("nonnegative functions only")
    v1 = v1 / lp_norm(phi1, ex.p1)
    v2 = v2 / lp_norm(phi2, ex.p2)
    s_mat, t_mat, u_mat = _stu(pair, ex, v1, v2, pair.reps)
    for arr in (s_mat, t_mat, u_mat):
        if not np.all(np.isfinite(arr)):
            raise ChainError("non-finite coset functional")
    alt = _alternate_reps(pair)
    s2, t2, u2 = _stu(pair, ex, v1, v2, alt)
    resid = max(
        _rel_gap(s_mat, s2), _rel_gap(t_mat, t2), _rel_gap(u_mat, u2)
    )
    return ChainObjects(pair, ex, v1, v2, s_mat, t_mat, u_mat, resid)


def _alternate_reps(pair):
    alt = pair.reps.copy()
    for x in range(pair.reps.size):
        members = np.sort(pair.group.table[pair.h_indices, pair.reps[x]])
        if members.size > 1:
            alt[x] = members[1]
    return alt


def _rel_gap(a, b):
    scale = max(float(np.abs(a).max()), 1e-300)
    return float(np.abs(a - b).max()) / scale


@dataclass
class CheckReport:
    name: str
    residual: float
    tolerance: float

    @property
    def passed(self):
        return self.residual <= self.tolerance

    def __str__(self):
        flag = "ok" if self.passed else "FAIL"
        return f"{self.name}: residual {self.residual:.3e} (tol {self.tolerance:.1e}) {flag}"


def identity_checks(po: ChainObjects, tol: float = 1e-10):
    """The exact integral identities of the coset functionals.

    * sum_x m_x S(x) = ||phi1||_p1^p1 (= 1)
    * sum_x' m_x' T(x, x') = ||phi2||_p2^p2 for every x
    * sum_x m_x U(x, x') = ||phi2||_p2^p2 for every x'
    * the pointwise decomposition of the twisted convolution through
      s, t, u at every (h', x').
    """
    pair, ex = po.pair, po.ex
    m = pair.coset_measure
    reports = [
        CheckReport("S-integral", abs(float(m @ po.S) - 1.0), tol),
        CheckReport(
            "T-integral", float(np.abs(po.T @ m - 1.0).max()), tol
        ),
        CheckReport(
            "U-integral", float(np.abs(m @ po.U - 1.0).max()), tol
        ),
    ]
    reports.append(
        CheckReport("convolution-decomposition", _decomposition_residual(po), tol)
    )
    return reports


def _fiber_f(po: ChainObjects):
    """F(x, h', x') = sum_h s t u delta(h^-1 h')^(1/p1') at representatives."""
    pair, ex = po.pair, po.ex
    g = pair.group
    h_idx = pair.h_indices
    delta = pair.delta
    big_delta = g.delta
    reps = pair.reps
    inv_reps = g.inv[reps]
    p1f, p2f, pf = float(po.ex.p1), float(po.ex.p2), float(po.ex.p)
    inv_p1c = 1.0 - 1.0 / p1f  # 1/p1'
    nx, nh = reps.size, h_idx.size
    f = np.zeros((nx, nh, nx))
    for x, rep in enumerate(reps):
        s_vals = po.phi1[g.table[h_idx, rep]] * delta[rep] ** (1.0 / p1f)
        for hp_i, hp in enumerate(h_idx):
            hp_inv = g.inv[hp]
            for xp, repp in enumerate(reps):
                total = 0.0
                for h_i, h in enumerate(h_idx):
                    # t((h'^-1 h) g_x, g_x')
                    left = g.table[g.table[hp_inv, h], rep]
                    t_arg = g.table[g.inv[left], repp]
                    t_val = (po.phi2[t_arg] ** p2f * delta[repp]) ** (1.0 / pf)
                    # u(g_x, h^-1 h', g_x')
                    k = g.table[g.inv[h], hp]
                    mid = g.table[g.table[inv_reps[x], k], repp]
                    u_val = (
                        po.phi2[mid] ** p2f
                        * big_delta[mid]
                        * delta[rep]
                        / delta[k]
                    ) ** inv_p1c
                    total += s_vals[h_i] * t_val * u_val * delta[k] ** inv_p1c
                f[x, hp_i, xp] = total
    return f


def _decomposition_residual(po: ChainObjects):
    pair, ex = po.pair, po.ex
    g = pair.group
    conv = twisted_convolve(
        GroupFunction(g, po.phi1), GroupFunction(g, po.phi2), ex
    ).values
    f = _fiber_f(po)
    m = pair.coset_measure
    pf = float(ex.p)
    worst = 0.0
    scale = max(float(np.abs(conv).max()), 1e-300)
    for hp_i, hp in enumerate(pair.h_indices):
        for xp, repp in enumerate(pair.reps):
            lhs = conv[g.table[hp, repp]]
            rhs = float(m @ f[:, hp_i, xp]) / pair.delta[repp] ** (1.0 / pf)
            worst = max(worst, abs(lhs - rhs))
    return worst / scale


def generalized_holder(weights, factors, exponent_matrix, c_weights) -> float:
    """RHS - LHS of the weighted multi-factor Hoelder inequality

        (int prod_j f_j^(pbar_j))^c <= prod_i (int prod_j f_j^(P_ij))^(c_i),

    c = sum c_i and pbar_j = sum_i P_ij c_i / c, on a finite measure space
    given by ``weights``.  Nonnegative result means the inequality holds.
    """
    w = np.asarray(weights, dtype=float)
    fs = [np.asarray(f, dtype=float).ravel() for f in factors]
    P = np.asarray(exponent_matrix, dtype=float)
    c = np.asarray(c_weights, dtype=float)
    if P.shape != (c.size, len(fs)):
        raise ValueError(
            f"exponent matrix shape {P.shape} does not match "
            f"{c.size} weights x {len(fs)} factors"
        )
    if np.any(c <= 0):
        raise ValueError("c weights must be positive")
    csum = float(c.sum())
    pbar = (c @ P) / csum
    lhs_int = float(np.sum(w * np.prod([f**e for f, e in zip(fs, pbar)], axis=0)))
    lhs = lhs_int**csum
    rhs = 1.0
    for i in range(c.size):
        rhs *= float(
            np.sum(w * np.prod([f**e for f, e in zip(fs, P[i])], axis=0))
        ) ** float(c[i])
    return rhs - lhs


@dataclass
class ChainReport:
    steps: list = field(default_factory=list)
    end_to_end_lhs: float = 0.0
    end_to_end_bound: float = 0.0
    direct_norm: float = 0.0

    @property
    def passed(self):
        return all(s.passed for s in self.steps)

    @property
    def first_failure(self):
        for s in self.steps:
            if not s.passed:
                return s.name
        return None


def chain_check(po: ChainObjects, y_h: float = 1.0, tol: float = 1e-10) -> ChainReport:
    """Assert every intermediate inequality of the subgroup bound in order.

    ``y_h`` must be an exact or certified value of the optimal constant of
    H (1 for finite H).  Residuals are violations max(0, LHS - RHS) in
    relative scale; identities enter as absolute deviations.
    """
    pair, ex = po.pair, po.ex
    m = pair.coset_measure
    p1f, p2f, pf = float(ex.p1), float(ex.p2), float(ex.p)
    inv_p1c = 1.0 - 1.0 / p1f
    f = _fiber_f(po)
    report = ChainReport()

    # per-x' Minkowski: sum_h' (sum_x m F)^p <= (sum_x m (sum_h' F^p)^(1/p))^p
    fx = np.einsum("x,xhy->hy", m, f)  # (nh, nx')
    lhs_mink = np.sum(fx**pf, axis=0)  # per x'
    inner = np.sum(f**pf, axis=1) ** (1.0 / pf)  # (nx, nx')
    rhs_mink = (m @ inner) ** pf
    report.steps.append(
        CheckReport("minkowski", _violation(lhs_mink, rhs_mink), tol)
    )

    # Young on H, fiberwise: (sum_h' F^p)^(1/p) <= y_h S^(1/p1) ||t u||_{p2,H}
    tu_norm = _tu_norms(po)  # (nx, nx')
    lhs_young = np.sum(f**pf, axis=1) ** (1.0 / pf)
    rhs_young = y_h * po.S[:, None] ** (1.0 / p1f) * tu_norm
    report.steps.append(
        CheckReport("young-on-H", _violation(lhs_young, rhs_young), tol)
    )

    # Hoelder step 1: ||t u||_{p2,H} <= T^(1/p) U^(1/p1')
    rhs_h1 = po.T ** (1.0 / pf) * po.U**inv_p1c
    report.steps.append(CheckReport("holder-H", _violation(tu_norm, rhs_h1), tol))

    # Hoelder step 2 on X, per x' (unit norms):
    # (sum_x m S^(1/p1) T^(1/p) U^(1/p1'))^p <= sum_x m S T
    lhs_h2 = (
        m @ (po.S[:, None] ** (1.0 / p1f) * po.T ** (1.0 / pf) * po.U**inv_p1c)
    ) ** pf
    rhs_h2 = m @ (po.S[:, None] * po.T)
    report.steps.append(CheckReport("holder-X", _violation(lhs_h2, rhs_h2), tol))

    # final contraction: sum_x' m sum_x m S T = sum_x m S = 1
    total = float(m @ ((po.S[:, None] * po.T) @ m))
    report.steps.append(CheckReport("contraction", abs(total - 1.0), tol))

    # end to end: ||psi||_p^p = sum_x' m delta(rep') sum_h' psi(h' rep')^p,
    # and psi(h' g')^p = (m @ F)^p / delta(g'), so the delta factors cancel
    norm_p = float(m @ lhs_mink)
    report.end_to_end_lhs = norm_p ** (1.0 / pf)
    report.end_to_end_bound = y_h
    conv = twisted_convolve(
        GroupFunction(pair.group, po.phi1), GroupFunction(pair.group, po.phi2), ex
    )
    report.direct_norm = conv.lp_norm(ex.p)
    report.steps.append(
        CheckReport(
            "end-to-end",
            max(0.0, report.end_to_end_lhs - y_h),
            tol,
        )
    )
    report.steps.append(
        CheckReport(
            "decomposed-vs-direct",
            abs(report.end_to_end_lhs - report.direct_norm)
            / max(report.direct_norm, 1e-300),
            tol,
        )
    )
    return report


def _tu_norms(po: ChainObjects):
    """||h -> t(h^-1 g_x, g_x') u(g_x, h, g_x')||_{p2, H} for all (x, x')."""
    pair, ex = po.pair, po.ex
    g = pair.group
    h_idx = pair.h_indices
    delta = pair.delta
    big_delta = g.delta
    reps = pair.reps
    inv_reps = g.inv[reps]
    p1f, p2f, pf = float(ex.p1), float(ex.p2), float(ex.p)
    inv_p1c = 1.0 - 1.0 / p1f
    nx, nh = reps.size, h_idx.size
    out = np.empty((nx, nx))
    for x, rep in enumerate(reps):
        for xp, repp in enumerate(reps):
            total = 0.0
            for h in h_idx:
                # t(h^-1 g_x, g_x') = (phi2((h^-1 g_x)^-1 g_x')^p2 delta)^1/p
                left = g.table[g.inv[h], rep]
                t_arg = g.table[g.inv[left], repp]
                t_val = (po.phi2[t_arg] ** p2f * delta[repp]) ** (1.0 / pf)
                mid = g.table[g.table[inv_reps[x], h], repp]
                u_val = (
                    po.phi2[mid] ** p2f * big_delta[mid] * delta[rep] / delta[h]
                ) ** inv_p1c
                total += (t_val * u_val) ** p2f
            out[x, xp] = total ** (1.0 / p2f)
    return out


def _violation(lhs, rhs):
    """Worst relative violation of lhs <= rhs (0 when the bound holds)."""
    scale = max(float(np.abs(rhs).max()), 1e-300)
    return max(0.0, float(np.max(np.asarray(lhs) - np.asarray(rhs))) / scale)
