"""Twisted convolution, Lp norms, and the Young ratio on group models.

The twisted convolution is phi1 * (phi2 Delta^(1/p1')), the Delta-corrected
convolution whose Lp bound defines the optimal constant on non-unimodular
groups; the Delta power is skipped exactly when p1 = 1 (exponent 0).

On the abelian step grids the convolution of two step functions is
evaluated exactly as a piecewise-(bi)linear function, and Lp norms of those
results use fixed 8-node Gauss-Legendre quadrature per knot interval.
Cell-sampled convolution would make point masses saturate the ratio at 1
and destroy convergence of the lower bounds, so it is never used there.

On the affine grid the convolution is a direct double sum over cells; the
group is non-abelian so there is no FFT shortcut, but for each pair of
log-scale rows the b-axis coupling is a Toeplitz matrix, which the code
applies as a batched 1-d convolution.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.signal import fftconvolve

from .exponents import Exponent, YoungExponents
from .groups import (
    AffineModel,
    FiniteGroup,
    GroupFunction,
    GroupModelError,
    IntegerLineModel,
    PlaneModel,
    RealLineModel,
    TorusModel,
)

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(8)
_T01 = 0.5 * (_GL_NODES + 1.0)
_W01 = 0.5 * _GL_WEIGHTS


def _pf(p) -> float:
    return float(p if isinstance(p, Exponent) else Exponent(p))


def _weighted_norm(weight, values, pf: float) -> float:
    """(sum w |v|^p)^(1/p) with overflow-safe rescaling; max for p = inf."""
    mags = np.abs(values)
    if math.isinf(pf):
        return float(mags.max()) if mags.size else 0.0
    peak = float(mags.max()) if mags.size else 0.0
    if peak == 0.0:
        return 0.0
    return peak * float(np.sum(weight * (mags / peak) ** pf)) ** (1.0 / pf)


# ---------------------------------------------------------------------------
# convolution results


class ConvolutionResult:
    """Convolution output with its own domain geometry and a certified norm."""

    def __init__(self, model, truncation_mass=0.0):
        self.model = model
        self.truncation_mass = float(truncation_mass)

    def lp_norm(self, p) -> float:
        raise NotImplementedError

    def dual_power(self, exponent: float) -> "ConvolutionResult":
        """Same domain, values raised entrywise to a positive power."""
        clone = self.__class__.__new__(self.__class__)
        clone.__dict__.update(self.__dict__)
        clone.values = np.abs(self.values) ** exponent
        return clone


class CellConvolution(ConvolutionResult):
    """Values on a weighted cell set (finite groups, integer line, affine)."""

    def __init__(self, model, values, weight, truncation_mass=0.0):
        super().__init__(model, truncation_mass)
        self.values = values
        self.weight = weight

    def lp_norm(self, p) -> float:
        return _weighted_norm(self.weight, self.values, _pf(p))


class AffineConvolution(CellConvolution):
    """Affine convolution sampled on an enlarged (u, b) grid."""

    def __init__(self, model, values, weight, u_points, b_centers, truncation_mass):
        super().__init__(model, values, weight, truncation_mass)
        self.u_points = u_points
        self.b_centers = b_centers


class LinePWL(ConvolutionResult):
    """Piecewise-linear function with equispaced knots (exact on the line)."""

    def __init__(self, model, x0, h, values, truncation_mass=0.0):
        super().__init__(model, truncation_mass)
        self.x0 = float(x0)
        self.h = float(h)
        self.values = values

    def lp_norm(self, p) -> float:
        pf = _pf(p)
        if math.isinf(pf):
            return float(np.abs(self.values).max())
        return _pwl_norm(self.values[:-1], self.values[1:], self.h, pf)


class TorusPWL(ConvolutionResult):
    """Piecewise-linear function on the circle; knots at the cell edges."""

    def __init__(self, model, values, truncation_mass=0.0):
        super().__init__(model, truncation_mass)
        self.h = model.h
        self.values = values

    def lp_norm(self, p) -> float:
        pf = _pf(p)
        if math.isinf(pf):
            return float(np.abs(self.values).max())
        return _pwl_norm(self.values, np.roll(self.values, -1), self.h, pf)


class PlanePWL(ConvolutionResult):
    """Piecewise-bilinear function on an equispaced 2-d knot grid."""

    def __init__(self, model, x0, h, values, truncation_mass=0.0):
        super().__init__(model, truncation_mass)
        self.x0 = float(x0)
        self.h = float(h)
        self.values = values

    def lp_norm(self, p) -> float:
        pf = _pf(p)
        v = self.values
        if math.isinf(pf):
            return float(np.abs(v).max())
        v00 = np.abs(v[:-1, :-1])[..., None, None]
        v10 = np.abs(v[1:, :-1])[..., None, None]
        v01 = np.abs(v[:-1, 1:])[..., None, None]
        v11 = np.abs(v[1:, 1:])[..., None, None]
        t = _T01[:, None]
        s = _T01[None, :]
        surf = (
            v00 * (1 - t) * (1 - s)
            + v10 * t * (1 - s)
            + v01 * (1 - t) * s
            + v11 * t * s
        )
        peak = float(np.abs(v).max())
        if peak == 0.0:
            return 0.0
        cell = np.einsum("ijts,t,s->", (surf / peak) ** pf, _W01, _W01)
        return peak * float(cell * self.h * self.h) ** (1.0 / pf)


def _pwl_norm(a, b, h, pf):
    """Lp norm of linear segments a -> b of common width h (8-node Gauss)."""
    a = np.abs(np.asarray(a, dtype=float))
    b = np.abs(np.asarray(b, dtype=float))
    peak = max(a.max(initial=0.0), b.max(initial=0.0))
    if peak == 0.0:
        return 0.0
    seg = a[:, None] + (b - a)[:, None] * _T01[None, :]
    total = float(np.sum((seg / peak) ** pf @ _W01) * h)
    return peak * total ** (1.0 / pf)


# ---------------------------------------------------------------------------
# the twisted convolution


def _delta_exponent(ex: YoungExponents):
    """1/p1' as an exact Fraction; 0 exactly when p1 = 1."""
    return ex.p1.conjugate().inv


def twisted_convolve(
    phi1: GroupFunction, phi2: GroupFunction, ex: YoungExponents, enlarged: bool = True
) -> ConvolutionResult:
    """phi1 * (phi2 Delta^(1/p1')) evaluated per model kind.

    ``enlarged`` keeps the full support of the result (always the case for
    the exact abelian paths); setting it False on the affine grid evaluates
    only on the base window, the fast path used inside estimator loops.
    """
    if phi1.model is not phi2.model:
        raise GroupModelError("convolution inputs live on different models")
    de = float(_delta_exponent(ex))
    return _convolve(phi1.model, phi1.values, phi2.values, de, enlarged)


def _convolve(model, v1, v2, de, enlarged=True):
    if isinstance(model, FiniteGroup):
        return _finite_convolve(model, v1, v2, de)
    if isinstance(model, IntegerLineModel):
        vals = np.convolve(v1, v2)
        return CellConvolution(model, vals, np.ones_like(vals))
    if isinstance(model, RealLineModel):
        knots = np.concatenate(([0.0], model.h * np.convolve(v1, v2), [0.0]))
        return LinePWL(model, -2.0 * model.half_width, model.h, knots)
    if isinstance(model, TorusModel):
        full = np.convolve(v1, v2)
        folded = np.bincount(
            np.arange(full.size) % model.n, weights=full, minlength=model.n
        )
        # knot k sits at position k*h and collects pairs with i+j = k-1 mod n
        return TorusPWL(model, model.h * np.roll(folded, 1))
    if isinstance(model, PlaneModel):
        core = model.h * model.h * fftconvolve(v1, v2)
        knots = np.zeros((core.shape[0] + 2, core.shape[1] + 2))
        knots[1:-1, 1:-1] = core
        return PlanePWL(model, -2.0 * model.half_width, model.h, knots)
    if isinstance(model, AffineModel):
        return _affine_convolve(model, v1, v2, de, enlarged)
    raise GroupModelError(f"unsupported model kind {model.kind}")


def _finite_conv_index(model: FiniteGroup):
    cached = getattr(model, "_conv_index", None)
    if cached is None:
        cached = model.table[model.inv, :]
        model._conv_index = cached
    return cached


def _finite_convolve(model, v1, v2, de):
    lookup = _finite_conv_index(model)  # lookup[i, k] = index of g_i^{-1} g_k
    kernel = v2[lookup]
    if de != 0.0:
        kernel = kernel * model.delta[lookup] ** de
    return CellConvolution(model, v1 @ kernel, model.weight)


def _affine_out_b_grid(model: AffineModel):
    """Enlarged b window covering every product of two carrier points."""
    reach = (
        math.exp(model.u_half_width) * model.b_half_width + model.b_half_width
    )
    kb = int(math.ceil(reach / model.h_b))
    n_out = 2 * kb
    centers = (np.arange(n_out) - kb + 0.5) * model.h_b
    return centers


def _affine_convolve(model: AffineModel, v1, v2, de, enlarged):
    h_u, h_b = model.h_u, model.h_b
    nu, nb = model.n_u, model.n_b
    u = model.u_centers
    ku = (nu - 1) // 2  # U / h_u
    if enlarged:
        out_u = (np.arange(2 * nu - 1) - 2 * ku) * h_u
        out_b = _affine_out_b_grid(model)
        row_shift = 0
    else:
        out_u = u
        out_b = model.b_centers
        row_shift = ku  # row m = i + r - ku
    n_rows, n_out = out_u.size, out_b.size
    d = np.arange(nb + n_out - 1) - (nb - 1)
    x_d = (out_b[0] - model.b_centers[0]) + d * h_b
    scale = np.exp(-u)  # e^{-u_i}, also Delta at row i
    args = scale[:, None] * x_d[None, :]
    col = np.floor((args + model.b_half_width) / h_b).astype(int)
    valid = (col >= 0) & (col < nb)
    col = np.clip(col, 0, nb - 1)
    u_mass = scale * 2.0 * math.sinh(h_u / 2.0) * h_b  # per-row cell mass
    v1w = v1 * u_mass[:, None]
    psi = np.zeros((n_rows, n_out))
    for r in range(nu):
        row2 = v2[r]
        if not np.any(row2):
            continue
        kern = np.where(valid, row2[col], 0.0)
        contrib = fftconvolve(v1w, kern, axes=1)[:, nb - 1 : nb - 1 + n_out]
        dfac = math.exp(-de * u[r]) if de != 0.0 else 1.0
        lo = max(0, row_shift - r)
        hi = min(nu, n_rows + row_shift - r)
        psi[r + lo - row_shift : r + hi - row_shift] += dfac * contrib[lo:hi]
    out_mass = (
        np.exp(-out_u)[:, None]
        * (2.0 * math.sinh(h_u / 2.0) * h_b)
        * np.ones(n_out)[None, :]
    )
    in_mass = float(np.sum(model.weight * np.abs(v1))) * float(
        np.sum(model.weight * np.abs(v2) * model.delta**de)
    )
    covered = float(np.sum(out_mass * np.abs(psi)))
    trunc = max(0.0, in_mass - covered)
    return AffineConvolution(model, psi, out_mass, out_u, out_b, trunc)


# ---------------------------------------------------------------------------
# norms and the ratio


def lp_norm(obj, p) -> float:
    """Lp norm against left Haar weights; max over the carrier for p = inf.

    Accepts a GroupFunction (step semantics) or a ConvolutionResult (exact
    piecewise-linear quadrature where applicable).
    """
    if isinstance(obj, ConvolutionResult):
        return obj.lp_norm(p)
    if isinstance(obj, GroupFunction):
        return _weighted_norm(obj.model.weight, obj.values, _pf(p))
    raise TypeError(f"cannot take an Lp norm of {type(obj).__name__}")


def young_ratio(
    phi1: GroupFunction, phi2: GroupFunction, ex: YoungExponents, enlarged: bool = True
) -> float:
    """||phi1 * (phi2 Delta^(1/p1'))||_p / (||phi1||_p1 ||phi2||_p2).

    Scale invariant in each argument; every returned value is a lower
    bound for the optimal constant of the represented group, up to the
    truncation diagnostics of the model.  Inputs are normalized before
    convolving so large values cannot overflow.
    """
    n1 = lp_norm(phi1, ex.p1)
    n2 = lp_norm(phi2, ex.p2)
    if n1 == 0.0 or n2 == 0.0:
        raise ValueError("young_ratio needs nonzero functions")
    de = float(_delta_exponent(ex))
    conv = _convolve(phi1.model, phi1.values / n1, phi2.values / n2, de, enlarged)
    return conv.lp_norm(ex.p)


# ---------------------------------------------------------------------------
# the convolution transform identity


def transform_identity_check(
    phi1: GroupFunction, phi2: GroupFunction, ex: YoungExponents
) -> float:
    """Max relative residual of the reversal identity

        phi1 * (phi2 Delta^(1/p1'))(g')
          = [(phi2 o inv)/Delta^(1/p2)] * [(phi1 o inv)/Delta^(1/p)] (g'^-1)
            * Delta(g')^(-1/p)

    evaluated at every carrier point.  Zero up to float roundoff wherever
    carrier inversion is exact (finite groups, symmetric abelian grids);
    O(h) on the affine grid where inversion bends the b axis off the grid.
    """
    model = phi1.model
    if phi2.model is not model:
        raise GroupModelError("functions live on different models")
    de = float(_delta_exponent(ex))
    inv_p = float(ex.p.inv)
    inv_p2 = float(ex.p2.inv)
    if isinstance(model, FiniteGroup):
        lhs = _finite_convolve(model, phi1.values, phi2.values, de).values
        a = phi2.values[model.inv] / model.delta**inv_p2
        b = phi1.values[model.inv] / model.delta**inv_p
        conv0 = _finite_convolve(model, a, b, 0.0).values
        rhs = conv0[model.inv] * model.delta ** (-inv_p)
        return _max_rel(lhs, rhs)
    if isinstance(model, (RealLineModel, IntegerLineModel)):
        lhs = np.convolve(phi1.values, phi2.values)
        rhs = np.convolve(phi2.values[::-1], phi1.values[::-1])[::-1]
        return _max_rel(lhs, rhs)
    if isinstance(model, TorusModel):
        lhs = _convolve(model, phi1.values, phi2.values, 0.0).values
        rev = _convolve(model, phi2.values[::-1], phi1.values[::-1], 0.0).values
        # circle inversion maps edge knot k to edge knot -k mod n
        rhs = np.roll(rev[::-1], 1)
        return _max_rel(lhs, rhs)
    if isinstance(model, AffineModel):
        return _affine_transform_residual(model, phi1.values, phi2.values, ex)
    raise GroupModelError(f"unsupported model kind {model.kind}")


def _max_rel(lhs, rhs):
    scale = float(np.abs(lhs).max())
    if scale == 0.0:
        return float(np.abs(rhs).max())
    return float(np.abs(lhs - rhs).max()) / scale


def _interp_rows(values, rows, b_positions, b0, h_b):
    """Linear interpolation along b at exact integer rows; 0 outside."""
    n_b = values.shape[1]
    frac = (b_positions - b0) / h_b
    lo = np.floor(frac).astype(int)
    t = frac - lo
    lo_ok = (lo >= 0) & (lo < n_b)
    hi_ok = (lo + 1 >= 0) & (lo + 1 < n_b)
    row_idx = np.broadcast_to(rows, frac.shape)
    left = np.where(lo_ok, values[row_idx, np.clip(lo, 0, n_b - 1)], 0.0)
    right = np.where(hi_ok, values[row_idx, np.clip(lo + 1, 0, n_b - 1)], 0.0)
    return left * (1.0 - t) + right * t


def _affine_transform_residual(model, v1, v2, ex):
    """Both sides of the reversal identity on the carrier; the u coordinate
    of every inverse lands exactly on the lattice and the b coordinate is
    read by linear interpolation (the identity concerns the underlying
    smooth functions, so the checker avoids first-order snapping noise)."""
    de = float(_delta_exponent(ex))
    inv_p = float(ex.p.inv)
    inv_p2 = float(ex.p2.inv)
    lhs = _affine_convolve(model, v1, v2, de, enlarged=False).values
    uu = model.u_centers[:, None]
    bb = model.b_centers[None, :]
    inv_rows = np.arange(model.n_u)[::-1]  # row of -u_i on the carrier
    binv = -np.exp(-uu) * bb
    a = _interp_rows(v2, inv_rows[:, None], binv, model.b_centers[0], model.h_b)
    a = a * np.exp(uu * inv_p2)  # 1/Delta^(1/p2), Delta = e^{-u}
    b = _interp_rows(v1, inv_rows[:, None], binv, model.b_centers[0], model.h_b)
    b = b * np.exp(uu * inv_p)
    conv0 = _affine_convolve(model, a, b, 0.0, enlarged=True)
    ku = (model.n_u - 1) // 2
    rows = 3 * ku - np.arange(model.n_u)  # enlarged row of -u_i
    rhs = _interp_rows(
        conv0.values, rows[:, None], binv, conv0.b_centers[0], model.h_b
    )
    rhs = rhs * np.exp(uu * inv_p)  # Delta(g')^(-1/p)
    return _max_rel(lhs, rhs)



# ---------------------------------------------------------------------------
# adjoint directions for the alternating ascent (estimator support)
#
# With psi = phi1 * (phi2 Delta^de) and w the dual of psi on its own domain,
# the first-order ascent directions are
#
#   (A* w)(g) = int w(g') phi2(g^-1 g') Delta(g^-1 g')^de dg'      (for phi1)
#   (B* w)(k) = Delta(k)^de int phi1(g) w(g k) dg                  (for phi2)
#
# Exact pairings against the piecewise-linear duals on the abelian grids
# reduce to short filters: the integral of a PWL function over a knot-
# centered window [y_m - h/2, y_m + h/2] is (h/8)(v_{m-1} + 6 v_m + v_{m+1}),
# and the offsets of step cells against convolution knots land exactly on
# those windows.  Only proposals come from here; step acceptance is always
# decided by the exactly evaluated ratio.


def centered_integrals(values, h):
    """Exact integrals of a PWL function over [knot - h/2, knot + h/2]."""
    padded = np.concatenate(([0.0], np.asarray(values, dtype=float), [0.0]))
    return (h / 8.0) * (padded[:-2] + 6.0 * padded[1:-1] + padded[2:])


def _centered_integrals_cyclic(values, h):
    return (h / 8.0) * (np.roll(values, 1) + 6.0 * values + np.roll(values, -1))


def _centered_integrals_2d(values, h):
    pad = np.pad(np.asarray(values, dtype=float), 1)
    rows = (h / 8.0) * (pad[:-2, 1:-1] + 6.0 * pad[1:-1, 1:-1] + pad[2:, 1:-1])
    pad2 = np.pad(rows, ((0, 0), (1, 1)))
    return (h / 8.0) * (pad2[:, :-2] + 6.0 * pad2[:, 1:-1] + pad2[:, 2:])


def _cyclic_correlate(a, b):
    """out[k] = sum_j b[j] a[(j + k) mod n], n = len(a) = len(b)."""
    n = a.size
    full = np.convolve(np.concatenate((a, a)), b[::-1])
    return full[n - 1 : 2 * n - 1]


def ascent_direction_phi1(model, phi2_vals, w, de):
    """A* w on the carrier; the proposal direction for the first argument."""
    if isinstance(model, FiniteGroup):
        lookup = _finite_conv_index(model)
        kernel = phi2_vals[lookup]
        if de != 0.0:
            kernel = kernel * model.delta[lookup] ** de
        return kernel @ w.values
    if isinstance(model, IntegerLineModel):
        n = model.size
        full = np.convolve(w.values, phi2_vals[::-1])
        return full[n - 1 : 2 * n - 1]
    if isinstance(model, RealLineModel):
        n = model.size
        windows = centered_integrals(w.values, model.h)
        full = np.convolve(windows, phi2_vals[::-1])
        return full[n : 2 * n]
    if isinstance(model, TorusModel):
        windows = _centered_integrals_cyclic(w.values, model.h)
        return _cyclic_correlate(np.roll(windows, -1), phi2_vals)
    if isinstance(model, PlaneModel):
        n = model.centers.size
        windows = _centered_integrals_2d(w.values, model.h)
        full = fftconvolve(windows, phi2_vals[::-1, ::-1])
        return full[n : 2 * n, n : 2 * n]
    if isinstance(model, AffineModel):
        return _affine_ascent_phi1(model, phi2_vals, w, de)
    raise GroupModelError(f"unsupported model kind {model.kind}")


def ascent_direction_phi2(model, phi1_vals, w, de):
    """B* w on the carrier; the proposal direction for the second argument."""
    if isinstance(model, FiniteGroup):
        out = phi1_vals @ w.values[model.table]
        if de != 0.0:
            out = out * model.delta**de
        return out
    if isinstance(model, IntegerLineModel):
        n = model.size
        full = np.convolve(w.values, phi1_vals[::-1])
        return full[n - 1 : 2 * n - 1]
    if isinstance(model, RealLineModel):
        n = model.size
        windows = centered_integrals(w.values, model.h)
        full = np.convolve(windows, phi1_vals[::-1])
        return full[n : 2 * n]
    if isinstance(model, TorusModel):
        windows = _centered_integrals_cyclic(w.values, model.h)
        return _cyclic_correlate(np.roll(windows, -1), phi1_vals)
    if isinstance(model, PlaneModel):
        n = model.centers.size
        windows = _centered_integrals_2d(w.values, model.h)
        full = fftconvolve(windows, phi1_vals[::-1, ::-1])
        return full[n : 2 * n, n : 2 * n]
    if isinstance(model, AffineModel):
        return _affine_ascent_phi2(model, phi1_vals, w, de)
    raise GroupModelError(f"unsupported model kind {model.kind}")


def _affine_ascent_phi1(model: AffineModel, v2, w: AffineConvolution, de):
    """Batched Toeplitz evaluation of A* w on the affine carrier.

    For carrier row i and dual row m the middle coordinate is
    u_m^w - u_i = u_r for the integer phi2 row r, so the sum splits into
    per-r batches; along b it is a correlation against the dilated,
    step-sampled phi2 row.
    """
    h_b = model.h_b
    nu, nb = model.n_u, model.n_b
    u = model.u_centers
    ku = (nu - 1) // 2
    base = int(round(w.u_points[0] / model.h_u))
    n_out = w.b_centers.size
    ww = w.values * w.weight
    d = np.arange(nb + n_out - 1) - (nb - 1)
    x_d = (w.b_centers[0] - model.b_centers[0]) + d * h_b
    scale = np.exp(-u)
    args = scale[:, None] * x_d[None, :]
    col = np.floor((args + model.b_half_width) / h_b).astype(int)
    valid = (col >= 0) & (col < nb)
    col = np.clip(col, 0, nb - 1)
    out = np.zeros((nu, nb))
    n_rows = w.values.shape[0]
    for r in range(nu):
        row2 = v2[r]
        if not np.any(row2):
            continue
        shift = r - base - 2 * ku  # dual row m = i + shift
        lo = max(0, -shift)
        hi = min(nu, n_rows - shift)
        if lo >= hi:
            continue
        kern = np.where(valid[lo:hi], row2[col[lo:hi]], 0.0)
        corr = fftconvolve(ww[lo + shift : hi + shift], kern[:, ::-1], axes=1)
        sel = corr[:, n_out - 1 : n_out - 1 + nb]
        dfac = math.exp(-de * u[r]) if de != 0.0 else 1.0
        out[lo:hi] += dfac * sel
    return out


def _affine_ascent_phi2(model: AffineModel, v1, w: AffineConvolution, de):
    """Batched evaluation of B* w on the affine carrier.

    For output row c the dual row is m = i + c - 2 ku - base for every
    integration row i; along b the pairing is a correlation of the dual
    row with the phi1 row, sampled at the dilated positions e^{u_i} b_c.
    """
    h_b = model.h_b
    nu, nb = model.n_u, model.n_b
    u = model.u_centers
    ku = (nu - 1) // 2
    base = int(round(w.u_points[0] / model.h_u))
    n_w = w.b_centers.size
    n_rows = w.values.shape[0]
    u_mass = np.exp(-u) * 2.0 * math.sinh(model.h_u / 2.0) * h_b
    v1w = v1 * u_mass[:, None]
    # gather index of e^{u_i} b_c inside the correlation, one row per i
    targets = np.exp(u)[:, None] * model.b_centers[None, :]
    rel = (targets + (model.b_centers[0] - w.b_centers[0])) / h_b + 0.5
    gather = np.floor(rel).astype(int) + (nb - 1)
    out = np.zeros((nu, nb))
    for c in range(nu):
        shift = c - 2 * ku - base  # dual row m = i + shift
        lo = max(0, -shift)
        hi = min(nu, n_rows - shift)
        if lo >= hi:
            continue
        rows1 = v1w[lo:hi]
        if not np.any(rows1):
            continue
        corr = fftconvolve(w.values[lo + shift : hi + shift], rows1[:, ::-1], axes=1)
        idx = gather[lo:hi]
        ok = (idx >= 0) & (idx < corr.shape[1])
        vals = np.take_along_axis(corr, np.clip(idx, 0, corr.shape[1] - 1), axis=1)
        acc = np.where(ok, vals, 0.0).sum(axis=0)
        dfac = math.exp(-de * u[c]) if de != 0.0 else 1.0
        out[c] = dfac * acc
    return out
