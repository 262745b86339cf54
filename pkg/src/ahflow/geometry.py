"""Curvature engines and model metrics for conformally compact radial geometries.

Metrics live in a collar (0, x0] x B of the boundary-at-infinity B, written as

    g = gt / rho_k(x)^2,     rho_0(x) = x,   rho_1(x) = sinh(x),

with B a flat torus (k = 0) or a round sphere (k = 1).  Three curvature paths
are provided and cross-check one another:

* a general series engine for k = 0: with homogeneous (coordinate-independent)
  boundary data in Cartesian torus coordinates all tangential derivatives
  vanish, so Christoffel symbols and Ricci assemble from univariate Laurent
  series for the full symmetric n x n component matrix;
* a warped-product series engine, g = W(x) dx^2 + Phi(x) g_B, for any fiber
  Einstein constant (covers the rotationally symmetric k = 1 class);
* a second-order finite-difference path for diagonal cohomogeneity-one
  metrics sampled on a radial grid (geon-type data).

The toroidal Horowitz-Myers-type model enters twice: sampled in the global
radius r where its components are elementary, and as exact boundary series in
the special defining function x.  The change of coordinate integrates
dx/x = -dr / (r sqrt(1 - r^-n)) in closed form, giving

    r(x)^n = (1 + x^n/4)^2 / x^n,   bolt at x = 4^(1/n),

which the series pipeline in :mod:`ahflow.mass` re-derives order by order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .errors import NonInvertibleSeriesError
from .series import (
    LaurentSeries,
    binomial_series,
    const_series,
    csch2_series,
    from_terms,
    monomial,
    x_series,
)

RADIAL = 0  # index of the radial coordinate in component matrices


# ----------------------------------------------------------------------
# charts and metric containers


@dataclass(frozen=True)
class RadialChart:
    """Dimension, boundary curvature and moduli of a radial collar chart.

    ``periods`` are the torus circumferences a_3 <= ... <= a_n for k = 0
    (the remaining circle has period 4*pi/n, fixed by smoothness at the
    bolt); empty for k = 1.  The boundary metric automatically satisfies
    Ric = (n-2)*k*g_B, which is what the expansion formulas assume.
    """

    n: int
    k: int
    periods: tuple = ()
    coordinate_kind: str = "boundary_x"

    def __post_init__(self):
        if self.n < 3:
            raise ValueError("dimension must be at least 3")
        if self.k not in (0, 1):
            raise ValueError("boundary curvature k must be 0 or 1")
        if self.k == 0:
            if len(self.periods) != self.n - 2:
                raise ValueError(f"k=0 chart needs {self.n - 2} torus periods")
            vals = [float(p) for p in self.periods]
            if any(v <= 0 for v in vals) or any(
                vals[i] > vals[i + 1] for i in range(len(vals) - 1)
            ):
                raise ValueError("torus periods must be positive and sorted")
        elif self.periods:
            raise ValueError("k=1 chart takes no torus periods")

    @property
    def boundary_dim(self) -> int:
        return self.n - 1


class SeriesMetric:
    """Symmetric n x n matrix of Laurent series over a k = 0 chart.

    ``compact`` selects whether the components represent gt (finite at the
    boundary) or the full metric gt / x^2.
    """

    def __init__(self, chart: RadialChart, comps, compact: bool = True):
        n = chart.n
        comps = tuple(tuple(row) for row in comps)
        if len(comps) != n or any(len(r) != n for r in comps):
            raise ValueError("component matrix must be n x n")
        for i in range(n):
            for j in range(i):
                if not comps[i][j].matches(comps[j][i]):
                    raise ValueError("component matrix must be symmetric")
        if compact:
            one = Fraction(1) if comps[0][0].exact else 1.0
            for i in range(n):
                lead = comps[i][i].coefficient(0)
                if lead != one:
                    raise ValueError("compact components must approach the boundary model")
        self.chart = chart
        self.comps = comps
        self.compact = compact

    def order(self) -> int:
        return min(c.order for row in self.comps for c in row)

    def full_matrix(self):
        """Components of g itself (with the 1/x^2 factor made explicit)."""
        if not self.compact:
            return self.comps
        if self.chart.k != 0:
            raise ValueError("series matrices are only used with k=0 charts")
        ord_ = self.order()
        exact = self.comps[0][0].exact
        fac = monomial(-2, Fraction(1) if exact else 1.0, ord_ + 4)
        return tuple(tuple(fac * c for c in row) for row in self.comps)

    def compact_matrix(self):
        if self.compact:
            return self.comps
        ord_ = self.order()
        exact = self.comps[0][0].exact
        fac = monomial(2, Fraction(1) if exact else 1.0, ord_ + 8)
        return tuple(tuple(fac * c for c in row) for row in self.comps)


@dataclass(frozen=True)
class WarpedSeriesMetric:
    """Rotationally symmetric metric W(x) dx^2 + Phi(x) g_B over an Einstein fiber.

    ``fiber_curv`` is the sectional curvature of the (n-1)-dimensional fiber
    metric g_B (1 for the round sphere, 0 for a flat torus); ``compact``
    marks whether (W, Phi) already include the 1/rho^2 factor.
    """

    chart: RadialChart
    w: LaurentSeries
    phi: LaurentSeries
    compact: bool = True

    @property
    def fiber_curv(self) -> int:
        return self.chart.k

    def full_pair(self):
        if not self.compact:
            return self.w, self.phi
        ord_ = min(self.w.order, self.phi.order)
        if self.chart.k == 1:
            fac = csch2_series(ord_ + 4, exact=self.w.exact)
        else:
            fac = monomial(-2, Fraction(1) if self.w.exact else 1.0, ord_ + 4)
        return fac * self.w, fac * self.phi


# ----------------------------------------------------------------------
# engine A: general matrix of series (k = 0, homogeneous data)


def series_matrix_inverse(g):
    """Gauss-Jordan inverse of a matrix of Laurent series."""
    n = len(g)
    exact = g[0][0].exact
    ord_ref = min(c.order for row in g for c in row)
    one = Fraction(1) if exact else 1.0
    ident = [
        [
            const_series(one if i == j else one * 0, max(ord_ref, 0), exact=exact)
            for j in range(n)
        ]
        for i in range(n)
    ]
    a = [list(row) for row in g]
    inv = ident
    for col in range(n):
        piv = a[col][col]
        if piv.valuation() is None:
            raise NonInvertibleSeriesError("non-invertible leading metric block")
        piv_inv = piv.reciprocal()
        a[col] = [piv_inv * c for c in a[col]]
        inv[col] = [piv_inv * c for c in inv[col]]
        for row in range(n):
            if row == col:
                continue
            f = a[row][col]
            if f.is_zero():
                continue
            a[row] = [a[row][j] - f * a[col][j] for j in range(n)]
            inv[row] = [inv[row][j] - f * inv[col][j] for j in range(n)]
    return tuple(tuple(row) for row in inv)


@dataclass
class SeriesCurvature:
    """Christoffel symbols, Ricci, scalar and Einstein deviation of a series metric."""

    gamma: tuple  # gamma[k][i][j]
    ricci: tuple  # ricci[i][j]
    scalar: LaurentSeries
    einstein: tuple  # ricci + (n-1) g
    metric: tuple
    metric_inv: tuple


def curvature_series_matrix(g) -> SeriesCurvature:
    """Curvature of a symmetric series matrix; only radial derivatives act.

    Index convention: R^i_{jkl} = d_k Gamma^i_{lj} - d_l Gamma^i_{kj}
    + Gamma^i_{km} Gamma^m_{lj} - Gamma^i_{lm} Gamma^m_{kj}, Ricci by the
    (i, k) trace, so the hyperbolic model has Ricci = -(n-1) g.
    """
    n = len(g)
    ginv = series_matrix_inverse(g)
    gp = [[g[i][j].derivative() for j in range(n)] for i in range(n)]

    def gamma_entry(k, i, j):
        acc = None

        def add(term):
            nonlocal acc
            acc = term if acc is None else acc + term

        if i == RADIAL:
            for l in range(n):
                if not ginv[k][l].is_zero() and not gp[l][j].is_zero():
                    add(ginv[k][l] * gp[l][j])
        if j == RADIAL:
            for l in range(n):
                if not ginv[k][l].is_zero() and not gp[i][l].is_zero():
                    add(ginv[k][l] * gp[i][l])
        if not ginv[k][RADIAL].is_zero() and not gp[i][j].is_zero():
            add(-(ginv[k][RADIAL] * gp[i][j]))
        if acc is None:
            ord_ = min(ginv[k][0].order, gp[i][j].order)
            zero = Fraction(0) if g[0][0].exact else 0.0
            return LaurentSeries(ord_, [zero], ord_, g[0][0].exact)
        return acc * (Fraction(1, 2) if g[0][0].exact else 0.5)

    gamma = [[[None] * n for _ in range(n)] for _ in range(n)]
    for k in range(n):
        for i in range(n):
            for j in range(i, n):
                gamma[k][i][j] = gamma_entry(k, i, j)
                gamma[k][j][i] = gamma[k][i][j]

    # T_j = Gamma^k_{kj}
    T = []
    for j in range(n):
        acc = gamma[0][0][j]
        for k in range(1, n):
            acc = acc + gamma[k][k][j]
        T.append(acc)
    Tp = [t.derivative() for t in T]

    def ricci_entry(i, j):
        acc = gamma[RADIAL][i][j].derivative()
        if i == RADIAL:
            acc = acc - Tp[j]
        for l in range(n):
            if not T[l].is_zero() and not gamma[l][i][j].is_zero():
                acc = acc + T[l] * gamma[l][i][j]
        for k in range(n):
            for l in range(n):
                gk = gamma[k][i][l]
                gl = gamma[l][k][j]
                if not gk.is_zero() and not gl.is_zero():
                    acc = acc - gk * gl
        return acc

    ricci = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            ricci[i][j] = ricci_entry(i, j)
            ricci[j][i] = ricci[i][j]

    scalar = None
    for i in range(n):
        for j in range(n):
            if ginv[i][j].is_zero() or ricci[i][j].is_zero():
                continue
            term = ginv[i][j] * ricci[i][j]
            scalar = term if scalar is None else scalar + term

    lam = n - 1
    einstein = tuple(
        tuple(ricci[i][j] + g[i][j] * (Fraction(lam) if g[0][0].exact else float(lam)) for j in range(n))
        for i in range(n)
    )
    return SeriesCurvature(
        gamma=tuple(tuple(tuple(r) for r in k_) for k_ in gamma),
        ricci=tuple(tuple(r) for r in ricci),
        scalar=scalar,
        einstein=einstein,
        metric=tuple(tuple(row) for row in g),
        metric_inv=ginv,
    )


def curvature_series(metric: SeriesMetric, of_compact: bool = False) -> SeriesCurvature:
    """Curvature of a SeriesMetric: the full metric by default, or of gt itself."""
    mat = metric.compact_matrix() if of_compact else metric.full_matrix()
    return curvature_series_matrix(mat)


def riemann_mixed(curv: SeriesCurvature, i: int, j: int, k: int, l: int) -> LaurentSeries:
    """Component R^i_{jkl} of the curvature the engine was run on."""
    gamma = curv.gamma
    n = len(gamma)
    acc = None

    def add(term):
        nonlocal acc
        acc = term if acc is None else acc + term

    if k == RADIAL:
        add(gamma[i][l][j].derivative())
    if l == RADIAL:
        add(-gamma[i][k][j].derivative())
    for m in range(n):
        a = gamma[i][k][m]
        b = gamma[m][l][j]
        if not a.is_zero() and not b.is_zero():
            add(a * b)
        c = gamma[i][l][m]
        d = gamma[m][k][j]
        if not c.is_zero() and not d.is_zero():
            add(-(c * d))
    if acc is None:
        ord_ = gamma[i][k][j].order - 1
        exact = gamma[i][k][j].exact
        zero = Fraction(0) if exact else 0.0
        return LaurentSeries(ord_, [zero], ord_, exact)
    return acc


# ----------------------------------------------------------------------
# engine B: warped products over an Einstein fiber


@dataclass
class WarpedCurvature:
    """Curvature of W(x) dx^2 + Phi(x) g_B with Ric[g_B] = (d-1) k g_B."""

    r_rad: LaurentSeries  # R_xx
    r_fib: LaurentSeries  # coefficient of g_B in R_AB
    scalar: LaurentSeries
    e_rad: LaurentSeries  # R_xx + (n-1) W
    e_fib: LaurentSeries  # fiber coefficient of Ric + (n-1) g


def curvature_warped(w: LaurentSeries, phi: LaurentSeries, n: int, fiber_curv: int) -> WarpedCurvature:
    d = n - 1
    half = Fraction(1, 2) if w.exact else 0.5
    winv = w.reciprocal()
    phinv = phi.reciprocal()
    P = phi.derivative() * phinv * half
    W1 = w.derivative() * winv * half
    Q = phi.derivative() * winv * half
    r_rad = -(P.derivative() + P * P - P * W1) * d
    kk = Fraction((d - 1) * fiber_curv) if w.exact else float((d - 1) * fiber_curv)
    r_fib = -(Q.derivative() + W1 * Q + P * Q * (d - 2)) + kk
    scalar = r_rad * winv + (r_fib * phinv) * d
    lam = Fraction(n - 1) if w.exact else float(n - 1)
    return WarpedCurvature(
        r_rad=r_rad,
        r_fib=r_fib,
        scalar=scalar,
        e_rad=r_rad + w * lam,
        e_fib=r_fib + phi * lam,
    )


# ----------------------------------------------------------------------
# conformal transformation of Ricci


def conformal_ricci_matrix(gt, rho: LaurentSeries, n: int):
    """Ricci of g = gt / rho^2 assembled from the curvature of gt.

    Uses the standard conformal identity
    R_ij = Rt_ij + [ (n-2) Hess_ij(rho) + gt_ij Lap(rho) ] / rho
           - (n-1) gt_ij |d rho|^2 / rho^2,
    with all operators of gt.  rho must vanish simply at x = 0.
    """
    if rho.valuation() != 1:
        raise ValueError("defining function must vanish simply at the boundary")
    curv_t = curvature_series_matrix(gt)
    gtinv = curv_t.metric_inv
    rp = rho.derivative()
    rpp = rp.derivative()
    rho_inv = rho.reciprocal()

    hess = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            h = -(curv_t.gamma[RADIAL][i][j] * rp)
            if i == RADIAL and j == RADIAL:
                h = h + rpp
            hess[i][j] = h
            hess[j][i] = h
    lap = None
    for i in range(n):
        for j in range(n):
            if gtinv[i][j].is_zero() or hess[i][j].is_zero():
                continue
            t = gtinv[i][j] * hess[i][j]
            lap = t if lap is None else lap + t
    grad2 = gtinv[RADIAL][RADIAL] * rp * rp

    cm2 = Fraction(n - 2) if rho.exact else float(n - 2)
    cm1 = Fraction(n - 1) if rho.exact else float(n - 1)
    rho_inv2 = rho_inv * rho_inv
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            r = (
                curv_t.ricci[i][j]
                + (hess[i][j] * cm2 + gt[i][j] * lap) * rho_inv
                - gt[i][j] * grad2 * rho_inv2 * cm1
            )
            out[i][j] = r
            out[j][i] = r
    return tuple(tuple(row) for row in out)


def conformal_ricci(metric, rho: LaurentSeries | None = None):
    """Conformal-identity Ricci of a SeriesMetric or WarpedSeriesMetric.

    Returns the same layout as the direct engines so the two routes can be
    compared coefficient by coefficient.
    """
    if isinstance(metric, SeriesMetric):
        gt = metric.compact_matrix()
        if rho is None:
            rho = x_series(metric.order() + 4, exact=gt[0][0].exact)
        return conformal_ricci_matrix(gt, rho, metric.chart.n)
    if isinstance(metric, WarpedSeriesMetric):
        return _conformal_ricci_warped(metric, rho)
    raise TypeError("unsupported metric container")


def _conformal_ricci_warped(metric: WarpedSeriesMetric, rho: LaurentSeries | None):
    wt, phit = (metric.w, metric.phi) if metric.compact else metric.full_pair()
    n = metric.chart.n
    d = n - 1
    exact = wt.exact
    if rho is None:
        ord_ = min(wt.order, phit.order) + 4
        rho = (
            _sinh(ord_, exact) if metric.chart.k == 1 else x_series(ord_, exact=exact)
        )
    half = Fraction(1, 2) if exact else 0.5
    curv_t = curvature_warped(wt, phit, n, metric.fiber_curv)
    wtinv = wt.reciprocal()
    phitinv = phit.reciprocal()
    rp = rho.derivative()
    rpp = rp.derivative()
    rho_inv = rho.reciprocal()
    # Christoffels of the compact warped metric entering Hessian components
    gamma_rad_rr = wt.derivative() * wtinv * half
    gamma_rad_fib = -(phit.derivative() * wtinv * half)  # coefficient of g_B
    hess_rr = rpp - gamma_rad_rr * rp
    hess_fib = -(gamma_rad_fib * rp)
    lap = wtinv * hess_rr + (phitinv * hess_fib) * d
    grad2 = wtinv * rp * rp
    cm2 = Fraction(n - 2) if exact else float(n - 2)
    cm1 = Fraction(n - 1) if exact else float(n - 1)
    rho_inv2 = rho_inv * rho_inv
    r_rad = curv_t.r_rad + (hess_rr * cm2 + wt * lap) * rho_inv - wt * grad2 * rho_inv2 * cm1
    r_fib = (
        curv_t.r_fib + (hess_fib * cm2 + phit * lap) * rho_inv - phit * grad2 * rho_inv2 * cm1
    )
    return r_rad, r_fib


def _sinh(order, exact):
    from .series import sinh_series

    return sinh_series(order, exact=exact)


# ----------------------------------------------------------------------
# model metrics


def flat_boundary_chart(n: int) -> RadialChart:
    """A k=0 chart with unit torus periods (moduli only affect volumes)."""
    return RadialChart(n=n, k=0, periods=tuple(Fraction(1) for _ in range(n - 2)))


def hyperbolic_series_metric(n: int, order: int | None = None, k: int = 0):
    """The model with gt = identity; Einstein with Ricci = -(n-1) g."""
    if order is None:
        order = n + 2
    one = Fraction(1)
    zero = Fraction(0)
    if k == 0:
        comps = [
            [const_series(one if i == j else zero, order) for j in range(n)]
            for i in range(n)
        ]
        return SeriesMetric(flat_boundary_chart(n), comps, compact=True)
    chart = RadialChart(n=n, k=1)
    return WarpedSeriesMetric(chart, const_series(one, order), const_series(one, order), compact=True)


def build_perturbed(n: int, k: int, kappa, order: int | None = None, m: int | None = None):
    """Collar metric gt = boundary model + x^m kappa / m with zero tail.

    For k = 0, ``kappa`` is the full symmetric n x n coefficient matrix
    (Fractions); index 0 is radial.  For k = 1 the rotationally symmetric
    class applies and ``kappa = (psi, phi0)`` with radial block psi and
    fiber block phi0 * g_B.
    """
    if m is None:
        m = n
    if not 1 <= m <= n:
        raise ValueError("expansion order m must satisfy 1 <= m <= n")
    if order is None:
        order = n + 2
    if order < m:
        raise ValueError("truncation order below the perturbation order")
    if k == 0:
        kappa = [[Fraction(kappa[i][j]) for j in range(n)] for i in range(n)]
        for i in range(n):
            for j in range(i):
                if kappa[i][j] != kappa[j][i]:
                    raise ValueError("kappa must be symmetric")
        comps = []
        for i in range(n):
            row = []
            for j in range(n):
                terms = {}
                if i == j:
                    terms[0] = Fraction(1)
                if kappa[i][j] != 0:
                    terms[m] = Fraction(kappa[i][j], m)
                row.append(from_terms(terms, order))
            comps.append(row)
        return SeriesMetric(flat_boundary_chart(n), comps, compact=True)
    psi, phi0 = kappa
    w = from_terms({0: Fraction(1), m: Fraction(psi, m)}, order)
    phi = from_terms({0: Fraction(1), m: Fraction(phi0, m)}, order)
    return WarpedSeriesMetric(RadialChart(n=n, k=1), w, phi, compact=True)


def geon_compact_profiles(n: int, order: int | None = None):
    """Exact boundary series of the toroidal geon in its special defining function.

    With z = x^n: gt_xx = 1, gt_xixi = (1-z/4)^2 (1+z/4)^((4-2n)/n),
    gt_thth = (1+z/4)^(4/n); closed forms of r(x)^2 f and r(x)^2 under
    r^n = (1 + x^n/4)^2 / x^n.
    """
    if order is None:
        order = n + 2
    q = Fraction(1, 4)
    z = monomial(n, q, order)  # z/4 as a series
    gt_th = binomial_series(Fraction(4, n), z)
    neg = monomial(n, -q, order)
    sq = binomial_series(Fraction(2), neg)  # (1 - z/4)^2
    gt_xi = sq * binomial_series(Fraction(4 - 2 * n, n), z)
    gt_xx = const_series(Fraction(1), order)
    return gt_xx, gt_xi, gt_th


def build_geon_series(n: int, periods: Sequence | None = None, order: int | None = None) -> SeriesMetric:
    """Geon boundary expansion as a diagonal SeriesMetric (k = 0 chart)."""
    if periods is None:
        periods = tuple(Fraction(1) for _ in range(n - 2))
    gt_xx, gt_xi, gt_th = geon_compact_profiles(n, order)
    ord_ = gt_xi.order
    zero = from_terms({}, ord_)
    comps = [[zero] * n for _ in range(n)]
    comps[0][0] = gt_xx.truncate(ord_)
    comps[1][1] = gt_xi
    for i in range(2, n):
        comps[i][i] = gt_th
    chart = RadialChart(n=n, k=0, periods=tuple(Fraction(p) for p in periods))
    return SeriesMetric(chart, comps, compact=True)


# ----------------------------------------------------------------------
# expansion-coefficient verification


@dataclass
class ExpansionCheck:
    """Exact residuals of the order m-2 Einstein-deviation coefficients."""

    n: int
    m: int
    k: int
    residual_rad: Fraction
    residual_cross: tuple
    residual_fib: tuple  # full (n-1)x(n-1) block (k=0) or 1-tuple (k=1)

    @property
    def all_zero(self) -> bool:
        return (
            self.residual_rad == 0
            and all(c == 0 for c in self.residual_cross)
            and all(c == 0 for row in self.residual_fib for c in row)
        )

    def max_abs(self) -> Fraction:
        vals = [abs(self.residual_rad)]
        vals += [abs(c) for c in self.residual_cross]
        vals += [abs(c) for row in self.residual_fib for c in row]
        return max(vals)


def expansion_coefficient_check(n: int, m: int, kappa, k: int = 0, order: int | None = None) -> ExpansionCheck:
    """Engine-vs-closed-form check of the order m-2 coefficients of Ric + (n-1)g.

    Builds the exact collar metric for the given coefficient tensor, computes
    the Einstein deviation by the series engine, extracts the x^(m-2)
    coefficient of every component and subtracts the closed forms

        E_rad = -(m-2)/2 [ (n-1)/m kappa_rad + tr kappa ] x^(m-2) + ...
        E_cross = O(x^(m-1))
        E_fib  = 1/2 [ ((2n-2)/m - 1) kappa_rad + tr kappa ] g_B x^(m-2)
                 + (n-m-1)/2 kappa_fib x^(m-2) + ...

    All residuals are exact rationals and must vanish.
    """
    if not 1 <= m <= n:
        raise ValueError("require 1 <= m <= n")
    if k == 0:
        metric = build_perturbed(n, 0, kappa, order=order, m=m)
        curv = curvature_series(metric)
        k00 = Fraction(kappa[0][0])
        tr = sum(Fraction(kappa[a][a]) for a in range(1, n))
        e_rad_expect = -Fraction(m - 2, 2) * (Fraction(n - 1, m) * k00 + tr)
        res_rad = curv.einstein[0][0].coefficient(m - 2) - e_rad_expect
        res_cross = tuple(curv.einstein[0][a].coefficient(m - 2) for a in range(1, n))
        fib = []
        for a in range(1, n):
            row = []
            for b in range(1, n):
                expect = Fraction(n - m - 1, 2) * Fraction(kappa[a][b])
                if a == b:
                    expect += Fraction(1, 2) * ((Fraction(2 * n - 2, m) - 1) * k00 + tr)
                row.append(curv.einstein[a][b].coefficient(m - 2) - expect)
            fib.append(tuple(row))
        return ExpansionCheck(n, m, 0, res_rad, res_cross, tuple(fib))

    psi, phi0 = (Fraction(kappa[0]), Fraction(kappa[1]))
    metric = build_perturbed(n, 1, (psi, phi0), order=order, m=m)
    w_full, phi_full = metric.full_pair()
    curv = curvature_warped(w_full, phi_full, n, 1)
    tr = (n - 1) * phi0
    e_rad_expect = -Fraction(m - 2, 2) * (Fraction(n - 1, m) * psi + tr)
    e_fib_expect = (
        Fraction(1, 2) * ((Fraction(2 * n - 2, m) - 1) * psi + tr)
        + Fraction(n - m - 1, 2) * phi0
    )
    res_rad = curv.e_rad.coefficient(m - 2) - e_rad_expect
    res_fib = curv.e_fib.coefficient(m - 2) - e_fib_expect
    return ExpansionCheck(n, m, 1, res_rad, (), ((res_fib,),))


# ----------------------------------------------------------------------
# radial hypersurface splitting cross-checks (k = 0 engine)


@dataclass
class SplittingResiduals:
    """Residual series of the radial Riccati / Gauss / Codazzi reductions."""

    riccati: tuple  # (n-1)x(n-1) residual block
    gauss: LaurentSeries
    codazzi: tuple
    tangential: tuple  # (n-1)x(n-1) residual of the fiber-block identity

    def max_through(self, order: int) -> Fraction:
        def scan(s: LaurentSeries):
            top = min(order, s.order)
            return max(
                (abs(s.coefficient(j)) for j in range(s.lowest, top + 1)),
                default=Fraction(0),
            )

        vals = [scan(self.gauss)]
        vals += [scan(s) for s in self.codazzi]
        vals += [scan(s) for row in self.riccati for s in row]
        vals += [scan(s) for row in self.tangential for s in row]
        return max(vals)


def splitting_residuals(n: int, m: int, kappa, order: int | None = None) -> SplittingResiduals:
    """Compare engine curvature of gt with its hypersurface-splitting form.

    With ghat the fiber block of gt and K = ghat'/2 (radial shape operator up
    to normalization), the identities checked are

        K'_AB - K_AC K^C_B = -Rt^x_{AxB}           (Riccati)
        Rt_xx = (Rt - Rhat + (tr K)^2 - |K|^2)/2   (contracted Gauss)
        Rt_xA = 0                                   (Codazzi, homogeneous data)
        Rt_AB = Rhat_AB + Rt^x_{AxB} + K_AC K^C_B - K_AB tr K

    For homogeneous flat-torus data Rhat = 0.  When the radial blocks of
    kappa vanish these hold to every computed order; in general the shape
    operator only approximates the extrinsic curvature and corrections enter
    at x^(2m-2).
    """
    if order is None:
        order = 2 * m + 4
    metric = build_perturbed(n, 0, kappa, order=order, m=m)
    gt = metric.compact_matrix()
    curv = curvature_series_matrix(gt)
    d = n - 1
    ghat = [[gt[a + 1][b + 1] for b in range(d)] for a in range(d)]
    half = Fraction(1, 2)
    K = [[ghat[a][b].derivative() * half for b in range(d)] for a in range(d)]
    ghat_inv = series_matrix_inverse(ghat)
    Kmix = [
        [sum_series(ghat_inv[a][c] * K[c][b] for c in range(d)) for b in range(d)]
        for a in range(d)
    ]
    trK = sum_series(Kmix[a][a] for a in range(d))
    KK = [
        [sum_series(K[a][c] * Kmix[c][b] for c in range(d)) for b in range(d)]
        for a in range(d)
    ]
    K2 = sum_series(Kmix[a][b] * Kmix[b][a] for a in range(d) for b in range(d))

    riemann_block = [
        [riemann_mixed(curv, RADIAL, a + 1, RADIAL, b + 1) for b in range(d)]
        for a in range(d)
    ]
    riccati = tuple(
        tuple(
            K[a][b].derivative() - KK[a][b] + riemann_block[a][b]
            for b in range(d)
        )
        for a in range(d)
    )
    gauss = curv.ricci[0][0] - (curv.scalar + trK * trK - K2) * half
    codazzi = tuple(curv.ricci[0][a + 1] for a in range(d))
    tangential = tuple(
        tuple(
            curv.ricci[a + 1][b + 1]
            - (riemann_block[a][b] + KK[a][b] - K[a][b] * trK)
            for b in range(d)
        )
        for a in range(d)
    )
    return SplittingResiduals(riccati, gauss, codazzi, tangential)


def sum_series(terms) -> LaurentSeries:
    acc = None
    for t in terms:
        acc = t if acc is None else acc + t
    if acc is None:
        raise ValueError("empty series sum")
    return acc


# ----------------------------------------------------------------------
# finite-difference path on radial grids


def fd_weights(points: np.ndarray, x0: float, der: int) -> np.ndarray:
    """Finite-difference weights for the der-th derivative at x0 (Vandermonde)."""
    import math

    pts = np.asarray(points, dtype=float) - x0
    k = len(pts)
    A = np.vander(pts, k, increasing=True).T
    b = np.zeros(k)
    b[der] = float(math.factorial(der))
    return np.linalg.solve(A, b)


def fd_derivative(values: np.ndarray, points: np.ndarray, der: int) -> np.ndarray:
    """Second-order derivative of grid samples; centered inside, one-sided ends.

    Interior stencils are the 3-point nonuniform formulas; the ends use 3
    points for the first derivative and 4 for the second so every point is
    second-order accurate.
    """
    y = np.asarray(values, dtype=float)
    x = np.asarray(points, dtype=float)
    npts = len(x)
    if npts < 5:
        raise ValueError("grid must have at least 5 points")
    out = np.empty_like(y)
    hm = x[1:-1] - x[:-2]
    hp = x[2:] - x[1:-1]
    if der == 1:
        out[1:-1] = (
            -hp / (hm * (hm + hp)) * y[:-2]
            + (hp - hm) / (hm * hp) * y[1:-1]
            + hm / (hp * (hm + hp)) * y[2:]
        )
        for idx, sten in ((0, slice(0, 3)), (npts - 1, slice(npts - 3, npts))):
            w = fd_weights(x[sten], x[idx], 1)
            out[idx] = w @ y[sten]
    elif der == 2:
        out[1:-1] = 2.0 * (
            hp * y[:-2] - (hm + hp) * y[1:-1] + hm * y[2:]
        ) / (hm * hp * (hm + hp))
        for idx, sten in ((0, slice(0, 4)), (npts - 1, slice(npts - 4, npts))):
            w = fd_weights(x[sten], x[idx], 2)
            out[idx] = w @ y[sten]
    else:
        raise ValueError("unsupported derivative order")
    return out


@dataclass
class GridMetric:
    """Diagonal cohomogeneity-one metric sampled on a radial grid.

    Components: ``radial`` multiplies the squared coordinate differential,
    ``fiber_xi`` the collapsing circle, ``fiber_theta`` each of the remaining
    n-2 torus directions.
    """

    chart: RadialChart
    points: np.ndarray
    radial: np.ndarray
    fiber_xi: np.ndarray
    fiber_theta: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.points, dtype=float)
        if x.ndim != 1 or len(x) < 2 or np.any(np.diff(x) <= 0):
            raise ValueError("grid points must be strictly increasing")
        object.__setattr__(self, "points", x)
        for name in ("radial", "fiber_xi", "fiber_theta"):
            v = np.asarray(getattr(self, name), dtype=float)
            if v.shape != x.shape:
                raise ValueError(f"component {name} does not match the grid")
            object.__setattr__(self, name, v)


@dataclass
class GridCurvature:
    """Pointwise Ricci ratios, scalar curvature and Einstein deviation ratios.

    ``ric_*`` are R_ii / g_ii (no sum), the curvatures of the unit coordinate
    directions; ``eins_*`` add (n-1).  ``einstein_norm`` is |Ric + (n-1) g|
    in the metric norm, sqrt(sum of squared ratios) for diagonal data.
    """

    ric_rad: np.ndarray
    ric_xi: np.ndarray
    ric_theta: np.ndarray
    scalar: np.ndarray
    eins_rad: np.ndarray
    eins_xi: np.ndarray
    eins_theta: np.ndarray
    einstein_norm: np.ndarray


def curvature_grid(gm: GridMetric) -> GridCurvature:
    """Second-order finite-difference curvature of a diagonal radial metric."""
    n = gm.chart.n
    x = gm.points
    a, b, c = gm.radial, gm.fiber_xi, gm.fiber_theta
    for name, v in (("radial", a), ("fiber_xi", b), ("fiber_theta", c)):
        if np.any(v <= 0):
            raise ValueError(f"non-positive metric component {name}")
    La = fd_derivative(a, x, 1) / (2 * a)
    Lb = fd_derivative(b, x, 1) / (2 * b)
    Lc = fd_derivative(c, x, 1) / (2 * c)
    Lbp = fd_derivative(b, x, 2) / (2 * b) - 2 * Lb * Lb
    Lcp = fd_derivative(c, x, 2) / (2 * c) - 2 * Lc * Lc

    theta_b = Lbp + Lb * Lb - Lb * La
    theta_c = Lcp + Lc * Lc - Lc * La
    r_rad = -(theta_b + (n - 2) * theta_c)
    psi_b = theta_b + (n - 2) * Lb * Lc
    psi_c = theta_c + Lc * Lb + (n - 3) * Lc * Lc
    ric_rad = r_rad / a
    ric_xi = -psi_b / a
    ric_theta = -psi_c / a
    scalar = ric_rad + ric_xi + (n - 2) * ric_theta
    lam = float(n - 1)
    eins_rad = ric_rad + lam
    eins_xi = ric_xi + lam
    eins_theta = ric_theta + lam
    norm = np.sqrt(eins_rad**2 + eins_xi**2 + (n - 2) * eins_theta**2)
    return GridCurvature(
        ric_rad, ric_xi, ric_theta, scalar, eins_rad, eins_xi, eins_theta, norm
    )


def build_geon(n: int, periods: Sequence, r_points: np.ndarray) -> GridMetric:
    """Toroidal geon sampled in the global radius r on [1, R_max]."""
    r = np.asarray(r_points, dtype=float)
    if r[0] < 1.0:
        raise ValueError("geon radial coordinate starts at the bolt r = 1")
    f = 1.0 - r ** (-n)
    chart = RadialChart(
        n=n,
        k=0,
        periods=tuple(periods),
        coordinate_kind="radial_r",
    )
    with np.errstate(divide="ignore"):
        radial = np.where(f > 0, 1.0 / (r * r * f), np.inf)
    return GridMetric(
        chart=chart,
        points=r,
        radial=radial,
        fiber_xi=r * r * f,
        fiber_theta=r * r,
    )


def hyperbolic_grid(n: int, r_points: np.ndarray, periods: Sequence | None = None) -> GridMetric:
    """Reference form dr^2/r^2 + r^2 (flat torus) sampled on a radial grid."""
    r = np.asarray(r_points, dtype=float)
    if periods is None:
        periods = tuple(Fraction(1) for _ in range(n - 2))
    chart = RadialChart(n=n, k=0, periods=tuple(periods), coordinate_kind="radial_r")
    return GridMetric(
        chart=chart,
        points=r,
        radial=1.0 / (r * r),
        fiber_xi=r * r,
        fiber_theta=r * r,
    )


# ----------------------------------------------------------------------
# geon closed forms shared with the flow path


def geon_x_of_r(n: int, r: np.ndarray) -> np.ndarray:
    """Special defining function x(r) = 4^(1/n) ((1-w)/(1+w))^(1/n), w = sqrt(1-r^-n)."""
    r = np.asarray(r, dtype=float)
    w = np.sqrt(1.0 - r ** (-float(n)))
    return (4.0 * (1.0 - w) / (1.0 + w)) ** (1.0 / n)


def geon_r_of_x(n: int, x: np.ndarray) -> np.ndarray:
    """Inverse closed form r(x) = (1 + x^n/4)^(2/n) / x."""
    x = np.asarray(x, dtype=float)
    return (1.0 + x**n / 4.0) ** (2.0 / n) / x


def geon_bolt_x(n: int) -> float:
    return 4.0 ** (1.0 / n)
