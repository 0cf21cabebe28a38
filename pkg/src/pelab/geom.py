"""Chart-based numerical curvature engine.

A :class:`ChartMetric` is a coordinate chart whose metric components are
written in generic arithmetic, so the same component function can be
evaluated on plain floats (for values and finite differences) or on
:class:`~pelab.jets.Jet2` variables (for exact-to-rounding first and
second derivatives).  From the component data

    G[i,j],   dG[k,i,j] = d_k g_ij,   ddG[k,l,i,j] = d_k d_l g_ij

the standard Levi-Civita/curvature formulas produce Christoffel symbols,
the lowered Riemann tensor, Ricci, scalar curvature and derived checks.

Conventions: Gamma^k_ij = (1/2) g^kl (d_i g_jl + d_j g_il - d_l g_ij);
the lowered Riemann tensor is normalised so that for a space of constant
curvature K it equals K (g_il g_jk - g_ik g_jl), hence

    sec(X, Y) = R(X, Y, Y, X) / (|X|^2 |Y|^2 - <X,Y>^2)

recovers K, and Ric_jl = R^i_{jil} is positive on spheres.

The concrete charts cover a cohomogeneity-one Einstein family on a line
bundle over a Kaehler-Einstein surface: coordinates (r, psi, u, v) with
ghat = (4/lam)(du^2+dv^2)/(1+u^2+v^2)^2 (Gauss curvature lam) and
connection form theta = dpsi + A, where A solves dA = -2*omega for the
area form omega of ghat in the rotationally symmetric gauge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .jets import Jet2, laurent_eval, seed_point
from .family import FamilyParams, solve_profile
from .limits import RescaledProfile


class SingularMetric(ValueError):
    """Metric matrix not invertible (or hopelessly ill-conditioned) at the point."""


class DegeneratePlane(ValueError):
    """The two tangent vectors do not span a 2-plane."""


class UnsupportedDimension(ValueError):
    """Chart constructor called with a base dimension it does not provide."""


class StepTooLarge(ValueError):
    """Finite-difference stencil would leave the chart domain."""


class CurvatureCheckError(AssertionError):
    """Riemann symmetries or first Bianchi identity failed at construction."""


@dataclass(frozen=True)
class ChartMetric:
    """A coordinate chart with a generic-arithmetic metric component function.

    metric(point) must accept a sequence of floats or Jet2 values and
    return a dim x dim nested list; entries may be plain numbers where a
    component is constant.  in_domain is a predicate on float points.
    """

    dim: int
    coords: tuple
    metric: Callable
    in_domain: Callable
    label: str = ""

    def metric_values(self, point) -> np.ndarray:
        rows = self.metric([float(x) for x in point])
        return np.array([[e.value if isinstance(e, Jet2) else float(e) for e in row] for row in rows])


def metric_derivatives_jet(chart: ChartMetric, point):
    """(G, dG, ddG) from one jet evaluation of the metric components."""
    d = chart.dim
    rows = chart.metric(seed_point(point, d))
    G = np.zeros((d, d))
    dG = np.zeros((d, d, d))
    ddG = np.zeros((d, d, d, d))
    for i in range(d):
        for j in range(d):
            e = rows[i][j]
            if isinstance(e, Jet2):
                G[i, j] = e.value
                dG[:, i, j] = e.grad
                ddG[:, :, i, j] = e.hess
            else:
                G[i, j] = float(e)
    return G, dG, ddG


_D1_OFFSETS = (-2, -1, 1, 2)
_D1_WEIGHTS = (1.0, -8.0, 8.0, -1.0)  # divide by 12 h


def metric_derivatives_fd(chart: ChartMetric, point, step: float):
    """(G, dG, ddG) from 4th-order central differences, no jets involved."""
    d = chart.dim
    base = np.asarray(point, dtype=float)
    margin = 10.0 * step
    for i in range(d):
        for sign in (-1.0, 1.0):
            probe = base.copy()
            probe[i] += sign * margin
            if not chart.in_domain(probe):
                raise StepTooLarge(f"margin {margin} leaves the domain along coordinate {i}")

    cache: dict[tuple, np.ndarray] = {}

    def value(offsets: tuple) -> np.ndarray:
        if offsets not in cache:
            p = base.copy()
            for axis, k in offsets:
                p[axis] += k * step
            cache[offsets] = chart.metric_values(p)
        return cache[offsets]

    G = value(())
    dG = np.zeros((d, d, d))
    ddG = np.zeros((d, d, d, d))
    for a in range(d):
        dG[a] = sum(w * value(((a, k),)) for k, w in zip(_D1_OFFSETS, _D1_WEIGHTS)) / (12 * step)
        ddG[a, a] = (
            -value(((a, -2),)) + 16 * value(((a, -1),)) - 30 * G + 16 * value(((a, 1),)) - value(((a, 2),))
        ) / (12 * step**2)
    for a in range(d):
        for b in range(a + 1, d):
            acc = np.zeros((d, d))
            for ka, wa in zip(_D1_OFFSETS, _D1_WEIGHTS):
                for kb, wb in zip(_D1_OFFSETS, _D1_WEIGHTS):
                    acc += wa * wb * value(((a, ka), (b, kb)))
            ddG[a, b] = ddG[b, a] = acc / (12 * step) ** 2
    return G, dG, ddG


def _inverse(G: np.ndarray) -> np.ndarray:
    try:
        cond = np.linalg.cond(G)
        if not np.isfinite(cond) or cond > 1e12:
            raise SingularMetric(f"metric condition number {cond:.3g}")
        return np.linalg.inv(G)
    except np.linalg.LinAlgError as exc:
        raise SingularMetric(str(exc)) from exc


def assemble_curvature(G, dG, ddG):
    """Christoffel, lowered Riemann, Ricci and scalar from component data."""
    Ginv = _inverse(G)
    T = dG + np.einsum("jil->ijl", dG) - np.einsum("lij->ijl", dG)
    Gamma = 0.5 * np.einsum("kl,ijl->kij", Ginv, T)
    dGinv = -np.einsum("ka,mab,bl->mkl", Ginv, dG, Ginv)
    dT = ddG + np.einsum("mjil->mijl", ddG) - np.einsum("mlij->mijl", ddG)
    dGamma = 0.5 * (np.einsum("mkl,ijl->mkij", dGinv, T) + np.einsum("kl,mijl->mkij", Ginv, dT))
    riem_up = (
        np.einsum("mans->asmn", dGamma)
        - np.einsum("nams->asmn", dGamma)
        + np.einsum("amb,bns->asmn", Gamma, Gamma)
        - np.einsum("anb,bms->asmn", Gamma, Gamma)
    )
    # lowered tensor in the constant-curvature convention K(g_il g_jk - g_ik g_jl)
    r_low = np.einsum("ia,ajlk->ijkl", G, riem_up)
    ricci = np.einsum("msmn->sn", riem_up)
    scal = float(np.einsum("sn,sn->", Ginv, ricci))
    return Ginv, Gamma, r_low, ricci, scal


@dataclass(frozen=True)
class CurvatureReport:
    """Curvature data at a point, with symmetry and Bianchi checks built in."""

    point: tuple
    metric: np.ndarray
    christoffel: np.ndarray
    riemann: np.ndarray
    ricci: np.ndarray
    scalar: float
    einstein_residual: float | None
    symmetry_max: float = field(init=False)
    bianchi_max: float = field(init=False)

    def __post_init__(self):
        R = self.riemann
        scale = max(float(np.max(np.abs(R))), float(np.max(np.abs(self.metric))) ** 2, 1e-300)
        sym = max(
            float(np.max(np.abs(R + np.einsum("jikl->ijkl", R)))),
            float(np.max(np.abs(R + np.einsum("ijlk->ijkl", R)))),
            float(np.max(np.abs(R - np.einsum("klij->ijkl", R)))),
        )
        bianchi = float(np.max(np.abs(R + np.einsum("iklj->ijkl", R) + np.einsum("iljk->ijkl", R))))
        object.__setattr__(self, "symmetry_max", sym / scale)
        object.__setattr__(self, "bianchi_max", bianchi / scale)
        if self.symmetry_max > 1e-8:
            raise CurvatureCheckError(f"Riemann symmetry violation {self.symmetry_max:.3e} at {self.point}")
        if self.bianchi_max > 1e-8:
            raise CurvatureCheckError(f"first Bianchi violation {self.bianchi_max:.3e} at {self.point}")

    def to_json_dict(self) -> dict:
        return {
            "point": list(self.point),
            "einstein_residual": self.einstein_residual,
            "scalar": self.scalar,
            "bianchi_max": self.bianchi_max,
            "symmetry_max": self.symmetry_max,
        }


def curvature_report(chart: ChartMetric, point, lam: float | None = None, scheme: str = "jet", step: float = 1e-3) -> CurvatureReport:
    """Full curvature data at a point; scheme 'jet' or 'fd'."""
    if not chart.in_domain(point):
        raise ValueError(f"point {tuple(point)} outside chart domain")
    if scheme == "jet":
        G, dG, ddG = metric_derivatives_jet(chart, point)
    elif scheme == "fd":
        G, dG, ddG = metric_derivatives_fd(chart, point, step)
    else:
        raise ValueError(f"unknown scheme {scheme!r}")
    _, Gamma, r_low, ricci, scal = assemble_curvature(G, dG, ddG)
    residual = None
    if lam is not None:
        residual = float(np.max(np.abs(ricci - lam * G)) / np.max(np.abs(G)))
    return CurvatureReport(
        point=tuple(float(x) for x in point),
        metric=G,
        christoffel=Gamma,
        riemann=r_low,
        ricci=ricci,
        scalar=scal,
        einstein_residual=residual,
    )


def christoffel(chart: ChartMetric, point) -> np.ndarray:
    G, dG, _ = metric_derivatives_jet(chart, point)
    Ginv = _inverse(G)
    T = dG + np.einsum("jil->ijl", dG) - np.einsum("lij->ijl", dG)
    return 0.5 * np.einsum("kl,ijl->kij", Ginv, T)


def riemann(chart: ChartMetric, point) -> np.ndarray:
    return curvature_report(chart, point).riemann


def ricci(chart: ChartMetric, point) -> np.ndarray:
    return curvature_report(chart, point).ricci


def scalar_curvature(chart: ChartMetric, point) -> float:
    return curvature_report(chart, point).scalar


def einstein_residual(chart: ChartMetric, lam: float, point) -> float:
    """max_ij |Ric_ij - lam g_ij| / max_ij |g_ij| at the point."""
    return curvature_report(chart, point, lam=lam).einstein_residual


def fd_oracle(chart: ChartMetric, point, step: float = 1e-3, lam: float | None = None) -> CurvatureReport:
    """Curvature via 4th-order finite differences only; the cross-check path."""
    return curvature_report(chart, point, lam=lam, scheme="fd", step=step)


def sectional(chart: ChartMetric, point, x, y) -> float:
    """Sectional curvature of the plane spanned by tangent vectors x, y."""
    rep = curvature_report(chart, point)
    G = rep.metric
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    xx = float(x @ G @ x)
    yy = float(y @ G @ y)
    xy = float(x @ G @ y)
    denom = xx * yy - xy**2
    if denom < 1e-12 * xx * yy:
        raise DegeneratePlane(f"plane denominator {denom:.3e}")
    num = float(np.einsum("ijkl,i,j,k,l->", rep.riemann, x, y, y, x))
    return num / denom


def is_positive_definite(chart: ChartMetric, point) -> bool:
    try:
        np.linalg.cholesky(chart.metric_values(point))
        return True
    except np.linalg.LinAlgError:
        return False


# -- base-surface data -------------------------------------------------


def _base_blocks(lam: float, u, v):
    """Conformal factor of ghat and the components of the connection form.

    ghat = (4/lam)(du^2+dv^2)/(1+u^2+v^2)^2 has Gauss curvature lam, so
    Ric(ghat) = lam ghat; theta = dpsi + a_u du + a_v dv solves
    d(theta) = -2 omega with omega the area form of ghat.
    """
    q = u * u + v * v
    one_plus = 1.0 + q
    h = (4.0 / lam) / (one_plus * one_plus)
    a_u = (4.0 / lam) * v / one_plus
    a_v = -(4.0 / lam) * u / one_plus
    return h, a_u, a_v


def connection_curvature_residual(lam: float, u: float, v: float) -> float:
    """|dA + 2 omega| at (u, v), evaluated by jet exterior differentiation."""
    ju = Jet2.variable(u, 0, 2)
    jv = Jet2.variable(v, 1, 2)
    h, a_u, a_v = _base_blocks(lam, ju, jv)
    # dA = (d_u a_v - d_v a_u) du ^ dv ; omega = h du ^ dv
    curl = a_v.grad[0] - a_u.grad[1]
    return abs(curl + 2.0 * h.value)


def _fibration_metric(a_coef, b_coef, c_coef, lam, psi, u, v):
    """Metric a dr^2 + b theta^2 + c ghat as a 4x4 component matrix.

    a_coef, b_coef, c_coef are the radial coefficients (already evaluated
    at the radial coordinate); psi is unused since theta = dpsi + A has
    psi-independent components.
    """
    h, a_u, a_v = _base_blocks(lam, u, v)
    ch = c_coef * h
    return [
        [a_coef, 0.0, 0.0, 0.0],
        [0.0, b_coef, b_coef * a_u, b_coef * a_v],
        [0.0, b_coef * a_u, b_coef * a_u * a_u + ch, b_coef * a_u * a_v],
        [0.0, b_coef * a_v, b_coef * a_u * a_v, b_coef * a_v * a_v + ch],
    ]


def page_pope_chart(params: FamilyParams) -> ChartMetric:
    """The 4-dimensional chart (r, psi, u, v) of the n = 1 family metric.

    Domain: r > r1, psi in (0, 2 pi), (u, v) in the open unit disk.
    """
    if params.n != 1:
        raise UnsupportedDimension("only the n = 1 chart is provided")
    p = solve_profile(params)
    pcoeffs = {e: float(c) for e, c in p.items()}
    cf = float(params.c)
    lamf = float(params.lam)
    r1f = float(params.r1)

    def metric(x):
        r, psi, u, v = x
        w = r * r - 1.0
        pval = laurent_eval(pcoeffs, r)
        return _fibration_metric(w / pval, cf * cf * pval / w, cf * w, lamf, psi, u, v)

    def in_domain(pt):
        r, psi, u, v = (float(t) for t in pt)
        return r > r1f and 0.0 < psi < 2 * math.pi and u * u + v * v < 1.0

    return ChartMetric(4, ("r", "psi", "u", "v"), metric, in_domain, label=f"page-pope n=1 r1={params.r1}")


def rescaled_chart(profile: RescaledProfile) -> ChartMetric:
    """The limit chart (rho, psi, u, v): U^-1 drho^2 + U rho^2 theta^2 + rho^2 ghat."""
    if profile.n != 1:
        raise UnsupportedDimension("only the n = 1 chart is provided")
    ucoeffs = {e: float(c) for e, c in profile.as_laurent().items()}
    lamf = float(profile.lam)
    rho1f = profile.rho1

    def metric(x):
        rho, psi, u, v = x
        uval = laurent_eval(ucoeffs, rho)
        rho_sq = rho * rho
        return _fibration_metric(1.0 / uval, uval * rho_sq, rho_sq, lamf, psi, u, v)

    def in_domain(pt):
        rho, psi, u, v = (float(t) for t in pt)
        return rho > rho1f and 0.0 < psi < 2 * math.pi and u * u + v * v < 1.0

    return ChartMetric(4, ("rho", "psi", "u", "v"), metric, in_domain, label=f"rescaled rho1^2={profile.rho1_sq}")


def sphere_chart(lam: float) -> ChartMetric:
    """The base surface alone: ghat with Gauss curvature lam on the (u, v) disk."""

    lamf = float(lam)

    def metric(x):
        u, v = x
        q = u * u + v * v
        h = (4.0 / lamf) / ((1.0 + q) * (1.0 + q))
        return [[h, 0.0], [0.0, h]]

    def in_domain(pt):
        u, v = (float(t) for t in pt)
        return u * u + v * v < 4.0

    return ChartMetric(2, ("u", "v"), metric, in_domain, label=f"sphere lam={lam}")


def euclidean_chart(dim: int = 4) -> ChartMetric:
    def metric(x):
        return [[1.0 if i == j else 0.0 for j in range(dim)] for i in range(dim)]

    return ChartMetric(dim, tuple(f"x{i}" for i in range(dim)), metric, lambda pt: True, label=f"euclidean d={dim}")


def scaled_chart(chart: ChartMetric, factor: float) -> ChartMetric:
    """The same chart with metric multiplied by a positive constant."""
    if factor <= 0:
        raise ValueError("factor must be positive")

    def metric(x):
        rows = chart.metric(x)
        return [[factor * e for e in row] for row in rows]

    return ChartMetric(chart.dim, chart.coords, metric, chart.in_domain, label=f"{chart.label} x{factor}")


def uv_inverted_chart(chart: ChartMetric) -> ChartMetric:
    """Pull the chart back under (u, v) -> (u, v)/(u^2+v^2) on the last two coordinates.

    The inversion is a diffeomorphism of the punctured plane, so every
    curvature invariant must agree with the base chart at corresponding
    points; the new domain is the exterior Q > 1 of the unit circle.
    """
    if chart.dim != 4:
        raise UnsupportedDimension("uv inversion expects a 4-dimensional chart")

    def mapped(x):
        x0, x1, U, V = x
        Q = U * U + V * V
        return x0, x1, U / Q, V / Q, Q

    def metric(x):
        x0, x1, U, V = x
        _, _, u, v, Q = mapped(x)
        M = chart.metric((x0, x1, u, v))
        Qsq = Q * Q
        duU = (V * V - U * U) / Qsq
        duV = -2.0 * U * V / Qsq
        dvU = duV
        dvV = (U * U - V * V) / Qsq
        jac = [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, duU, duV],
            [0.0, 0.0, dvU, dvV],
        ]
        out = []
        for a in range(4):
            row = []
            for b in range(4):
                acc = 0.0
                for cidx in range(4):
                    for didx in range(4):
                        jc = jac[cidx][a]
                        jd = jac[didx][b]
                        if isinstance(jc, float) and jc == 0.0:
                            continue
                        if isinstance(jd, float) and jd == 0.0:
                            continue
                        acc = acc + jc * jd * M[cidx][didx]
                row.append(acc)
            out.append(row)
        return out

    def in_domain(pt):
        x0, x1, U, V = (float(t) for t in pt)
        Q = U * U + V * V
        if Q <= 1.0:
            return False
        return chart.in_domain((x0, x1, U / Q, V / Q))

    return ChartMetric(4, chart.coords, metric, in_domain, label=f"{chart.label} inverted")
