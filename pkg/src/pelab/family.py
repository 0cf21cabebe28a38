"""Closed-form construction of a cohomogeneity-one Einstein metric family.

The family lives on a complex line bundle over a Kaehler-Einstein base
(M, ghat) with Ric(ghat) = lam * ghat, dim_C M = n.  Fixing constants
c > 0, Lambda < 0 and a root radius r1 >= 1, the radial profile
polynomial P(r) is the exact solution of

    d/dr ( r^-1 P ) = r^-2 [ |Lambda| (r^2-1)^(n+1) + (lam/c) (r^2-1)^n ],
    P(r1) = 0,

and on {r > r1} the metric

    g = (r^2-1)^n P^-1 dr^2  +  c^2 P (r^2-1)^-n theta^2  +  c (r^2-1) ghat

satisfies Ric(g) = Lambda * g.  For r1 > 1 the zero section is an edge
(cone angle 2*pi*alpha); for r1 = 1 it collapses to an isolated conic
point.  Everything in this module is exact rational arithmetic; floats
enter the package only through the curvature engine.

Several constants attached to this family circulate in two inequivalent
closed forms (the edge base coefficient beta^2, the smooth-cone value of
c, the conic base coefficient, the rescaled-limit inner radius).  For
each, this module computes the first-principles value, keeps the other
printed form alongside it, and uses an exact jet expansion as arbiter.
No candidate is silently preferred.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .laurent import LaurentPoly, LaurentQuotient, _coerce


class AuditMismatch(AssertionError):
    """Two exact routes to the same quantity disagreed (implementation bug)."""


class PositivityViolation(ValueError):
    """The profile polynomial failed to be positive where required."""


class ConicCase(ValueError):
    """Operation requires r1 > 1 but the family is conic (r1 = 1)."""


class EdgeCase(ValueError):
    """Operation requires r1 = 1 but the family has an edge (r1 > 1)."""


class NoSmoothMetric(ValueError):
    """No c > 0 gives cone angle 2*pi at this (lam, r1)."""


class AsymptoticsMismatch(ValueError):
    """Measured large-r behaviour contradicts the claimed leading terms."""


@dataclass(frozen=True)
class FamilyParams:
    """One member of the metric family.

    n    complex dimension of the base M (n >= 1)
    lam  Einstein constant of the base, Ric(ghat) = lam * ghat  (lam > 0)
    c    fibre scale (c > 0)
    Lambda  Einstein constant of the total metric (Lambda < 0)
    r1   root radius (r1 >= 1); r1 = 1 is the conic case
    """

    n: int
    lam: Fraction
    c: Fraction
    Lambda: Fraction
    r1: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lam", _coerce(self.lam))
        object.__setattr__(self, "c", _coerce(self.c))
        object.__setattr__(self, "Lambda", _coerce(self.Lambda))
        object.__setattr__(self, "r1", _coerce(self.r1))
        if not (isinstance(self.n, int) and self.n >= 1):
            raise ValueError(f"n must be a positive integer, got {self.n!r}")
        if self.lam <= 0:
            raise ValueError(f"lam must be > 0, got {self.lam}")
        if self.c <= 0:
            raise ValueError(f"c must be > 0, got {self.c}")
        if self.Lambda >= 0:
            raise ValueError(f"Lambda must be < 0, got {self.Lambda}")
        if self.r1 < 1:
            raise ValueError(f"r1 must be >= 1, got {self.r1}")

    @property
    def abs_Lambda(self) -> Fraction:
        return -self.Lambda

    @property
    def is_conic(self) -> bool:
        return self.r1 == 1

    def as_dict(self) -> dict:
        """JSON-friendly record; exact rationals as 'p/q' strings."""
        return {
            "n": self.n,
            "lambda": str(self.lam),
            "c": str(self.c),
            "Lambda": str(self.Lambda),
            "r1": str(self.r1),
        }


@dataclass(frozen=True)
class MetricCoefficients:
    """The three radial coefficient functions of the metric.

    a multiplies dr^2, b multiplies theta^2, base multiplies ghat.
    a and b are quotients of Laurent polynomials; a*b = c^2 identically.
    """

    a: LaurentQuotient
    b: LaurentQuotient
    base: LaurentPoly


@dataclass(frozen=True)
class EdgeModel:
    """Near-edge model  scale * ( ds^2 + alpha^2 s^2 theta^2 + beta^2 ghat ).

    Both circulating candidates for beta^2 are kept:
    beta_sq_derived = alpha (r1^2-1)/2 comes out of the expansion,
    beta_sq_paper   = alpha^2 (r1^2-1)/2 is the printed form.
    expand_at_edge arbitrates.
    """

    scale: Fraction
    alpha: Fraction
    beta_sq_derived: Fraction
    beta_sq_paper: Fraction


@dataclass(frozen=True)
class ConicModel:
    """Conic model  ds^2 + s^2 ( theta_coeff theta^2 + base_coeff ghat ).

    k_leading is the exact leading Taylor coefficient of P at r = 1
    (P(1+u) = k_leading u^(n+1) + ...); k_quoted = 2^(n+1)/(n+1) is the
    printed constant, which matches only when lam/c = 2.  base_coeff is
    kept in both circulating forms, the jet-derived lam/(2n+2) and the
    printed c*lam/(2n+2).
    """

    theta_coeff: Fraction
    base_coeff_derived: Fraction
    base_coeff_paper: Fraction
    k_leading: Fraction
    k_quoted: Fraction


@dataclass(frozen=True)
class ConformalInfinity:
    """Boundary representative  berger_coeff * theta^2 + ghat."""

    berger_coeff: Fraction


@dataclass(frozen=True)
class PositivityReport:
    ok: bool
    samples: tuple
    sign_argument: str


@dataclass(frozen=True)
class AsymptoticsReport:
    """Leading coefficients of g for r -> infinity and the measured approach.

    Claimed: g ~ dr2_coeff dr^2/r^2 + theta2_coeff r^2 theta^2 + base_coeff r^2 ghat.
    ratios[k][i] is (actual coefficient / claimed leading) - 1 at radius radii[i].
    """

    dr2_coeff: Fraction
    theta2_coeff: Fraction
    base_coeff: Fraction
    radii: tuple
    deviations: tuple
    decade_factors: tuple


# -- exact first-order jets at a rational point ------------------------


class _Dual:
    """a + b*eps with eps^2 = 0, over exact rationals.

    Used to extract P(r1) and P'(r1) from the polynomial itself, as an
    expansion route independent of the closed-form slope formula.
    """

    __slots__ = ("a", "b")

    def __init__(self, a, b):
        self.a = _coerce(a)
        self.b = _coerce(b)

    def __add__(self, other):
        other = other if isinstance(other, _Dual) else _Dual(other, 0)
        return _Dual(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __mul__(self, other):
        other = other if isinstance(other, _Dual) else _Dual(other, 0)
        return _Dual(self.a * other.a, self.a * other.b + self.b * other.a)

    __rmul__ = __mul__

    def reciprocal(self):
        if self.a == 0:
            raise ZeroDivisionError("dual number with zero value part")
        return _Dual(1 / self.a, -self.b / self.a**2)

    def __pow__(self, k: int):
        if k < 0:
            return self.reciprocal() ** (-k)
        out = _Dual(1, 0)
        for _ in range(k):
            out = out * self
        return out


def _eval_dual(p: LaurentPoly, at: Fraction) -> _Dual:
    x = _Dual(at, 1)
    out = _Dual(0, 0)
    for e, c in p.items():
        out = out + c * x**e
    return out


# -- the profile polynomial ---------------------------------------------


def _r2m1(n: int) -> LaurentPoly:
    """(r^2 - 1)^n"""
    return LaurentPoly({2: 1, 0: -1}) ** n


def profile_ode_rhs(params: FamilyParams) -> LaurentPoly:
    """Right-hand side r^-2 [ |Lambda| (r^2-1)^(n+1) + (lam/c) (r^2-1)^n ]."""
    bracket = params.abs_Lambda * _r2m1(params.n + 1) + (params.lam / params.c) * _r2m1(params.n)
    return LaurentPoly.term(1, -2) * bracket


def solve_profile(params: FamilyParams) -> LaurentPoly:
    """Exact profile polynomial P: d/dr(r^-1 P) = profile_ode_rhs, P(r1) = 0.

    The rhs has only even exponents, so the r^-1 obstruction in
    antiderivative never triggers.
    """
    q0 = profile_ode_rhs(params).antiderivative()
    q = q0 - q0(params.r1)
    return LaurentPoly.var() * q


def profile_slope_at_r1(params: FamilyParams, p: LaurentPoly) -> Fraction:
    """P'(r1) by the closed form, audited against the polynomial derivative.

    Closed form: (1/r1) [ |Lambda| (r1^2-1)^(n+1) + (lam/c) (r1^2-1)^n ].
    """
    w = params.r1**2 - 1
    closed = (params.abs_Lambda * w ** (params.n + 1) + (params.lam / params.c) * w**params.n) / params.r1
    direct = p.derivative()(params.r1)
    if closed != direct:
        raise AuditMismatch(f"P'(r1): closed form {closed} != polynomial derivative {direct}")
    return closed


def metric_coefficients(params: FamilyParams, p: LaurentPoly) -> MetricCoefficients:
    """The three coefficient functions of the metric, exactly."""
    w = _r2m1(params.n)
    return MetricCoefficients(
        a=LaurentQuotient(w, p),
        b=LaurentQuotient(params.c**2 * p, w),
        base=params.c * _r2m1(1),
    )


def positivity_check(params: FamilyParams, p: LaurentPoly, samples: int) -> PositivityReport:
    """P > 0 on (r1, r1+10] by sampling, plus the ODE sign argument.

    The rhs of the profile ODE is a positive combination of positive
    powers of (r^2-1) for r > 1, so r^-1 P increases from 0 at r1 and
    P > 0 follows on all of (r1, infinity).
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    pts = []
    for i in range(1, samples + 1):
        r = params.r1 + Fraction(10 * i, samples)
        value = p(r)
        if value <= 0:
            raise PositivityViolation(f"P({r}) = {value} <= 0")
        pts.append((r, value))
    if params.abs_Lambda <= 0 or params.lam / params.c <= 0:
        raise PositivityViolation("ODE sign argument needs |Lambda| > 0 and lam/c > 0")
    argument = (
        "rhs of the profile ODE is a positive combination of (r^2-1)^k for r > 1, "
        "so r^-1 P increases from 0 at r1"
    )
    return PositivityReport(ok=True, samples=tuple(pts), sign_argument=argument)


# -- edge and conic geometry ---------------------------------------------


def cone_angle(params: FamilyParams) -> Fraction:
    """The cone-angle factor alpha (cone angle along the edge is 2*pi*alpha).

    Three closed forms are evaluated and must agree exactly:
      (c|Lambda|/(2 r1)) (r1^2-1) + lam/(2 r1)
      c P'(r1) / (2 (r1^2-1)^n)
      (c|Lambda|/2) r1 + (lam - c|Lambda|) / (2 r1)
    """
    if params.is_conic:
        raise ConicCase("r1 = 1 has no edge; use conic_model")
    cL = params.c * params.abs_Lambda
    r1 = params.r1
    f1 = cL / (2 * r1) * (r1**2 - 1) + params.lam / (2 * r1)
    pp = profile_slope_at_r1(params, solve_profile(params))
    f2 = params.c * pp / (2 * (r1**2 - 1) ** params.n)
    f3 = cL / 2 * r1 + (params.lam - cL) / (2 * r1)
    if not (f1 == f2 == f3):
        raise AuditMismatch(f"cone angle closed forms disagree: {f1}, {f2}, {f3}")
    return f1


def cone_angle_conic_limit(params: FamilyParams) -> Fraction:
    """Continuation of alpha to r1 = 1: the limit value lam/2."""
    return params.lam / 2


def cone_angle_slope(params: FamilyParams, at_r1: Fraction | None = None) -> Fraction:
    """d(alpha)/d(r1) at fixed (c, Lambda, lam): c|Lambda|/2 - (lam - c|Lambda|)/(2 r1^2)."""
    r1 = params.r1 if at_r1 is None else _coerce(at_r1)
    cL = params.c * params.abs_Lambda
    return cL / 2 - (params.lam - cL) / (2 * r1**2)


def edge_model(params: FamilyParams, p: LaurentPoly) -> EdgeModel:
    """Closed-form near-edge model data for r1 > 1 (see EdgeModel)."""
    if params.is_conic:
        raise ConicCase("r1 = 1 has no edge; use conic_model")
    pp = profile_slope_at_r1(params, p)
    w = params.r1**2 - 1
    alpha = cone_angle(params)
    return EdgeModel(
        scale=4 * w**params.n / pp,
        alpha=alpha,
        beta_sq_derived=alpha * w / 2,
        beta_sq_paper=alpha**2 * w / 2,
    )


def expand_at_edge(params: FamilyParams, p: LaurentPoly) -> tuple[Fraction, Fraction, Fraction]:
    """Exact jet expansion of the metric at r = r1 + s^2; the arbiter.

    Evaluates P and (r^2-1)^n on the dual number r1 + eps, keeps the
    leading order in w = r - r1, substitutes dr^2 = 4 w ds^2, and factors
    the model scale * (ds^2 + alpha_sq s^2 theta^2 + beta_sq ghat).
    Returns (scale, alpha_sq, beta_sq).
    """
    if params.is_conic:
        raise ConicCase("r1 = 1 has no edge; use conic_model")
    pd = _eval_dual(p, params.r1)
    if pd.a != 0:
        raise AuditMismatch(f"P(r1) = {pd.a} != 0")
    pp = pd.b
    n0 = _eval_dual(_r2m1(params.n), params.r1).a
    # dr^2 slot: (r^2-1)^n / P ~ n0/(pp w); times 4w gives the ds^2 coefficient
    scale = 4 * n0 / pp
    # theta^2 slot: c^2 P (r^2-1)^-n ~ (c^2 pp / n0) w = (c^2 pp / n0) s^2 * (scale/scale)
    alpha_sq = (params.c**2 * pp / n0) / scale
    # ghat slot: c (r1^2 - 1), then factor out the scale
    beta_sq = params.c * (params.r1**2 - 1) / scale
    return scale, alpha_sq, beta_sq


def _shift_to_one(p: LaurentPoly) -> LaurentPoly:
    """P(1 + u) as an exact polynomial in u (requires no negative exponents)."""
    if p and p.min_exponent < 0:
        raise ValueError("Taylor shift needs a genuine polynomial")
    u_plus_1 = LaurentPoly({1: 1, 0: 1})
    out = LaurentPoly()
    for e, c in p.items():
        out = out + c * u_plus_1**e
    return out


def conic_model(params: FamilyParams, p: LaurentPoly) -> ConicModel:
    """Exact conic model at r1 = 1 via the Taylor jet of P at r = 1.

    P(1+u) = K u^(n+1) + ... with K = (lam/c) 2^n / (n+1); substituting
    u = (K/2^(n+2)) s^2 normalises the ds^2 slot to 1 and yields
    theta_coeff = (c K / 2^(n+1))^2 and base coefficient c K / 2^(n+1).
    """
    if not params.is_conic:
        raise EdgeCase("r1 > 1 has an edge; use edge_model")
    n = params.n
    shifted = _shift_to_one(p)
    for j in range(n + 1):
        if shifted.coefficient(j) != 0:
            raise AuditMismatch(f"P should vanish to order {n + 1} at r = 1; u^{j} term is {shifted.coefficient(j)}")
    k_leading = shifted.coefficient(n + 1)
    k_closed = (params.lam / params.c) * Fraction(2**n, n + 1)
    if k_leading != k_closed:
        raise AuditMismatch(f"leading jet constant {k_leading} != ODE closed form {k_closed}")
    ck = params.c * k_leading / 2 ** (n + 1)
    theta_coeff = ck**2
    if theta_coeff != (params.lam / (2 * n + 2)) ** 2:
        raise AuditMismatch("theta coefficient disagrees with (lam/(2n+2))^2")
    return ConicModel(
        theta_coeff=theta_coeff,
        base_coeff_derived=ck,
        base_coeff_paper=params.c * params.lam / (2 * n + 2),
        k_leading=k_leading,
        k_quoted=Fraction(2 ** (n + 1), n + 1),
    )


def smooth_c(n: int, lam, Lambda, r1) -> Fraction:
    """The unique c > 0 with cone angle exactly 2*pi (alpha = 1).

    Solving alpha = 1 gives c = (2 r1 - lam) / (|Lambda| (r1^2 - 1)),
    which requires 2 r1 > lam.  The result is audited by substituting
    back into cone_angle.
    """
    lam, Lambda, r1 = _coerce(lam), _coerce(Lambda), _coerce(r1)
    if r1 == 1:
        raise ConicCase("r1 = 1 is the conic case; no edge to smooth")
    if 2 * r1 <= lam:
        raise NoSmoothMetric(f"need 2*r1 > lam, got 2*{r1} <= {lam}")
    c = (2 * r1 - lam) / ((-Lambda) * (r1**2 - 1))
    check = cone_angle(FamilyParams(n=n, lam=lam, c=c, Lambda=Lambda, r1=r1))
    if check != 1:
        raise AuditMismatch(f"smooth_c round trip gave alpha = {check}")
    return c


def smooth_c_printed(n: int, lam, t) -> Fraction:
    """The printed smooth-cone value c_t = (1 + t - lam/2)/((2+t)(2n+1)).

    Kept for the formula audit; differs from smooth_c by a factor t/2.
    """
    lam, t = _coerce(lam), _coerce(t)
    return (1 + t - lam / 2) / ((2 + t) * (2 * n + 1))


def conformal_infinity(params: FamilyParams) -> ConformalInfinity:
    """Boundary conformal representative: (c|Lambda|/(2n+1)) theta^2 + ghat."""
    return ConformalInfinity(berger_coeff=params.c * params.abs_Lambda / (2 * params.n + 1))


def scaling_action(params: FamilyParams, a) -> FamilyParams:
    """(c, Lambda) -> (a c, Lambda/a); rescales the profile to P/a and g to a*g.

    The cone angle and the boundary berger coefficient depend on (c, Lambda)
    only through c|Lambda| and are invariant.  The equivariance
    solve_profile(new) == solve_profile(old)/a is asserted exactly.
    """
    a = _coerce(a)
    if a <= 0:
        raise ValueError(f"a must be > 0, got {a}")
    new = FamilyParams(n=params.n, lam=params.lam, c=a * params.c, Lambda=params.Lambda / a, r1=params.r1)
    if solve_profile(new) != (Fraction(1) / a) * solve_profile(params):
        raise AuditMismatch("profile did not scale by 1/a under (c, Lambda) -> (a c, Lambda/a)")
    return new


def z_scale(params: FamilyParams) -> Fraction:
    """The factor c (r1^2 - 1) multiplying ghat on the zero section.

    The zero section's diameter is sqrt(this) times diam(M, ghat); only
    the factor is reported.
    """
    return params.c * (params.r1**2 - 1)


def cpn_catalogue(n: int, k: int, r1=1) -> FamilyParams:
    """Degree -k bundle over CP^n: lam = (2n+2)/k, c = 1/k, Lambda = -(2n+1)."""
    if not (isinstance(k, int) and k >= 1):
        raise ValueError(f"k must be a positive integer, got {k!r}")
    return FamilyParams(
        n=n,
        lam=Fraction(2 * n + 2, k),
        c=Fraction(1, k),
        Lambda=Fraction(-(2 * n + 1)),
        r1=_coerce(r1),
    )


def asymptotic_coefficients(params: FamilyParams, p: LaurentPoly) -> AsymptoticsReport:
    """Leading large-r form of g and the measured approach to it.

    Claimed: g ~ ((2n+1)/|Lambda|) dr^2/r^2 + (c^2|Lambda|/(2n+1)) r^2 theta^2
    + c r^2 ghat.  Each actual coefficient, divided by its claimed leading
    term, is evaluated exactly at three geometrically spaced radii; the
    deviations from 1 must decay at least like O(1/r) per decade.
    """
    n, cL = params.n, params.abs_Lambda
    dr2 = Fraction(2 * n + 1) / cL
    th2 = params.c**2 * cL / (2 * n + 1)
    base = params.c
    top = p.coefficient(2 * n + 2)
    if top != cL / (2 * n + 1):
        raise AsymptoticsMismatch(f"leading coefficient of P is {top}, expected {cL / (2 * n + 1)}")
    coeffs = metric_coefficients(params, p)
    r0 = 10 if params.r1 < 9 else 10 * (int(params.r1) + 1)
    radii = tuple(Fraction(r0 * 10**j) for j in range(3))
    devs = []
    for r in radii:
        ratio_a = coeffs.a(r) / (dr2 / r**2)
        ratio_b = coeffs.b(r) / (th2 * r**2)
        ratio_c = coeffs.base(r) / (base * r**2)
        devs.append(tuple(abs(x - 1) for x in (ratio_a, ratio_b, ratio_c)))
    factors = []
    for j in (0, 1):
        row = []
        for i in range(3):
            if devs[j + 1][i] == 0:
                row.append(None)
                continue
            f = devs[j][i] / devs[j + 1][i]
            # O(1/r) decay across a decade means a factor of about 10 or more;
            # even-dominated profiles give about 100
            if f < 5:
                raise AsymptoticsMismatch(
                    f"deviation of coefficient {i} shrank only by {float(f):.3g} from r={radii[j]} to r={radii[j + 1]}"
                )
            row.append(f)
        factors.append(tuple(row))
    return AsymptoticsReport(
        dr2_coeff=dr2,
        theta2_coeff=th2,
        base_coeff=base,
        radii=radii,
        deviations=tuple(devs),
        decade_factors=tuple(factors),
    )


def zero_section_collapse_exponents(n: int, t_values) -> tuple[float, float]:
    """Measured scaling of the zero section as r1 = 1 + t collapses (c = 1 fixed).

    Returns the log-log slopes in t of the ghat factor c (r1^2 - 1) and of
    its square root (the diameter factor).  The factor behaves like 2t, so
    the measured exponents are about 1 and 1/2; they are reported, not
    asserted against any claimed order.
    """
    import math

    ts = [_coerce(t) for t in t_values]
    if len(ts) < 2 or any(t <= 0 for t in ts):
        raise ValueError("need at least two positive t values")
    logs_t = [math.log(float(t)) for t in ts]
    logs_z = [math.log(float(z_scale(cpn_catalogue(n, 1, r1=1 + t)))) for t in ts]
    tbar = sum(logs_t) / len(logs_t)
    zbar = sum(logs_z) / len(logs_z)
    slope = sum((a - tbar) * (b - zbar) for a, b in zip(logs_t, logs_z)) / sum((a - tbar) ** 2 for a in logs_t)
    return slope, slope / 2


def family_report(params: FamilyParams, samples: int = 25) -> dict:
    """Aggregate JSON-friendly record for one family member."""
    p = solve_profile(params)
    pos = positivity_check(params, p, samples)
    out = params.as_dict()
    out["P_text"] = p.to_text()
    out["berger_coeff"] = str(conformal_infinity(params).berger_coeff)
    out["z_scale"] = str(z_scale(params))
    out["positivity"] = "pass" if pos.ok else "fail"
    if params.is_conic:
        cm = conic_model(params, p)
        out["alpha"] = None
        out["beta_sq_derived"] = None
        out["beta_sq_paper"] = None
        out["conic"] = {
            "alpha_continuation": str(cone_angle_conic_limit(params)),
            "theta_coeff": str(cm.theta_coeff),
            "base_coeff_derived": str(cm.base_coeff_derived),
            "base_coeff_paper": str(cm.base_coeff_paper),
            "k_leading": str(cm.k_leading),
            "k_quoted": str(cm.k_quoted),
        }
    else:
        em = edge_model(params, p)
        out["alpha"] = str(em.alpha)
        out["beta_sq_derived"] = str(em.beta_sq_derived)
        out["beta_sq_paper"] = str(em.beta_sq_paper)
    return out
