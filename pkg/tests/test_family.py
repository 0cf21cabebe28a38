"""Family construction: profile ODE, edge/conic models, audits, scaling."""

import random
from fractions import Fraction as F

import pytest

from pelab.family import (
    AuditMismatch,
    ConicCase,
    EdgeCase,
    FamilyParams,
    NoSmoothMetric,
    PositivityViolation,
    asymptotic_coefficients,
    cone_angle,
    cone_angle_conic_limit,
    cone_angle_slope,
    conformal_infinity,
    conic_model,
    cpn_catalogue,
    edge_model,
    expand_at_edge,
    family_report,
    metric_coefficients,
    positivity_check,
    profile_ode_rhs,
    profile_slope_at_r1,
    scaling_action,
    smooth_c,
    smooth_c_printed,
    solve_profile,
    z_scale,
)
from pelab.laurent import LaurentPoly

HYPERBOLIC = FamilyParams(n=1, lam=F(4), c=F(1), Lambda=F(-3), r1=F(1))
CONIC = FamilyParams(n=1, lam=F(2), c=F(1, 3), Lambda=F(-3), r1=F(1))
EDGE = FamilyParams(n=1, lam=F(2), c=F(1, 3), Lambda=F(-3), r1=F(2))


def random_params(rng, n_max=4, r1_min=1):
    n = rng.randint(1, n_max)
    rat = lambda lo, hi: F(rng.randint(lo, hi), rng.randint(1, 4))
    r1 = F(r1_min) + (F(rng.randint(1, 8), rng.randint(1, 4)) if rng.random() < 0.8 or r1_min > 1 else 0)
    return FamilyParams(n=n, lam=rat(1, 8), c=rat(1, 6), Lambda=-rat(1, 6), r1=r1)


def test_profile_fixtures():
    assert solve_profile(HYPERBOLIC) == LaurentPoly({2: 1, 0: -1}) ** 2
    assert solve_profile(CONIC) == LaurentPoly({4: 1, 1: -4, 0: 3})


def test_profile_root_condition():
    rng = random.Random(11)
    for _ in range(20):
        params = random_params(rng)
        assert solve_profile(params)(params.r1) == 0


def test_profile_ode_identity_exact():
    rng = random.Random(5)
    r_inv = LaurentPoly.term(1, -1)
    for _ in range(30):
        params = random_params(rng)
        p = solve_profile(params)
        assert (r_inv * p).derivative() == profile_ode_rhs(params)


def test_profile_slope():
    assert profile_slope_at_r1(HYPERBOLIC, solve_profile(HYPERBOLIC)) == 0
    assert profile_slope_at_r1(EDGE, solve_profile(EDGE)) == F(45, 2)


def test_profile_slope_positive_for_edge_params():
    rng = random.Random(23)
    for _ in range(25):
        params = random_params(rng, r1_min=1 + F(1, 7))
        assert profile_slope_at_r1(params, solve_profile(params)) > 0


def test_metric_coefficients_hyperbolic():
    coeffs = metric_coefficients(HYPERBOLIC, solve_profile(HYPERBOLIC))
    one = LaurentPoly.constant(1)
    w = LaurentPoly({2: 1, 0: -1})
    from pelab.laurent import LaurentQuotient

    assert coeffs.a == LaurentQuotient(one, w)
    assert coeffs.b == LaurentQuotient(w, one)
    assert coeffs.base == w


def test_metric_coefficients_identities():
    rng = random.Random(3)
    for _ in range(10):
        params = random_params(rng)
        coeffs = metric_coefficients(params, solve_profile(params))
        assert coeffs.a * coeffs.b == params.c**2
        assert coeffs.base(params.r1) == params.c * (params.r1**2 - 1)


def test_positivity_fixtures():
    assert solve_profile(CONIC)(2) == 11
    assert solve_profile(HYPERBOLIC)(2) == 9
    report = positivity_check(CONIC, solve_profile(CONIC), 25)
    assert report.ok and len(report.samples) == 25


def test_positivity_random():
    rng = random.Random(7)
    for _ in range(15):
        params = random_params(rng)
        assert positivity_check(params, solve_profile(params), 8).ok


def test_positivity_violation_detected():
    wrong = LaurentPoly({4: 1, 0: -1000})
    with pytest.raises(PositivityViolation):
        positivity_check(EDGE, wrong, 10)


def test_cone_angle_fixture():
    assert cone_angle(EDGE) == F(5, 4)


def test_cone_angle_conic_raises():
    with pytest.raises(ConicCase):
        cone_angle(HYPERBOLIC)


def test_cone_angle_near_conic_limit():
    # alpha -> lam/2 as r1 -> 1 with (c, Lambda, lam) fixed
    close = FamilyParams(n=1, lam=F(2), c=F(1, 3), Lambda=F(-3), r1=1 + F(1, 10**9))
    assert abs(cone_angle(close) - F(2) / 2) < F(1, 10**6)
    assert cone_angle_conic_limit(CONIC) == 1
    assert cone_angle_conic_limit(HYPERBOLIC) == 2  # n + 1 at the k = 1 catalogue


def test_cone_angle_three_forms_agree():
    # cone_angle itself asserts agreement of its three closed forms
    rng = random.Random(31)
    for _ in range(100):
        params = random_params(rng, r1_min=1 + F(1, 9))
        alpha = cone_angle(params)
        assert alpha > 0


def test_edge_model_fixture():
    em = edge_model(EDGE, solve_profile(EDGE))
    assert em.alpha == F(5, 4)
    assert em.beta_sq_derived == F(15, 8)
    assert em.beta_sq_paper == F(75, 32)
    assert em.scale == F(8, 15)
    assert em.beta_sq_derived == em.alpha * (EDGE.r1**2 - 1) / 2


def test_expand_at_edge_fixture():
    scale, alpha_sq, beta_sq = expand_at_edge(EDGE, solve_profile(EDGE))
    assert alpha_sq == F(25, 16)
    assert beta_sq == F(15, 8)
    assert scale > 0
    # the raw theta^2 s^2 coefficient is scale * alpha_sq by definition
    pp = profile_slope_at_r1(EDGE, solve_profile(EDGE))
    assert scale * alpha_sq == EDGE.c**2 * pp / (EDGE.r1**2 - 1) ** EDGE.n


def test_expand_at_edge_arbitrates():
    # jet oracle agrees with alpha^2 and the derived beta^2, never the printed one
    rng = random.Random(41)
    for _ in range(100):
        params = random_params(rng, r1_min=1 + F(1, 9))
        p = solve_profile(params)
        em = edge_model(params, p)
        _, alpha_sq, beta_sq = expand_at_edge(params, p)
        assert alpha_sq == em.alpha**2
        assert beta_sq == em.beta_sq_derived
        if em.alpha != 1:
            assert beta_sq != em.beta_sq_paper


def test_expand_at_edge_smooth_params():
    c = smooth_c(1, F(2), F(-3), F(2))
    params = FamilyParams(n=1, lam=F(2), c=c, Lambda=F(-3), r1=F(2))
    _, alpha_sq, _ = expand_at_edge(params, solve_profile(params))
    assert alpha_sq == 1


def test_conic_model_fixture():
    cm = conic_model(CONIC, solve_profile(CONIC))
    assert cm.k_leading == 6  # P = (r-1)^2 (r^2+2r+3) has jet 6 (r-1)^2
    assert cm.theta_coeff == F(1, 4)
    assert cm.base_coeff_derived == F(1, 2)
    assert cm.base_coeff_paper == F(1, 6)
    with pytest.raises(EdgeCase):
        conic_model(EDGE, solve_profile(EDGE))


def test_conic_model_random():
    rng = random.Random(13)
    for _ in range(25):
        base = random_params(rng)
        params = FamilyParams(n=base.n, lam=base.lam, c=base.c, Lambda=base.Lambda, r1=F(1))
        cm = conic_model(params, solve_profile(params))
        assert cm.theta_coeff == (params.lam / (2 * params.n + 2)) ** 2
        assert cm.base_coeff_derived == params.lam / (2 * params.n + 2)
        if params.c != 1:
            assert cm.base_coeff_derived != cm.base_coeff_paper


def test_smooth_c_fixture():
    assert smooth_c(1, F(2), F(-3), F(2)) == F(2, 9)


def test_smooth_c_limit():
    # c -> 1/(2n+1) as r1 -> 1 in the lam = 2 family
    t = F(1, 10**6)
    for n in (1, 2, 3):
        c = smooth_c(n, F(2), F(-(2 * n + 1)), 1 + t)
        assert abs(c - F(1, 2 * n + 1)) < F(1, 10**5)


def test_smooth_c_errors():
    with pytest.raises(NoSmoothMetric):
        smooth_c(1, F(4), F(-3), F(3, 2))
    with pytest.raises(ConicCase):
        smooth_c(1, F(2), F(-3), F(1))


def test_smooth_c_round_trip_random():
    rng = random.Random(17)
    for _ in range(50):
        n = rng.randint(1, 4)
        r1 = 1 + F(rng.randint(1, 12), rng.randint(1, 4))
        lam = 2 * r1 * F(rng.randint(1, 9), 10)  # keeps 2 r1 > lam > 0
        Lambda = -F(rng.randint(1, 7), rng.randint(1, 3))
        c = smooth_c(n, lam, Lambda, r1)
        assert cone_angle(FamilyParams(n=n, lam=lam, c=c, Lambda=Lambda, r1=r1)) == 1


def test_smooth_c_printed_differs_by_half_t():
    for n, lam, t in [(1, F(2), F(1)), (2, F(2), F(1, 2)), (1, F(3, 2), F(3))]:
        direct = smooth_c(n, lam, -(2 * n + 1), 1 + t)
        assert smooth_c_printed(n, lam, t) == direct * t / 2


def test_conformal_infinity():
    for n in (1, 2, 3):
        assert conformal_infinity(cpn_catalogue(n, 1)).berger_coeff == 1
        for k in (2, 3, 5):
            assert conformal_infinity(cpn_catalogue(n, k)).berger_coeff == F(1, k)


def test_scaling_action():
    assert scaling_action(CONIC, 1) == CONIC
    scaled = scaling_action(CONIC, 3)
    assert scaled.c == 1 and scaled.Lambda == -1
    # the profile scales by 1/a (rerunning the solver is the oracle)
    assert solve_profile(scaled) == F(1, 3) * solve_profile(CONIC)


def test_scaling_invariants():
    rng = random.Random(29)
    for _ in range(20):
        params = random_params(rng, r1_min=1 + F(1, 5))
        a = F(rng.randint(1, 9), rng.randint(1, 9))
        scaled = scaling_action(params, a)
        assert cone_angle(scaled) == cone_angle(params)
        assert conformal_infinity(scaled).berger_coeff == conformal_infinity(params).berger_coeff
        assert solve_profile(scaled) == solve_profile(params) / a


def test_z_scale():
    assert z_scale(HYPERBOLIC) == 0
    assert z_scale(EDGE) == 1
    # along the lam = 2 smooth-cone family the factor decreases to 0
    previous = None
    for t in (F(1, 2), F(1, 4), F(1, 8), F(1, 16), F(1, 64)):
        r1 = 1 + t
        c = smooth_c(1, F(2), F(-3), r1)
        value = z_scale(FamilyParams(n=1, lam=F(2), c=c, Lambda=F(-3), r1=r1))
        assert value > 0
        if previous is not None:
            assert value < previous
        previous = value
    assert previous < F(1, 30)


def test_cpn_catalogue():
    entry = cpn_catalogue(1, 1)
    assert entry == HYPERBOLIC
    entry = cpn_catalogue(2, 3, r1=F(3, 2))
    assert entry.lam == F(6, 3) and entry.c == F(1, 3) and entry.Lambda == -5
    # k = n+1 is the canonical-bundle normalisation lam = 2
    for n in (1, 2, 3):
        assert cpn_catalogue(n, n + 1).lam == 2


def test_cone_angle_monotone_k1():
    # exact derivative sign plus a 100-point sweep for the k=1 catalogue
    for n in (1, 2, 3):
        params = cpn_catalogue(n, 1, r1=F(3, 2))
        assert cone_angle_slope(params, at_r1=F(1)) == F(2 * n + 1, 2) - F(1, 2)
        previous = None
        for i in range(100):
            r1 = 1 + F(i + 1, 11)
            assert cone_angle_slope(params, at_r1=r1) > 0
            alpha = cone_angle(cpn_catalogue(n, 1, r1=r1))
            if previous is not None:
                assert alpha > previous
            previous = alpha


def test_asymptotic_coefficients():
    p = solve_profile(EDGE)
    report = asymptotic_coefficients(EDGE, p)
    assert report.dr2_coeff == 1 and report.theta2_coeff == F(1, 9) and report.base_coeff == F(1, 3)
    assert p.coefficient(4) == EDGE.abs_Lambda / 3
    # deviations shrink by at least 5x per decade (measured: ~9x to ~100x)
    for row in report.decade_factors:
        for factor in row:
            assert factor is None or factor > 5
    # hyperbolic dr^2 ratio: A(r) r^2 |Lambda|/(2n+1) = r^2/(r^2-1)
    hyp_report = asymptotic_coefficients(HYPERBOLIC, solve_profile(HYPERBOLIC))
    assert hyp_report.deviations[0][0] == abs(F(100, 99) - 1)


def test_zero_section_collapse_exponents():
    # c = 1 family: ghat factor ~ 2t (exponent 1), diameter factor ~ sqrt(2t)
    from pelab.family import zero_section_collapse_exponents

    z_slope, diam_slope = zero_section_collapse_exponents(1, [F(1, 10), F(1, 100), F(1, 1000), F(1, 10000)])
    assert abs(z_slope - 1) < 0.05
    assert abs(diam_slope - F(1, 2)) < 0.03


def test_family_report_keys():
    report = family_report(EDGE)
    for key in ("n", "lambda", "c", "Lambda", "r1", "alpha", "beta_sq_derived", "beta_sq_paper", "berger_coeff", "z_scale", "P_text"):
        assert key in report
    assert report["P_text"] == "r^4 - 19/2*r + 3"
    assert report["alpha"] == "5/4"


def test_params_validation():
    with pytest.raises(ValueError):
        FamilyParams(n=0, lam=F(2), c=F(1), Lambda=F(-1), r1=F(1))
    with pytest.raises(ValueError):
        FamilyParams(n=1, lam=F(-2), c=F(1), Lambda=F(-1), r1=F(1))
    with pytest.raises(ValueError):
        FamilyParams(n=1, lam=F(2), c=F(1), Lambda=F(1), r1=F(1))
    with pytest.raises(ValueError):
        FamilyParams(n=1, lam=F(2), c=F(1), Lambda=F(-1), r1=F(1, 2))
