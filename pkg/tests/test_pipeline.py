from __future__ import annotations

import json
import random
from fractions import Fraction

import pytest
import sympy as sp

from ballradius import pipeline
from ballradius.bounds import thm1_radius, thm3_radius, thm4_radius
from ballradius.harness import grid_contains_bounded, oracle_extent_grid, roots_inside
from ballradius.pipeline import (
    bounded_ball_certificate, cr_bounded, cr_meeting, deform_bounded, deform_meeting, exact_text,
    meeting_ball_certificate, sa_contain, sa_meet,
)
from ballradius.polyring import IntPoly
from ballradius.sgb import check_commutation, mult_matrix, validate_sgb

X = ("X1",)
XY = ("X1", "X2")


def P(text, variables=X):
    return IntPoly.parse(text, variables)


# --------------------------------------------------------------------------
# deformations and critical systems


def test_deform_bounded_example():
    plus, minus = deform_bounded(P("X1^2 - 4"))
    assert plus == P("zeta*X1^3 + 3*X1^2 - 12", ("X1", "zeta"))
    assert minus == P("-zeta*X1^3 + 3*X1^2 - 12", ("X1", "zeta"))


def test_cr_of_minus_variant_is_normalized():
    _, minus = deform_bounded(P("X1^2 - 4"))
    g = cr_bounded(minus, X, 2)
    assert g.generators == (P("zeta*X1^3 - 3*X1^2 + 12", ("X1", "zeta")),)
    assert validate_sgb(g).ok


def test_cr_hyperbola():
    q = P("X1*X2 - 1", XY)
    plus, _ = deform_bounded(q)
    g = cr_bounded(plus, XY, 2)
    v = ("X1", "X2", "zeta")
    assert g.generators == (P("zeta*X1^3 + 2*X1*X2 - 3", v), P("zeta*X2^2 + X1", v))
    assert g.degrees == (3, 2) and g.N == 6
    mats = [mult_matrix(g, i) for i in range(2)]
    assert check_commutation(mats) == []


def test_deform_meeting_example():
    q_eps, p = deform_meeting(P("X1"))
    v = ("X1", "eps", "zeta")
    assert q_eps.with_variables(v) == P("X1^2 + (eps*X1^2 - 1)^2", v)
    # k(d'+1) = 7 for k = 1, d' = 6
    assert p.with_variables(v) == P("6*(X1^2 + (eps*X1^2 - 1)^2) - zeta*(X1^6 + 6*X1^2 + 7)", v)


def test_cr_meeting_shape():
    q = P("X1*X2 - 1", XY)
    _, p = deform_meeting(q)
    g = cr_meeting(p, XY, 6)
    assert g.degrees == (6, 5) and g.N == 30 and g.D == 10
    assert validate_sgb(g).ok


@pytest.mark.parametrize("bad", [P("0"), P("3"), IntPoly.parse("zeta - 1", ("zeta",))])
def test_deform_rejects(bad):
    with pytest.raises(ValueError):
        deform_bounded(bad)


# --------------------------------------------------------------------------
# containing ball, k = 1


@pytest.mark.parametrize("text, radius_sq", [
    ("X1^2 - 4", 25), ("X1^3 - X1", 4), ("2*X1 - 3", Fraction(25, 4)), ("X1^2 + 1", 0),
])
def test_bounded_examples(text, radius_sq):
    cert = bounded_ball_certificate(P(text), confluence_samples=30)
    assert cert.radius_squared == radius_sq
    assert cert.valid and not cert.downgraded and cert.within_closed_form()


def test_bounded_extracted_polynomials():
    cert = bounded_ball_certificate(P("X1^2 - 4"), confluence_samples=10)
    assert cert.extracted_polys == {"f+[X1]": "3*T^2 - 12", "f-[X1]": "-3*T^2 + 12"}
    assert cert.per_coordinate_bounds == [5]


def test_empty_zero_set_notes():
    cert = bounded_ball_certificate(P("X1^2 + 1"), confluence_samples=10)
    assert any("no real roots" in n for n in cert.degenerate_notes)


def _random_univariate(rng):
    d = rng.randint(1, 5)
    coeffs = [rng.randint(-15, 15) for _ in range(d)] + [rng.choice([-3, -2, -1, 1, 2, 3])]
    return IntPoly((("X1",)), {(i,): c for i, c in enumerate(coeffs) if c})


def _real_roots(p, var="X1"):
    x = sp.Symbol(var)
    return [float(r) for r in sp.real_roots(sp.Poly(str(p).replace("^", "**"), x))]


def test_univariate_extreme_roots_are_extracted():
    # the min and max real roots of Q reappear among the roots of f+ and f-
    rng = random.Random(3)
    checked = 0
    while checked < 40:
        q = _random_univariate(rng)
        roots = _real_roots(q)
        if not roots:
            continue
        cert = bounded_ball_certificate(q, confluence_samples=0)
        found = []
        for key, text in cert.extracted_polys.items():
            f = IntPoly.parse(text, ("T",))
            if f.degree("T") >= 1:
                found += _real_roots(f, "T")
        for r in (min(roots), max(roots)):
            assert any(abs(r - s) < 1e-7 for s in found)
        checked += 1


def test_univariate_certificates_sound_and_below_closed_form():
    rng = random.Random(17)
    for _ in range(200):
        q = _random_univariate(rng)
        cert = bounded_ball_certificate(q, confluence_samples=0)
        assert cert.valid and not cert.downgraded
        assert cert.within_closed_form()
        assert roots_inside([q], cert.radius_squared)


# --------------------------------------------------------------------------
# containing ball, k = 2


@pytest.mark.parametrize("text, radius_sq", [("X1*X2 - 1", 2), ("X1^2 + X2^2 - 1", 8)])
def test_bivariate_examples(text, radius_sq):
    cert = bounded_ball_certificate(P(text, XY), confluence_samples=40)
    assert cert.radius_squared == radius_sq and cert.valid
    assert set(cert.extracted_polys) == {"f+[X1]", "f-[X1]", "f+[X2]", "f-[X2]"}


def _random_conic(rng):
    # positive definite quadratic part, so the zero set is a bounded ellipse or empty
    a, b, c = rng.randint(1, 5), rng.randint(1, 5), rng.randint(-1, 1)
    e, f, g = rng.randint(-6, 6), rng.randint(-6, 6), rng.randint(1, 9)
    return P(f"{a}*X1^2 + {b}*X2^2 + ({c})*X1*X2 + ({e})*X1 + ({f})*X2 - {g}", XY)


QUARTICS = ["X1^4 + X2^4 - 2*X1^2 - 2*X2^2 + 1", "X1^4 + X2^4 - 3*X1^2 - 3*X2^2 + 3",
            "X1^4 - 5*X1^2 + X2^2 + 4"]


@pytest.mark.parametrize("case", range(8))
def test_bivariate_bounded_against_grid(case):
    q = _random_conic(random.Random(case)) if case < 5 else P(QUARTICS[case - 5], XY)
    cert = bounded_ball_certificate(q, confluence_samples=20)
    assert cert.valid and cert.within_closed_form()
    r = float(cert.radius_squared) ** 0.5
    report = oracle_extent_grid([q], resolution=256, box=min(1.25 * r, 8.0))
    assert any(c.bounded for c in report.components)
    assert grid_contains_bounded(report, cert.radius_squared)


# --------------------------------------------------------------------------
# meeting ball


@pytest.mark.parametrize("text, radius_sq, u0", [
    ("X1", Fraction(2722, 25), Fraction(25, 2722)),
    ("X1^2 - 4", 5000, Fraction(1, 5000)),
    ("X1^2 + 1", 16, Fraction(1, 16)),
])
def test_meeting_univariate(text, radius_sq, u0):
    cert = meeting_ball_certificate(P(text), confluence_samples=10)
    assert cert.radius_squared == radius_sq and cert.u0 == u0
    assert cert.valid and cert.within_closed_form()
    assert roots_inside([P(text)], cert.radius_squared)


def test_meeting_univariate_random():
    rng = random.Random(4)
    for _ in range(20):
        q = _random_univariate(rng)
        if q.total_degree() > 2:
            continue
        cert = meeting_ball_certificate(q, confluence_samples=0)
        assert cert.valid and roots_inside([q], cert.radius_squared)


def test_meeting_bivariate_reports_budget():
    cert = meeting_ball_certificate(P("X1*X2 - 1", XY), confluence_samples=0, time_budget=5)
    assert cert.downgraded and not cert.valid
    assert "budget" in cert.checks
    assert any("time budget" in w for w in cert.warnings)
    assert cert.radius_squared == cert.closed_form.radius_squared


# --------------------------------------------------------------------------
# downgrade


def test_failed_audit_downgrades_to_closed_form(monkeypatch):
    monkeypatch.setattr(pipeline, "confluence_probe", lambda g, n, seed=0: 1)
    cert = bounded_ball_certificate(P("X1^2 - 4"), confluence_samples=5)
    assert cert.downgraded and not cert.valid
    assert cert.certified_radius_squared == 25
    assert cert.radius_squared == thm1_radius(1, 2, 3).radius_squared
    j = cert.to_json()
    assert j["radius_sq"] == exact_text(cert.closed_form) and j["certified_radius_sq"] == "25"
    json.dumps(j)


def test_json_shape():
    j = bounded_ball_certificate(P("X1^2 - 4"), confluence_samples=5).to_json()
    assert j["radius_sq"] == "25" and j["valid"] and not j["downgraded"]
    assert j["certificate_le_closed_form"] is True
    assert int(j["closed_form_radius_sq_mantissa"]) << j["closed_form_radius_sq_exponent2"] == \
        thm1_radius(1, 2, 3).radius_squared


def test_exact_text_switches_to_power_form():
    assert exact_text(thm1_radius(1, 2, 2)) == str(2 ** 148)
    assert exact_text(thm4_radius(1, 1, 2, 1)) == "793*2^15288"


# --------------------------------------------------------------------------
# families


def test_sa_contain_two_points():
    polys = [P("X1 - 1"), P("X1 + 1")]
    cert = sa_contain(polys, confluence_samples=5)
    assert cert.radius_squared == 16 and cert.valid
    assert cert.checks["{1}:radius_sq"] == "16" and cert.checks["{1,2}:radius_sq"] == "0"
    assert sa_contain(polys, mode="closed") == thm3_radius(1, 1, 2, 1)
    assert sa_contain(polys, mode="closed").radius_squared == 2 ** 244


def test_sa_meet_closed_and_certificate():
    polys = [P("X1 - 1"), P("X1 + 1")]
    closed = sa_meet(polys, mode="closed")
    assert closed.normalized() == (793, 15288)
    cert = sa_meet(polys, confluence_samples=0)
    assert cert.valid and roots_inside(polys, cert.radius_squared)


def test_sa_subset_cap():
    polys = [P(f"X1 - {i}") for i in range(1, 5)]
    cert = sa_contain(polys, max_subsets=7)
    assert cert.downgraded and "exceed max_subsets" in cert.warnings[0]


def test_sa_variable_union():
    cert = sa_contain([P("X1 - 1"), IntPoly.parse("X2 + 1", ("X2",))], mode="closed")
    assert cert.k == 2


# --------------------------------------------------------------------------
# degenerate input


def test_constant_polynomial():
    cert = bounded_ball_certificate(P("5"))
    assert cert.radius_squared == 0 and cert.degenerate_notes
    assert meeting_ball_certificate(P("5")).radius_squared == 0


@pytest.mark.parametrize("fn", [bounded_ball_certificate, meeting_ball_certificate])
def test_zero_polynomial_rejected(fn):
    with pytest.raises(ValueError):
        fn(P("0"))


def test_reserved_names_and_empty_family():
    with pytest.raises(ValueError):
        bounded_ball_certificate(IntPoly.parse("T - 1", ("T",)))
    with pytest.raises(ValueError):
        sa_contain([])
    with pytest.raises(ValueError):
        sa_meet([P("X1"), P("0")])
