from __future__ import annotations

import itertools
import json
from fractions import Fraction

import pytest
import sympy as sp

from ballradius import bounds
from ballradius.bounds import (
    ParameterError, closed_form, entry_bitsize_estimate, meeting_parameters, thm1_radius, thm2_radius,
    thm3_radius, thm4_radius,
)


def _bit(n):
    return sp.floor(sp.log(abs(n), 2)) + 1 if n else 1


def test_thm1_examples():
    r = thm1_radius(1, 2, 2)
    assert r.intermediates["N"] == 3
    assert r.radius_squared == 2 ** 148
    assert r.radius_log2 == 74
    assert thm1_radius(2, 2, 1).radius_squared == 98 * 2 ** 432
    assert thm1_radius(1, 1, 1).radius_squared == (3 * 2 ** 30) ** 2


def test_thm2_examples():
    r = thm2_radius(1, 1, 1)
    it = r.intermediates
    assert (it["dprime"], it["D"], it["N"], it["rho"], it["rhoprime"], it["tauprime"]) == (6, 6, 6, 142, 16, 1020)
    assert r.radius_squared == 793 * 2 ** 11328
    assert r.radius_log2 == pytest.approx(5668.8, abs=0.05)
    assert thm2_radius(1, 1, 2).intermediates["tauprime"] == 1092
    assert thm2_radius(1, 1, 2).radius_squared == 793 * 2 ** 12120


def test_thm3_examples():
    assert thm3_radius(1, 1, 2, 1).radius_squared == 2 ** 244
    assert thm3_radius(2, 1, 3, 1).radius_squared == 98 * 2 ** 936
    assert thm3_radius(1, 1, 1, 1).intermediates["exponent"] == 108


def test_thm4_examples():
    r = thm4_radius(1, 1, 2, 1)
    assert r.intermediates["tausecond"] == 1380
    assert r.radius_squared == 793 * 2 ** 15288
    r1 = thm4_radius(1, 1, 1, 1)
    assert r1.intermediates["tausecond"] == 1308
    assert r1.intermediates["exponent"] == 14496
    assert thm4_radius(1, 1, 4, 1).intermediates["tausecond"] > r.intermediates["tausecond"]


def test_entry_estimates():
    assert entry_bitsize_estimate([3], 0, 0, 5) == 19
    assert entry_bitsize_estimate([6], 2, 2, 8) == 151
    assert entry_bitsize_estimate([4, 3], 0, 0, 7) == entry_bitsize_estimate([4, 3], 0, 9, 7)


def test_entry_estimate_matches_thm1_display():
    # (k(d-1)+2)(tau + bit(d+1) + bit(N)) - bit(N) for the degree list (d+1, d, ..., d)
    for k, d, tau in itertools.product(range(1, 4), range(1, 5), range(1, 6)):
        n = (d + 1) * d ** (k - 1)
        want = (k * (d - 1) + 2) * (tau + n.bit_length() + (d + 1).bit_length()) - n.bit_length()
        got = entry_bitsize_estimate([d + 1] + [d] * (k - 1), 0, 0, tau + (d + 1).bit_length())
        assert got == want


@pytest.mark.parametrize("fn, args", [
    (thm1_radius, (0, 1, 1)), (thm1_radius, (1, 0, 1)), (thm2_radius, (1, 1, -1)),
    (thm3_radius, (1, 1, 0, 1)), (thm4_radius, (1, True, 1, 1)),
])
def test_parameter_errors(fn, args):
    with pytest.raises(ParameterError):
        fn(*args)


def test_entry_estimate_rejects_bad_degrees():
    with pytest.raises(ParameterError):
        entry_bitsize_estimate([2, 3], 0, 0, 4)
    with pytest.raises(ParameterError):
        entry_bitsize_estimate([3], -1, 0, 4)


def _thm1_sympy(k, d, tau):
    n = (d + 1) * d ** (k - 1)
    e = n * (k * d + 2) * (tau + _bit(n) + _bit(d + 1))
    return sp.Integer(k) * (n + 1) ** 2 * sp.Integer(2) ** (2 * e)


def _thm2_sympy(k, d, tau, s=None):
    dp = max(2 * (d + 1), 6)
    big_d = k * dp - 2 * (k - 1)
    n = dp * (dp - 1) ** (k - 1)
    rho = big_d * (k * _bit(d + 1) + _bit(dp) + 1 + 4 * _bit(2 * big_d + 1) + _bit(n)) - 2 * _bit(2 * big_d + 1)
    rho_p = (2 * k - 2) * _bit(n) + k * _bit(k) + 2 * _bit(2 * big_d * n + 1) + 1
    if s is None:
        t = 2 * n * big_d * tau + n * (rho + rho_p)
    else:
        t = 2 * n * big_d * (2 * tau + k * _bit(d + 1) + _bit(s)) + n * (rho + rho_p)
    return (2 * big_d * n * (2 * n - 1) + 1) * sp.Integer(2) ** ((2 * n - 1) * t + n * n * _bit(n + 1))


def _thm3_sympy(k, d, s, tau):
    n = (2 * d + 1) * (2 * d) ** (k - 1)
    e = n * (2 * k * d + 2) * (2 * tau + _bit(n) + (k + 1) * _bit(d + 1) + _bit(s))
    return sp.Integer(k) * (n + 1) ** 2 * sp.Integer(2) ** (2 * e)


@pytest.mark.parametrize("k, d, tau, s", [(1, 1, 1, 1), (1, 3, 5, 2), (2, 2, 3, 4), (3, 1, 2, 3), (2, 4, 7, 8)])
def test_against_sympy_oracle(k, d, tau, s):
    assert thm1_radius(k, d, tau).radius_squared == _thm1_sympy(k, d, tau)
    assert thm2_radius(k, d, tau).radius_squared == _thm2_sympy(k, d, tau)
    assert thm3_radius(k, d, s, tau).radius_squared == _thm3_sympy(k, d, s, tau)
    assert thm4_radius(k, d, s, tau).radius_squared == _thm2_sympy(k, d, tau, s)


GRID = list(itertools.product(range(1, 5), range(1, 7), range(1, 17, 3), range(1, 9, 3)))


def test_monotonicity():
    # exact comparisons on (mantissa, exponent); some radii have ~10^13 bits
    for k, d, tau, s in GRID:
        for fn in (thm1_radius, thm2_radius):
            base = fn(k, d, tau)
            assert fn(k, d, tau + 1).compare(base) >= 0
            assert fn(k, d + 1, tau).compare(base) >= 0
        for fn in (thm3_radius, thm4_radius):
            base = fn(k, d, s, tau)
            assert fn(k, d, s, tau + 1).compare(base) >= 0
            assert fn(k, d + 1, s, tau).compare(base) >= 0
            assert fn(k, d, s + 1, tau).compare(base) >= 0


def test_thm3_dominates_thm1():
    for k, d, tau, _ in GRID:
        assert thm3_radius(k, d, 1, tau).compare(thm1_radius(k, d, tau)) >= 0


def test_compare_matches_materialized_values():
    a, b = thm1_radius(2, 2, 1), thm3_radius(1, 1, 2, 1)
    assert a.compare(b) == (a.radius_squared > b.radius_squared) - (a.radius_squared < b.radius_squared)
    assert a.compare(a) == 0
    assert a.covers(a.radius_squared) and not a.covers(a.radius_squared + 1)
    assert b.covers(Fraction(2 ** 244 * 3 - 1, 3)) and not b.covers(Fraction(2 ** 244 * 3 + 1, 3))


def _pow2_report(m, e):
    return bounds.BoundReport("T1", 1, 1, 1, None, {}, m, e)


def test_determinism_and_exact_shape():
    for k, d, tau, s in GRID[:40]:
        a, b = thm4_radius(k, d, s, tau), thm4_radius(k, d, s, tau)
        assert a == b
        m, e = a.normalized()
        assert m % 2 == 1 and a.compare(_pow2_report(m, e)) == 0


def test_json_keys_and_values():
    j = thm1_radius(2, 2, 1).to_json()
    assert set(j) == {"theorem", "k", "d", "s", "tau", "N", "D", "dprime", "rho", "rhoprime", "tauprime",
                      "radius_sq_mantissa", "radius_sq_exponent2", "radius_log2"}
    assert int(j["radius_sq_mantissa"]) << j["radius_sq_exponent2"] == 98 * 2 ** 432
    j4 = thm4_radius(1, 1, 2, 1).to_json()
    assert j4["tauprime"] == 1380
    json.dumps(j4)


def test_closed_form_dispatch():
    assert closed_form(3, 1, 1, 1, 2) == thm3_radius(1, 1, 2, 1)
    with pytest.raises(ParameterError):
        closed_form(5, 1, 1, 1)


def test_meeting_parameters_k2():
    p = meeting_parameters(2, 1)
    assert (p["dprime"], p["N"], p["D"]) == (6, 30, 10)
