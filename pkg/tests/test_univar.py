from __future__ import annotations

import random
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, strategies as st

from ballradius.polyring import IntPoly
from ballradius.univar import (
    IsolatingInterval, cauchy_bound, from_dense, isolate_real_roots, positive_root_lower_bound,
    principal_coefficients, real_root_count, root_square_at_most, squarefree_decomposition,
    subresultant_sequence,
)


def poly(text, variables=("T",)):
    return IntPoly.parse(text, variables)


def test_cauchy_examples():
    assert cauchy_bound(poly("T^2 - 2")) == 3
    assert cauchy_bound(poly("T^5")) == 1
    assert cauchy_bound(poly("2*T^2 + 3*T - 5")) == 5


def test_cauchy_errors():
    with pytest.raises(ValueError):
        cauchy_bound(poly("0"))
    with pytest.raises(ValueError):
        cauchy_bound(poly("7"))


def test_subresultant_examples():
    assert subresultant_sequence(poly("T^2 - 1"), poly("2*T"))[0] == poly("-4")
    assert subresultant_sequence(poly("T^2"), poly("2*T"))[0].is_zero()
    s = subresultant_sequence(poly("T^2 + eps", ("T", "eps")), poly("2*T", ("T", "eps")))
    assert s[0] == poly("4*eps", ("eps",)) or s[0] == poly("4*eps", ("T", "eps"))


def test_subresultant_zero_input():
    with pytest.raises(ValueError):
        subresultant_sequence(poly("0"), poly("T"))


def _sylvester_subresultants(f, g, t):
    """S_j as sums of Sylvester minors; rows of f first, highest shift first."""
    a, b = sp.Poly(f, t).all_coeffs(), sp.Poly(g, t).all_coeffs()
    p, q = len(a) - 1, len(b) - 1
    out = []
    for j in range(q):
        ncol = p + q - j
        rows = []
        for i in range(q - j - 1, -1, -1):
            row = [0] * ncol
            for c, v in enumerate(a):
                row[ncol - 1 - (p + i) + c] = v
            rows.append(row)
        for i in range(p - j - 1, -1, -1):
            row = [0] * ncol
            for c, v in enumerate(b):
                row[ncol - 1 - (q + i) + c] = v
            rows.append(row)
        m = len(rows)
        s = 0
        for i in range(j + 1):
            cols = list(range(m - 1)) + [ncol - 1 - i]
            s += sp.Matrix([[r[c] for c in cols] for r in rows]).det() * t ** i
        out.append(sp.expand(s))
    return out


def _random_pair(rng, with_param):
    t, e = sp.symbols("T eps")
    p = rng.randint(1, 5)
    q = rng.randint(1, p)

    def rp(n):
        return sum((rng.randint(-4, 4) if rng.random() < 0.6 else 0)
                   * (e ** rng.randint(0, 2) if with_param and rng.random() < 0.4 else 1) * t ** i
                   for i in range(n))
    f = rp(p) + (1 + (e if with_param else 0)) * t ** p
    g = rp(q) + rng.choice([1, -2, 3]) * t ** q
    if rng.random() < 0.3:
        f, g = sp.expand(f * (t - 1)), sp.expand(g * (t - 1))
    return f, g


@pytest.mark.parametrize("seed", range(3))
def test_subresultants_match_sylvester_oracle(seed):
    rng = random.Random(seed)
    t = sp.Symbol("T")
    vs = ("T", "eps")
    for trial in range(15):
        f, g = _random_pair(rng, trial % 2 == 0)
        mine = subresultant_sequence(poly(str(f).replace("**", "^"), vs), poly(str(g).replace("**", "^"), vs))
        ref = _sylvester_subresultants(f, g, t)
        assert len(mine) == len(ref)
        for m, r in zip(mine, ref):
            assert m == poly(str(r).replace("**", "^"), vs)


def test_principal_coefficients():
    s = subresultant_sequence(poly("T^3 - 2*T + 1"), poly("3*T^2 - 2"))
    psc = principal_coefficients(s)
    t = sp.Symbol("T")
    ref = _sylvester_subresultants(t ** 3 - 2 * t + 1, 3 * t ** 2 - 2, t)
    assert [c.constant_value() for c in psc] == [int(sp.Poly(r, t).coeff_monomial(t ** j)) for j, r in enumerate(ref)]


def test_isolation_examples():
    assert isolate_real_roots(poly("T^2 - 4")) == [
        IsolatingInterval(Fraction(-2), Fraction(-2), 1), IsolatingInterval(Fraction(2), Fraction(2), 1)]
    a, b = isolate_real_roots(poly("T^2 - 2"))
    assert a.lo < -Fraction(141, 100) and -Fraction(142, 100) < a.hi <= 0
    assert 0 <= b.lo < Fraction(141, 100) and Fraction(142, 100) < b.hi
    assert a.hi <= b.lo
    assert isolate_real_roots(poly("T^2 - 2*T + 1")) == [IsolatingInterval(Fraction(1), Fraction(1), 2)]
    assert isolate_real_roots(poly("T^2 + 1")) == []
    with pytest.raises(ValueError):
        isolate_real_roots(poly("0"))


def _random_dense(rng, max_deg=12, bits=16):
    n = rng.randint(1, max_deg)
    f = [rng.randint(-2 ** bits + 1, 2 ** bits - 1) if rng.random() < 0.7 else 0 for _ in range(n)]
    f.append(rng.choice([1, -1]) * rng.randint(1, 2 ** bits - 1))
    if rng.random() < 0.3:
        # force a repeated rational root
        r = rng.randint(-3, 3)
        for _ in range(2):
            f = [(f[i - 1] if i else 0) - r * (f[i] if i < len(f) else 0) for i in range(len(f) + 1)]
    return f


def test_isolation_against_sympy():
    rng = random.Random(11)
    x = sp.Symbol("x")
    for _ in range(150):
        f = _random_dense(rng, 8, 6)
        ivs = isolate_real_roots(f)
        ref = sp.Poly(list(reversed(f)), x)
        real = sorted(set(sp.real_roots(ref)), key=float)
        assert len(ivs) == len(real)
        for iv, r in zip(ivs, real):
            assert iv.multiplicity == sp.real_roots(ref).count(r)
            if iv.exact:
                assert r == sp.Rational(iv.lo.numerator, iv.lo.denominator)
            else:
                assert iv.lo < r < iv.hi


def test_roots_within_cauchy_bound():
    rng = random.Random(5)
    for _ in range(500):
        f = _random_dense(rng)
        c = cauchy_bound(f)
        for iv in isolate_real_roots(f):
            assert root_square_at_most(iv, c * c)


def test_intervals_sorted_disjoint():
    rng = random.Random(8)
    for _ in range(100):
        ivs = isolate_real_roots(_random_dense(rng, 10, 4))
        for a, b in zip(ivs, ivs[1:]):
            assert a.hi <= b.lo and (a.lo, a.hi) != (b.lo, b.hi)


def test_root_count_matches_isolation():
    rng = random.Random(2)
    for _ in range(200):
        f = _random_dense(rng, 9, 5)
        assert real_root_count(f) == len(isolate_real_roots(f))


def test_squarefree_decomposition():
    # (T-1)^3 (T+2) (T^2+1)^2
    t = sp.Symbol("T")
    f = sp.Poly(sp.expand((t - 1) ** 3 * (t + 2) * (t ** 2 + 1) ** 2), t)
    parts = squarefree_decomposition([int(c) for c in reversed(f.all_coeffs())])
    assert parts == [([2, 1], 1), ([1, 0, 1], 2), ([-1, 1], 3)]


def test_refinement_with_root_at_endpoint():
    # x (x - 2)^2 (6x^6 - ...): the factor x*(sextic) vanishes at the left endpoint 0
    f = [0, 40, 212, -270, 231, 25, -353, 283, -78, 6]
    ivs = isolate_real_roots(f)
    pos = [iv for iv in ivs if iv.hi > 0 and not iv.exact]
    assert len(pos) == 2
    assert pos[0].lo < Fraction(171, 100) < pos[0].hi
    assert pos[1].lo < Fraction(8015, 1000) < pos[1].hi


def test_root_square_at_most_exact_cases():
    (iv,) = [i for i in isolate_real_roots(poly("T^2 - 2")) if i.hi > 0]
    assert root_square_at_most(iv, Fraction(2))
    assert not root_square_at_most(iv, Fraction(199, 100))
    (r,) = isolate_real_roots(poly("3*T - 2"))
    assert root_square_at_most(r, Fraction(4, 9)) and not root_square_at_most(r, Fraction(4, 9) - Fraction(1, 10 ** 9))


def test_positive_root_lower_bound_examples():
    e = ("eps",)
    assert positive_root_lower_bound([poly("eps - 1", e)]) == Fraction(1, 4)
    assert positive_root_lower_bound([poly("eps^2 - 4", e)]) == Fraction(2, 5)
    assert positive_root_lower_bound([poly("eps", e)]) == 1
    assert positive_root_lower_bound([poly("0", e), poly("eps - 1", e)]) == Fraction(1, 4)
    with pytest.raises(ValueError):
        positive_root_lower_bound([poly("0", e)])


@given(st.lists(st.lists(st.integers(-20, 20), min_size=2, max_size=7), min_size=1, max_size=4))
def test_positive_root_lower_bound_is_below_roots(batch):
    polys = [from_dense(f, "eps") for f in batch]
    if all(p.is_zero() for p in polys):
        return
    u0 = positive_root_lower_bound(polys)
    assert u0 > 0
    for f in batch:
        if not any(f):
            continue
        for iv in isolate_real_roots(f):
            if iv.hi > 0:
                # every positive root r satisfies u0 < r
                assert iv.lo >= u0 if iv.exact else iv.hi > u0 and not (iv.lo <= u0 and _root_le(f, iv, u0))


def _root_le(f, iv, u):
    """Whether the isolated root is <= u (refine until decided)."""
    cur = iv
    while cur.lo <= u <= cur.hi and not cur.exact:
        cur = cur.refined()
    return cur.hi <= u
