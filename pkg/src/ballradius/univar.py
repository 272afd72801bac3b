"""Univariate exact tools: Cauchy bounds, subresultants, real root isolation.

Dense integer polynomials are plain lists of ints, lowest degree first.
Subresultants work on polynomials in ``T`` whose coefficients are
:class:`IntPoly` values in other parameters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

from .polyring import IntPoly

Dense = List[int]


# --------------------------------------------------------------------------
# dense integer helpers


def to_dense(p: IntPoly, var: Optional[str] = None) -> Dense:
    """Coefficient list of a univariate polynomial (other variables must be unused)."""
    used = p.used_variables()
    if var is None:
        if len(used) > 1:
            raise ValueError(f"not univariate: uses {used}")
        var = used[0] if used else None
    elif set(used) - {var}:
        raise ValueError(f"not univariate in {var}: uses {used}")
    if p.is_zero():
        return []
    if var is None:
        return [p.constant_value()]
    i = p.variables.index(var)
    out = [0] * (p.degree(var) + 1)
    for e, c in p.terms.items():
        out[e[i]] += c
    return out


def from_dense(coeffs: Sequence[int], var: str = "T") -> IntPoly:
    return IntPoly((var,), {(i,): c for i, c in enumerate(coeffs) if c})


def _trim(f):
    f = list(f)
    while f and not f[-1]:
        f.pop()
    return f


def _deg(f) -> int:
    return len(f) - 1


def _eval(f: Sequence, x):
    acc = 0
    for c in reversed(f):
        acc = acc * x + c
    return acc


def _derivative(f: Sequence) -> list:
    return [i * c for i, c in enumerate(f)][1:]


def _primitive(f: Sequence[Fraction]) -> Dense:
    f = _trim(f)
    if not f:
        return []
    den = math.lcm(*(Fraction(c).denominator for c in f))
    ints = [int(Fraction(c) * den) for c in f]
    g = math.gcd(*ints)
    ints = [c // g for c in ints]
    return [-c for c in ints] if ints[-1] < 0 else ints


def _divmod_q(a: Sequence, b: Sequence):
    a = [Fraction(c) for c in a]
    b = _trim(b)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    while len(_trim(a)) >= len(b):
        a = _trim(a)
        shift = len(a) - len(b)
        c = a[-1] / b[-1]
        q[shift] = c
        for i, bc in enumerate(b):
            a[i + shift] -= c * bc
        a.pop()
    return q, _trim(a)


def _monic(f: Sequence) -> list:
    f = _trim(f)
    return [Fraction(c) / f[-1] for c in f] if f else []


def _quo_q(a: Sequence, b: Sequence) -> list:
    q, r = _divmod_q(a, b)
    if r:
        raise ArithmeticError("inexact polynomial division")
    return _trim(q)


def _gcd_q(a: Sequence, b: Sequence) -> list:
    a, b = _trim(a), _trim(b)
    while b:
        _, r = _divmod_q(a, b)
        a, b = b, r
    return _monic(a)


def squarefree_decomposition(f: Dense) -> List[Tuple[Dense, int]]:
    """Yun's algorithm: pairs ``(g_i, i)`` with ``f = c * prod g_i^i``, ``g_i`` squarefree, primitive."""
    f = _monic(f)
    if _deg(f) < 1:
        return []
    out = []
    df = _derivative(f)
    a = _gcd_q(f, df)
    b = _quo_q(f, a)
    c = _quo_q(df, a)
    d = _trim([x - y for x, y in _zip_pad(c, _derivative(b))])
    i = 1
    while _deg(b) > 0:
        a = _gcd_q(b, d)
        if _deg(a) > 0:
            out.append((_primitive(a), i))
        b = _quo_q(b, a)
        c = _quo_q(d, a)
        d = _trim([x - y for x, y in _zip_pad(c, _derivative(b))])
        i += 1
    return out


def _zip_pad(a, b):
    n = max(len(a), len(b))
    return zip(list(a) + [0] * (n - len(a)), list(b) + [0] * (n - len(b)))


def sign_variations(seq: Iterable) -> int:
    signs = [1 if c > 0 else -1 for c in seq if c]
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def _taylor_shift(f: Sequence, a) -> list:
    """Coefficients of ``f(x + a)``."""
    f = list(f)
    n = len(f)
    for i in range(n):
        for j in range(n - 2, i - 1, -1):
            f[j] += a * f[j + 1]
    return f


def _interval_variations(f: Dense, a: Fraction, b: Fraction) -> int:
    """Descartes bound for roots of ``f`` in the open interval ``(a, b)``."""
    n = _deg(f)
    # h(y) = f(a + (b - a) y), then count variations of (1+x)^n h(1/(1+x))
    h = _taylor_shift(f, a)
    w = b - a
    h = [c * w ** i for i, c in enumerate(h)]
    h = list(reversed(h))
    h = _taylor_shift(h, 1)
    return sign_variations(h[: n + 1])


# --------------------------------------------------------------------------
# Cauchy bound


def cauchy_bound(f) -> Fraction:
    """``sum |a_i| / |a_lead|``; every complex root has modulus at most this."""
    coeffs = _trim(to_dense(f) if isinstance(f, IntPoly) else f)
    if len(coeffs) < 2:
        raise ValueError("Cauchy bound needs a polynomial of positive degree")
    return Fraction(sum(abs(c) for c in coeffs), abs(coeffs[-1]))


# --------------------------------------------------------------------------
# real root isolation


@dataclass(frozen=True)
class IsolatingInterval:
    lo: Fraction
    hi: Fraction
    multiplicity: int = 1
    factor: Tuple[int, ...] = field(default=(), compare=False, repr=False)

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    def refined(self) -> "IsolatingInterval":
        """Halve an open interval (the squarefree factor has one simple root inside)."""
        if self.exact:
            return self
        f = list(self.factor)
        m = (self.lo + self.hi) / 2
        fm = _eval(f, m)
        if fm == 0:
            return IsolatingInterval(m, m, self.multiplicity, self.factor)
        # an endpoint may itself be a root of the factor, so use whichever is nonzero
        flo, fhi = _eval(f, self.lo), _eval(f, self.hi)
        if flo:
            left = (flo > 0) != (fm > 0)
        elif fhi:
            left = (fhi > 0) == (fm > 0)
        else:
            left = _interval_variations(f, self.lo, m) % 2 == 1
        if left:
            return IsolatingInterval(self.lo, m, self.multiplicity, self.factor)
        return IsolatingInterval(m, self.hi, self.multiplicity, self.factor)

    def to_json(self) -> dict:
        return {"lo": str(self.lo), "hi": str(self.hi), "multiplicity": self.multiplicity}


def _pow2_above(x: Fraction) -> Fraction:
    e = 0
    while Fraction(2) ** e <= x:
        e += 1
    return Fraction(2) ** e


def _isolate_squarefree(f: Dense, mult: int) -> List[IsolatingInterval]:
    bound = _pow2_above(cauchy_bound(f))
    fac = tuple(f)
    out = []
    stack = [(-bound, bound)]
    while stack:
        a, b = stack.pop()
        v = _interval_variations(f, a, b)
        if v == 0:
            continue
        if v == 1:
            out.append(IsolatingInterval(a, b, mult, fac))
            continue
        m = (a + b) / 2
        if _eval(f, m) == 0:
            out.append(IsolatingInterval(m, m, mult, fac))
        stack.extend([(a, m), (m, b)])
    return [_snap_rational(iv) for iv in out]


def _snap_rational(iv: IsolatingInterval) -> IsolatingInterval:
    """Collapse to an exact point when the root is rational."""
    if iv.exact:
        return iv
    f = list(iv.factor)
    lead = abs(f[-1])
    # two rationals with denominators <= lead differ by >= 1/lead^2
    target = Fraction(1, 4 * lead * lead)
    cur = iv
    while not cur.exact and cur.hi - cur.lo > target:
        cur = cur.refined()
    if cur.exact:
        return cur
    cand = ((cur.lo + cur.hi) / 2).limit_denominator(lead)
    if cur.lo < cand < cur.hi and _eval(f, cand) == 0:
        return IsolatingInterval(cand, cand, iv.multiplicity, iv.factor)
    return iv


def _overlap(a: IsolatingInterval, b: IsolatingInterval) -> bool:
    if a.exact and b.exact:
        return a.lo == b.lo
    if a.exact:
        return b.lo < a.lo < b.hi
    if b.exact:
        return a.lo < b.lo < a.hi
    return a.lo < b.hi and b.lo < a.hi


def isolate_real_roots(f) -> List[IsolatingInterval]:
    """Sorted, pairwise disjoint isolating intervals, one per distinct real root."""
    coeffs = _trim(to_dense(f) if isinstance(f, IntPoly) else f)
    if not coeffs:
        raise ValueError("cannot isolate roots of the zero polynomial")
    ivs: List[IsolatingInterval] = []
    for g, m in squarefree_decomposition(coeffs):
        ivs.extend(_isolate_squarefree(g, m))
    changed = True
    while changed:
        changed = False
        for i in range(len(ivs)):
            for j in range(i + 1, len(ivs)):
                if _overlap(ivs[i], ivs[j]):
                    wi, wj = ivs[i].hi - ivs[i].lo, ivs[j].hi - ivs[j].lo
                    if wi >= wj:
                        ivs[i] = ivs[i].refined()
                    else:
                        ivs[j] = ivs[j].refined()
                    changed = True
    return sorted(ivs, key=lambda iv: (iv.lo, iv.hi))


def _is_root_at_sqrt(f: Dense, b: Fraction, sign: int) -> bool:
    """Whether ``f(sign * sqrt(b)) == 0`` exactly."""
    even = [c for i, c in enumerate(f) if i % 2 == 0]
    odd = [c for i, c in enumerate(f) if i % 2 == 1]
    e, o = _eval(even, b), _eval(odd, b)
    rn, rd = math.isqrt(b.numerator), math.isqrt(b.denominator)
    if rn * rn == b.numerator and rd * rd == b.denominator:
        return e + sign * Fraction(rn, rd) * o == 0
    return e == 0 and o == 0


def root_square_at_most(iv: IsolatingInterval, bound_sq: Fraction) -> bool:
    """Decide ``r^2 <= bound_sq`` exactly for the root ``r`` isolated by ``iv``."""
    bound_sq = Fraction(bound_sq)
    cur = iv
    for step in range(10_000):
        if cur.exact:
            return cur.lo * cur.lo <= bound_sq
        lo2, hi2 = cur.lo * cur.lo, cur.hi * cur.hi
        if max(lo2, hi2) <= bound_sq:
            return True
        if (cur.lo >= 0 or cur.hi <= 0) and min(lo2, hi2) >= bound_sq:
            return False
        if step == 8:
            f = list(cur.factor)
            for s in (1, -1):
                if _is_root_at_sqrt(f, bound_sq, s):
                    # +-sqrt(bound_sq) inside the interval means it is the root
                    if (s > 0 and cur.hi > 0 and lo2 * (1 if cur.lo > 0 else -1) < bound_sq < hi2) or \
                       (s < 0 and cur.lo < 0 and hi2 * (1 if cur.hi < 0 else -1) < bound_sq < lo2):
                        return True
        cur = cur.refined()
    raise RuntimeError("root comparison did not terminate")


def real_roots_abs_max_sq_at_most(f, bound_sq: Fraction) -> bool:
    return all(root_square_at_most(iv, bound_sq) for iv in isolate_real_roots(f))


# --------------------------------------------------------------------------
# subresultants


def _coeff_list(p: IntPoly, t: str, params: Tuple[str, ...]) -> List[IntPoly]:
    split = p.coefficients_in((t,))
    n = max((e[0] for e in split), default=-1)
    zero = IntPoly.const(0, params)
    out = [zero] * (n + 1)
    for (i,), c in split.items():
        out[i] = c.with_variables(params)
    return out


def _prem(a: List[IntPoly], b: List[IntPoly]) -> List[IntPoly]:
    m, n = len(a) - 1, len(b) - 1
    lb = b[n]
    r = list(a)
    for k in range(m - n, -1, -1):
        c = r[n + k]
        r = [x * lb for x in r]
        if c:
            for i in range(n + 1):
                if b[i]:
                    r[i + k] = r[i + k] - c * b[i]
    return _trim_p(r[: n] if n > 0 else [])


def _trim_p(f: List[IntPoly]) -> List[IntPoly]:
    f = list(f)
    while f and f[-1].is_zero():
        f.pop()
    return f


def subresultant_sequence(f: IntPoly, g: IntPoly, t: str = "T") -> List[IntPoly]:
    """Subresultant polynomials ``S_0, ..., S_{q-1}`` of ``f, g`` in ``t``, ``q = deg_t g``.

    Sign convention: ``S_j`` is the determinant polynomial of the Sylvester
    submatrix whose rows are ``t^(q-j-1) f, ..., f`` followed by
    ``t^(p-j-1) g, ..., g``; in particular ``S_0`` is the Sylvester resultant.
    """
    if f.is_zero():
        raise ValueError("zero f")
    params = tuple(v for v in f.variables + g.variables if v != t)
    params = tuple(dict.fromkeys(params))
    a = _coeff_list(f, t, params)
    b = _coeff_list(g, t, params)
    p, q = len(a) - 1, len(b) - 1
    if q > p:
        raise ValueError("need deg f >= deg g")
    zero_t = IntPoly.const(0, (t,) + params)
    if q <= 0:
        return []
    out: List[Optional[List[IntPoly]]] = [None] * q
    if p == q:
        # rows lc(g)*f - lc(f)*g = r reduce to the chain of (g, r)
        r = _trim_p([x * b[q] - y * a[p] for x, y in zip(a, b)])
        if not r:
            return [zero_t] * q
        dr = len(r) - 1
        sub = subresultant_sequence(g, _from_list(r, t, params), t) if dr >= 1 else []
        res = []
        for j in range(q):
            if j < dr:
                v = sub[j].exact_div(b[q] ** (dr - j)) if sub[j] else zero_t
                res.append(v if (q - j) % 2 == 0 else -v)
            elif j == dr:
                v = _from_list(r, t, params) * (r[-1] ** (q - dr - 1))
                res.append(v if (q - dr) % 2 == 0 else -v)
            elif j == q - 1:
                # the 2x2 minor lc(f)*g - lc(g)*f survives even when r is defective
                res.append(-_from_list(r, t, params))
            else:
                res.append(zero_t)
        return res
    s = b[q] ** (p - q)
    A = b
    B = _prem(a, _neg(b))
    while True:
        d = len(A) - 1
        if not B:
            break
        e = len(B) - 1
        out[d - 1] = B
        delta = d - e
        if delta > 1:
            x = B[-1]
            c = x
            for _ in range(delta - 2):
                c = (c * x).exact_div(s)
            C = [(c * y).exact_div(s) for y in B]
            out[e] = C
        else:
            C = B
        if e == 0:
            break
        den = (s ** delta) * A[-1]
        B = [y.exact_div(den) for y in _prem(A, _neg(B))]
        A = C
        s = A[-1]
    return [_from_list(o, t, params) if o else zero_t for o in out]


def _neg(f: List[IntPoly]) -> List[IntPoly]:
    return [-x for x in f]


def _from_list(f: List[IntPoly], t: str, params) -> IntPoly:
    return IntPoly.from_coefficients((t,), {(i,): c for i, c in enumerate(f) if c}, params)


def principal_coefficients(subres: Sequence[IntPoly], t: str = "T") -> List[IntPoly]:
    """``[coefficient of t^j in S_j]`` as polynomials in the parameters."""
    out = []
    for j, s in enumerate(subres):
        params = tuple(v for v in s.variables if v != t)
        split = s.coefficients_in((t,))
        out.append(split.get((j,), IntPoly.const(0, params)))
    return out


def _eps(m: int) -> int:
    return -1 if (m * (m - 1) // 2) % 2 else 1


def real_root_count(f) -> int:
    """Number of distinct real roots via the subresultants of ``f`` and ``f'``.

    Our subresultants list the rows of ``g`` from the highest shift down; the
    signed convention lists them upward, a row reversal worth ``eps(p - j)``.
    The count is then the permanences-minus-variations of the signed principal
    coefficients.
    """
    dense = _trim(to_dense(f) if isinstance(f, IntPoly) else f)
    if not dense:
        raise ValueError("zero polynomial")
    p = len(dense) - 1
    if p == 0:
        return 0
    if p == 1:
        return 1
    fp, dfp = from_dense(dense), from_dense(_derivative(dense))
    psc = principal_coefficients(subresultant_sequence(fp, dfp), "T")
    seq = [dense[-1], p * dense[-1]] + [_eps(p - j) * c.constant_value() for j, c in reversed(list(enumerate(psc)))]
    # seq[i] corresponds to index p - i
    nz = [(p - i, v) for i, v in enumerate(seq) if v]
    total = 0
    for (i, a), (j, b) in zip(nz, nz[1:]):
        if (i - j) % 2 == 1:
            total += _eps(i - j) * (1 if a * b > 0 else -1)
    return total


# --------------------------------------------------------------------------
# positive roots


def positive_root_lower_bound(polys: Iterable[IntPoly]) -> Fraction:
    """A positive rational strictly below every positive root of every member.

    Each member is stripped of its power of the variable, reversed, and bounded
    with :func:`cauchy_bound`; the reciprocal of that bound is a lower bound on
    positive roots.  Members without sign variations have no positive root and
    are skipped.  Returns 1 when nothing constrains.
    """
    best: Optional[Fraction] = None
    seen_nonzero = False
    for p in polys:
        f = _trim(to_dense(p))
        if not f:
            continue
        seen_nonzero = True
        while f and f[0] == 0:
            f.pop(0)
        if len(f) < 2 or sign_variations(f) == 0:
            continue
        rev = list(reversed(f))
        r = 1 / cauchy_bound(rev)
        best = r if best is None else min(best, r)
    if not seen_nonzero:
        raise ValueError("all members are zero")
    return Fraction(1) if best is None else best / 2
