"""Constructive per-instance radii.

Containing ball: deform ``Q`` by ``+-zeta * sum Xi^(d+1)``, take the critical
system in each coordinate direction, read the extreme coordinate values off
the characteristic polynomial of the multiplication matrix, and bound them with
a Cauchy bound.

Meeting ball: intersect with the sphere ``eps*|X|^2 = 1``, deform again, and
pick ``u0`` below every positive root of the subresultant coefficients that
control the real-root structure of the eliminating polynomials ``g(j, eps, T)``.
The radius is ``u0^(-1/2)``.
"""

from __future__ import annotations

import itertools
import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import bounds
from .bounds import BoundReport
from .exactlinalg import BudgetExceeded, charpoly
from .polyring import IntPoly, bit, rescale_roots
from .sgb import (
    SpecialGroebnerBasis, check_commutation, confluence_probe, make_sgb, matrix_audit,
    mult_matrix, mult_matrix_linear_form, validate_sgb,
)
from .univar import (
    cauchy_bound, isolate_real_roots, positive_root_lower_bound, principal_coefficients,
    subresultant_sequence, to_dense,
)

log = logging.getLogger(__name__)

ZETA = "zeta"
EPS = "eps"
T = "T"
RESERVED = (ZETA, EPS, T)


def exact_text(value) -> str:
    """Decimal text for moderate values, ``m*2^e`` for huge closed-form integers."""
    if isinstance(value, BoundReport):
        if value.exponent2 < 12_000:
            return str(value.radius_squared)
        m, e = value.normalized()
        return f"{m}*2^{e}"
    return str(value)


@dataclass
class BallCertificate:
    """A per-instance radius with its audit trail.

    ``certified_radius_squared`` is what the construction produced.  When any
    audit fails the certificate is downgraded and ``radius_squared`` becomes the
    closed-form value, which is always sound.
    """

    mode: str  # "contain" | "meet"
    certified_radius_squared: Fraction
    closed_form: BoundReport
    per_coordinate_bounds: List[Fraction] = field(default_factory=list)
    extracted_polys: Dict[str, str] = field(default_factory=dict)
    u0: Optional[Fraction] = None
    checks: Dict[str, object] = field(default_factory=dict)
    degenerate_notes: List[str] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)
    valid: bool = True
    downgraded: bool = False

    @property
    def radius_squared(self) -> Fraction:
        if self.downgraded:
            return Fraction(self.closed_form.radius_squared)
        return self.certified_radius_squared

    @property
    def closed_form_radius_squared(self) -> int:
        return self.closed_form.radius_squared

    def within_closed_form(self) -> bool:
        return self.closed_form.covers(self.certified_radius_squared)

    def to_json(self) -> dict:
        m, e = self.closed_form.normalized()
        return {
            "mode": self.mode,
            "radius_sq": exact_text(self.closed_form) if self.downgraded else str(self.certified_radius_squared),
            "certified_radius_sq": str(self.certified_radius_squared),
            "valid": self.valid,
            "downgraded": self.downgraded,
            "per_coordinate_bounds": [str(c) for c in self.per_coordinate_bounds],
            "u0": None if self.u0 is None else str(self.u0),
            "extracted_polys": self.extracted_polys,
            "closed_form": self.closed_form.to_json(),
            "closed_form_radius_sq_mantissa": str(m),
            "closed_form_radius_sq_exponent2": e,
            "certificate_le_closed_form": self.within_closed_form(),
            "checks": self.checks,
            "degenerate_notes": self.degenerate_notes,
            "warnings": self.warnings,
        }


# --------------------------------------------------------------------------
# parameters


def measure(polys: Sequence[IntPoly]) -> Tuple[int, int, int, int]:
    """``(k, d, tau, s)``: variable count, max degree, max coefficient bitsize, family size."""
    if not polys:
        raise ValueError("empty family")
    variables = polys[0].variables
    return (len(variables), max(p.total_degree() for p in polys),
            max(p.bitsize() for p in polys), len(polys))


def _xs(q: IntPoly) -> Tuple[str, ...]:
    clash = set(q.variables) & set(RESERVED)
    if clash:
        raise ValueError(f"variable names {sorted(clash)} are reserved")
    if not q.variables:
        raise ValueError("polynomial needs at least one variable")
    return q.variables


def _power_sum(xs: Sequence[str], n: int) -> IntPoly:
    out = IntPoly.const(0, xs)
    for x in xs:
        out = out + IntPoly.var(x, xs) ** n
    return out


# --------------------------------------------------------------------------
# containing ball


def deform_bounded(q: IntPoly, zeta: str = ZETA) -> Tuple[IntPoly, IntPoly]:
    """``(d+1)Q + zeta*sum Xi^(d+1)`` and ``(d+1)Q - zeta*sum Xi^(d+1)``."""
    if q.is_zero():
        raise ValueError("zero polynomial")
    xs = _xs(q)
    d = q.total_degree()
    if d < 1:
        raise ValueError("constant polynomial")
    bump = IntPoly.var(zeta, xs) * _power_sum(xs, d + 1)
    base = q * (d + 1)
    return base + bump, base - bump


def cr_bounded(p: IntPoly, xs: Sequence[str], d: int, tau: Optional[int] = None,
               zeta: str = ZETA) -> SpecialGroebnerBasis:
    """Critical points of ``Zer(p)`` in the direction of ``xs[0]``.

    ``p`` is a denominator-cleared deformation ``(d+1) * Q_zeta``; ``xs`` may be
    any ordering of the variables, the first one being the critical direction.
    """
    xs = tuple(xs)
    euler = p * (d + 1)
    for x in xs[1:]:
        euler = euler - IntPoly.var(x, p.variables) * p.partial_derivative(x)
    gens = [euler.exact_div(d + 1)] + [p.partial_derivative(x).exact_div(d + 1) for x in xs[1:]]
    degrees = [d + 1] + [d] * (len(xs) - 1)
    tau_g = None if tau is None else tau + bit(d + 1)
    return make_sgb(gens, xs, degrees, zeta, (), lam=0, tau_g=tau_g)


def _audit_sgb(name: str, g: SpecialGroebnerBasis, mats, checks: Dict, confluence_samples: int,
               seed: int) -> bool:
    v = validate_sgb(g)
    ok = v.ok
    entry = {"validation": v.status, "messages": v.messages}
    if ok:
        audits = [matrix_audit(g, m) for m in mats]
        entry["matrices"] = audits
        entry["commutation_failures"] = [list(p) for p in check_commutation(mats)]
        entry["confluence_failures"] = confluence_probe(g, confluence_samples, seed) if confluence_samples else 0
        ok = (all(a["ok"] for a in audits) and not entry["commutation_failures"]
              and entry["confluence_failures"] == 0)
    entry["ok"] = ok
    checks[name] = entry
    return ok


def _constant_certificate(q: IntPoly, mode: str, closed: BoundReport) -> BallCertificate:
    if q.is_zero():
        raise ValueError("zero polynomial")
    return BallCertificate(mode, Fraction(0), closed, degenerate_notes=[
        "constant nonzero polynomial: the zero set is empty"])


@dataclass
class _ContainResult:
    radius_squared: Fraction
    per_coordinate: List[Fraction]
    extracted: Dict[str, str]
    checks: Dict[str, object]
    notes: List[str]
    valid: bool


def _contain_core(q: IntPoly, confluence_samples: int = 200, seed: int = 0,
                  label: str = "") -> _ContainResult:
    xs = _xs(q)
    k = len(xs)
    d = q.total_degree()
    tau = q.bitsize()
    checks: Dict[str, object] = {}
    notes: List[str] = []
    extracted: Dict[str, str] = {}
    per_coord: List[Fraction] = []
    valid = True
    plus, minus = deform_bounded(q)
    n_dim = (d + 1) * d ** (k - 1)
    chi_bits_bound = n_dim * (k * d + 2) * (tau + bit(d + 1) + bit(n_dim))
    chi_zdeg_bound = (k * (d - 1) + 2) * n_dim
    for i, x in enumerate(xs):
        order = (x,) + xs[:i] + xs[i + 1:]
        bounds_i = []
        for sign, p in (("+", plus), ("-", minus)):
            name = f"{label}Cr{sign}[{x}]"
            g = cr_bounded(p, order, d, tau)
            if not validate_sgb(g).ok:
                _audit_sgb(name, g, [], checks, 0, seed)
                valid = False
                continue
            mats = [mult_matrix(g, j) for j in range(k)]
            valid &= _audit_sgb(name, g, mats, checks, confluence_samples, seed)
            chi = charpoly(mats[0], T)
            cb, cz = chi.bitsize(), chi.degree(ZETA)
            chi_ok = cb <= chi_bits_bound and cz <= chi_zdeg_bound
            checks[name]["charpoly"] = {"bitsize": cb, "bitsize_bound": chi_bits_bound,
                                        "zeta_degree": max(cz, 0), "zeta_degree_bound": chi_zdeg_bound,
                                        "ok": chi_ok}
            valid &= chi_ok
            f = rescale_roots(chi, ZETA, T).specialize(ZETA, 0)
            extracted[f"{label}f{sign}[{x}]"] = str(f)
            if f.degree(T) < 1:
                notes.append(f"{label}f{sign}[{x}] is constant; it constrains nothing")
                continue
            if not isolate_real_roots(to_dense(f, T)):
                notes.append(f"{label}f{sign}[{x}] has no real roots; it constrains nothing")
                continue
            bounds_i.append(cauchy_bound(to_dense(f, T)))
        if not bounds_i:
            notes.append(f"{label}no bounded component constrains {x}: bound 0")
        per_coord.append(max(bounds_i, default=Fraction(0)))
    radius_sq = sum((c * c for c in per_coord), Fraction(0))
    return _ContainResult(radius_sq, per_coord, extracted, checks, notes, valid)


def bounded_ball_certificate(q: IntPoly, confluence_samples: int = 200, seed: int = 0) -> BallCertificate:
    """Ball centered at the origin containing every bounded component of ``Zer(q)``."""
    if q.is_zero():
        raise ValueError("zero polynomial")
    xs = _xs(q)
    if q.is_constant():
        return _constant_certificate(q, "contain", bounds.thm1_radius(len(xs), 1, max(q.bitsize(), 1)))
    k, d, tau, _ = measure([q])
    closed = bounds.thm1_radius(k, d, tau)
    res = _contain_core(q, confluence_samples, seed)
    return _finish("contain", res.radius_squared, closed, res.per_coordinate, res.extracted,
                   res.checks, res.notes, res.valid)


def _finish(mode, radius_sq, closed, per_coord, extracted, checks, notes, valid, u0=None,
            warnings=()) -> BallCertificate:
    cert = BallCertificate(mode, Fraction(radius_sq), closed, list(per_coord), dict(extracted), u0,
                           dict(checks), list(notes), list(warnings))
    le = cert.within_closed_form()
    cert.checks["certificate_le_closed_form"] = le
    if not (valid and le):
        cert.valid = False
        cert.downgraded = True
        cert.warnings.append("audit check failed: radius downgraded to the closed form")
    return cert


# --------------------------------------------------------------------------
# meeting ball


def _deformed_meeting(base: IntPoly, xs: Sequence[str], d: int) -> Tuple[IntPoly, IntPoly, int]:
    k = len(xs)
    dp = max(2 * (d + 1), 6)
    sq = _power_sum(xs, 2)
    sphere = IntPoly.var(EPS, xs) * sq - 1
    q_eps = base + sphere * sphere
    bump = _power_sum(xs, dp) + sq * dp + k * (dp + 1)
    return q_eps, q_eps * dp - IntPoly.var(ZETA, xs) * bump, dp


def deform_meeting(q: IntPoly) -> Tuple[IntPoly, IntPoly]:
    """``Q_eps = Q^2 + (eps*|X|^2 - 1)^2`` and ``d' * Q_eps,zeta``."""
    if q.is_zero():
        raise ValueError("zero polynomial")
    xs = _xs(q)
    q_eps, p, _ = _deformed_meeting(q * q, xs, q.total_degree())
    return q_eps, p


def cr_meeting(p: IntPoly, xs: Sequence[str], dp: int, tau_g: Optional[int] = None) -> SpecialGroebnerBasis:
    """Critical system of ``p = d' * Q_eps,zeta`` in the ``xs[0]`` direction."""
    xs = tuple(xs)
    euler = p * dp
    for x in xs[1:]:
        euler = euler - IntPoly.var(x, p.variables) * p.partial_derivative(x)
    gens = [euler.exact_div(dp)] + [p.partial_derivative(x).exact_div(dp) for x in xs[1:]]
    degrees = [dp] + [dp - 1] * (len(xs) - 1)
    return make_sgb(gens, xs, degrees, ZETA, (ZETA, EPS), lam=2, tau_g=tau_g)


def _derivative_t(g: IntPoly, times: int) -> IntPoly:
    for _ in range(times):
        g = g.partial_derivative(T)
    return g


@dataclass
class _MeetResult:
    u0: Fraction
    extracted: Dict[str, str]
    checks: Dict[str, object]
    notes: List[str]
    valid: bool


def _meet_core(base: IntPoly, xs: Tuple[str, ...], d: int, tau_s: int, chi_bits_bound: int,
               confluence_samples: int, seed: int, time_budget: Optional[float], label: str = "",
               start: Optional[float] = None) -> _MeetResult:
    k = len(xs)
    start = time.monotonic() if start is None else start
    deadline = None if time_budget is None else start + time_budget
    checks: Dict[str, object] = {}
    notes: List[str] = []
    extracted: Dict[str, str] = {}
    _, p, dp = _deformed_meeting(base, xs, d)
    g = cr_meeting(p, xs, dp, tau_g=tau_s + bit(dp) + 1)
    name = f"{label}Cr(Q_eps,zeta)"
    if not validate_sgb(g).ok:
        _audit_sgb(name, g, [], checks, 0, seed)
        return _MeetResult(Fraction(1), extracted, checks, notes, False)
    mats = [mult_matrix(g, i) for i in range(k)]
    valid = _audit_sgb(name, g, mats, checks, confluence_samples, seed)
    n_dim, big_d = g.N, g.D
    js = range((k - 1) * n_dim * n_dim + 1)
    sweep_start = time.monotonic()
    controls: List[IntPoly] = []
    chi_checks = []
    for j in js:
        if deadline is not None and time.monotonic() > deadline:
            raise BudgetExceeded(f"meeting pipeline exceeded {time_budget}s at j={j}")
        lin = mult_matrix_linear_form(g, j, mats)
        chi = charpoly(lin, T, deadline)
        cb = chi.bitsize()
        cdeg = chi.degree_in((EPS, ZETA))
        ok = cb <= chi_bits_bound and cdeg <= 2 * big_d * n_dim
        chi_checks.append({"j": j, "bitsize": cb, "bitsize_bound": chi_bits_bound,
                           "param_degree": cdeg, "param_degree_bound": 2 * big_d * n_dim, "ok": ok})
        valid &= ok
        gj = rescale_roots(chi, ZETA, T).specialize(ZETA, 0)
        if len(js) <= 4:
            extracted[f"{label}g[{j}]"] = str(gj)
        deg = gj.degree(T)
        split = gj.coefficients_in((T,))
        if deg < 1:
            notes.append(f"{label}g[{j}] has no positive degree in T")
            continue
        controls.append(split[(deg,)])
        for ell in range(1, deg):
            sub = subresultant_sequence(gj, _derivative_t(gj, ell), T)
            controls.extend(principal_coefficients(sub, T))
        if time_budget is not None and j >= 1:
            # coefficients grow with j, so the mean cost so far underestimates the rest
            spent = time.monotonic() - sweep_start
            projected = (sweep_start - start) + spent / (j + 1) * len(js)
            if projected > time_budget:
                raise BudgetExceeded(
                    f"projected j-sweep time {projected:.0f}s exceeds budget {time_budget:.0f}s "
                    f"({len(js)} values of j, N={n_dim}; {spent:.1f}s spent on the first {j + 1})")
    checks[f"{label}charpolys"] = chi_checks
    nonzero = [c for c in controls if not c.is_zero()]
    if not nonzero:
        notes.append(f"{label}no control polynomial: u0 = 1")
        u0 = Fraction(1)
    else:
        u0 = positive_root_lower_bound([c.with_variables((EPS,)) for c in nonzero])
    checks[f"{label}control_polynomials"] = len(nonzero)
    return _MeetResult(u0, extracted, checks, notes, valid)


def meeting_ball_certificate(q: IntPoly, confluence_samples: int = 200, seed: int = 0,
                             time_budget: Optional[float] = None) -> BallCertificate:
    """Ball centered at the origin meeting every connected component of ``Zer(q)``.

    The radius squared is the larger of ``1/u0`` (unbounded components) and the
    containing-ball radius squared (bounded components).
    """
    if q.is_zero():
        raise ValueError("zero polynomial")
    xs = _xs(q)
    if q.is_constant():
        return _constant_certificate(q, "meet", bounds.thm2_radius(len(xs), 1, max(q.bitsize(), 1)))
    start = time.monotonic()
    k, d, tau, _ = measure([q])
    closed = bounds.thm2_radius(k, d, tau)
    contain = _contain_core(q, confluence_samples, seed, label="bounded:")
    try:
        meet = _meet_core(q * q, xs, d, 2 * tau + k * bit(d + 1), closed.intermediates["tauprime"],
                          confluence_samples, seed, time_budget, start=start)
    except BudgetExceeded as exc:
        return _over_budget("meet", closed, exc, contain.checks)
    notes = contain.notes + meet.notes
    if k == 1 and not isolate_real_roots(to_dense(q)):
        notes.append("the zero set is empty; every ball meets all (no) components")
    radius_sq = max(1 / meet.u0, contain.radius_squared)
    checks = {**contain.checks, **meet.checks}
    return _finish("meet", radius_sq, closed, contain.per_coordinate,
                   {**contain.extracted, **meet.extracted}, checks, notes,
                   contain.valid and meet.valid, u0=meet.u0)


def _over_budget(mode, closed, exc, checks) -> BallCertificate:
    cert = BallCertificate(mode, Fraction(0), closed, checks=dict(checks), valid=False, downgraded=True)
    cert.checks["budget"] = str(exc)
    cert.warnings.append(f"time budget exceeded, radius downgraded to the closed form: {exc}")
    return cert


# --------------------------------------------------------------------------
# semi-algebraic families


def _subsets(polys: Sequence[IntPoly]):
    for r in range(1, len(polys) + 1):
        yield from itertools.combinations(range(len(polys)), r)


def _sum_of_squares(polys: Sequence[IntPoly], idx) -> IntPoly:
    out = IntPoly.const(0, polys[0].variables)
    for i in idx:
        out = out + polys[i] * polys[i]
    return out


def _unify(polys: Sequence[IntPoly]) -> List[IntPoly]:
    if not polys:
        raise ValueError("empty family")
    if any(p.is_zero() for p in polys):
        raise ValueError("zero polynomial in family")
    allv: Tuple[str, ...] = ()
    for p in polys:
        allv = allv + tuple(v for v in p.variables if v not in allv)
    return [p.with_variables(allv) for p in polys]


def sa_contain(polys: Sequence[IntPoly], mode: str = "certificate", max_subsets: int = 4096,
               confluence_samples: int = 200, seed: int = 0):
    """Ball containing every bounded component of every realizable sign condition."""
    polys = _unify(polys)
    k, d, tau, s = measure(polys)
    closed = bounds.thm3_radius(k, max(d, 1), s, max(tau, 1))
    if mode == "closed":
        return closed
    if 2 ** s - 1 > max_subsets:
        cert = BallCertificate("contain", Fraction(0), closed, downgraded=True)
        cert.warnings.append(f"{2 ** s - 1} subsets exceed max_subsets={max_subsets}: closed form used")
        return cert
    best = Fraction(0)
    per_coord: List[Fraction] = []
    extracted, checks, notes, valid = {}, {}, [], True
    for idx in _subsets(polys):
        label = "{" + ",".join(str(i + 1) for i in idx) + "}:"
        sos = _sum_of_squares(polys, idx)
        if sos.is_constant():
            notes.append(f"{label} sum of squares is constant")
            continue
        res = _contain_core(sos, confluence_samples, seed, label=label)
        checks.update(res.checks)
        extracted.update(res.extracted)
        notes.extend(res.notes)
        valid &= res.valid
        checks[f"{label}radius_sq"] = str(res.radius_squared)
        if res.radius_squared > best:
            best, per_coord = res.radius_squared, res.per_coordinate
    return _finish("contain", best, closed, per_coord, extracted, checks, notes, valid)


def sa_meet(polys: Sequence[IntPoly], mode: str = "certificate", max_subsets: int = 4096,
            confluence_samples: int = 200, seed: int = 0, time_budget: Optional[float] = None):
    """Ball meeting every component of every realizable sign condition."""
    polys = _unify(polys)
    k, d, tau, s = measure(polys)
    closed = bounds.thm4_radius(k, max(d, 1), s, max(tau, 1))
    if mode == "closed":
        return closed
    if 2 ** s - 1 > max_subsets:
        cert = BallCertificate("meet", Fraction(0), closed, downgraded=True)
        cert.warnings.append(f"{2 ** s - 1} subsets exceed max_subsets={max_subsets}: closed form used")
        return cert
    start = time.monotonic()
    xs = polys[0].variables
    tau_s = 2 * tau + k * bit(d + 1) + bit(s)
    best = Fraction(0)
    u0_min: Optional[Fraction] = None
    extracted, checks, notes, valid = {}, {}, [], True
    for idx in _subsets(polys):
        label = "{" + ",".join(str(i + 1) for i in idx) + "}:"
        sos = _sum_of_squares(polys, idx)
        if sos.is_constant():
            notes.append(f"{label} sum of squares is constant")
            continue
        res = _contain_core(sos, confluence_samples, seed, label=label + "bounded:")
        try:
            meet = _meet_core(sos, xs, max(d, 1), tau_s, closed.intermediates["tausecond"],
                              confluence_samples, seed, time_budget, label=label, start=start)
        except BudgetExceeded as exc:
            return _over_budget("meet", closed, exc, checks)
        for r in (res, meet):
            checks.update(r.checks)
            extracted.update(r.extracted)
            notes.extend(r.notes)
        valid &= res.valid and meet.valid
        u0_min = meet.u0 if u0_min is None else min(u0_min, meet.u0)
        best = max(best, res.radius_squared, 1 / meet.u0)
    return _finish("meet", best, closed, [], extracted, checks, notes, valid, u0=u0_min)
