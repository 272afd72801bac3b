"""Parametrized special Groebner bases and their multiplication matrices.

A basis ``{Z*Xi^di + Qi(Y, X)}`` with ``deg Qi < di`` has the quotient basis
``Z^|a| X^a`` (``ai < di``).  Rewriting ``Z*Xi^di -> -Qi`` consumes one ``Z``
and strictly lowers the X-degree, so normal forms always exist and need no
division.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .bounds import entry_bitsize_estimate
from .polyring import Exps, IntPoly


class InvalidBasis(ValueError):
    pass


# --------------------------------------------------------------------------
# matrices with polynomial entries


class PolyMatrix:
    """Square matrix of :class:`IntPoly` entries over a fixed variable tuple."""

    __slots__ = ("variables", "rows")

    def __init__(self, rows: Sequence[Sequence[IntPoly]], variables: Sequence[str] | None = None):
        rows = [list(r) for r in rows]
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix must be square")
        if variables is None:
            vs: Tuple[str, ...] = ()
            for r in rows:
                for p in r:
                    vs = vs + tuple(v for v in p.variables if v not in vs)
            variables = vs
        variables = tuple(variables)
        self.variables = variables
        self.rows = [[p.with_variables(variables) for p in r] for r in rows]

    @classmethod
    def from_ints(cls, rows, variables: Sequence[str] = ()) -> "PolyMatrix":
        return cls([[IntPoly.const(c, variables) for c in r] for r in rows], variables)

    @classmethod
    def identity(cls, n: int, variables: Sequence[str] = ()) -> "PolyMatrix":
        return cls.from_ints([[int(i == j) for j in range(n)] for i in range(n)], variables)

    @property
    def size(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        if not isinstance(other, PolyMatrix) or other.size != self.size:
            return NotImplemented
        return all(a == b for ra, rb in zip(self.rows, other.rows) for a, b in zip(ra, rb))

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        return PolyMatrix([[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)])

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        return PolyMatrix([[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)])

    def scale(self, c) -> "PolyMatrix":
        return PolyMatrix([[a * c for a in r] for r in self.rows], self.variables)

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        n = self.size
        vs = self.variables + tuple(v for v in other.variables if v not in self.variables)
        a = self if self.variables == vs else PolyMatrix(self.rows, vs)
        b = other if other.variables == vs else PolyMatrix(other.rows, vs)
        zero = IntPoly.const(0, vs)
        cols = [[b.rows[r][c] for r in range(n)] for c in range(n)]
        out = []
        for i in range(n):
            row = a.rows[i]
            nz = [(r, p) for r, p in enumerate(row) if p]
            out_row = []
            for c in range(n):
                col = cols[c]
                acc = zero
                for r, p in nz:
                    q = col[r]
                    if q:
                        acc = acc + p * q
                out_row.append(acc)
            out.append(out_row)
        return PolyMatrix(out, vs)

    def apply(self, vec: Sequence[IntPoly]) -> List[IntPoly]:
        return [sum((p * v for p, v in zip(r, vec)), IntPoly.const(0, self.variables)) for r in self.rows]

    def entries(self):
        for r in self.rows:
            yield from r

    def max_degree(self, var: str) -> int:
        return max(p.degree(var) for p in self.entries())

    def max_degree_in(self, variables: Sequence[str]) -> int:
        return max(p.degree_in(variables) for p in self.entries())

    def bitsize(self) -> int:
        return max(p.bitsize() for p in self.entries())

    def evaluate(self, point) -> List[List]:
        return [[p.evaluate(point) for p in r] for r in self.rows]

    def __str__(self) -> str:
        return "[" + ",\n ".join("[" + ", ".join(str(p) for p in r) + "]" for r in self.rows) + "]"


# --------------------------------------------------------------------------
# the basis itself


@dataclass(frozen=True)
class SpecialGroebnerBasis:
    x_vars: Tuple[str, ...]
    degrees: Tuple[int, ...]
    z: str
    y: Tuple[str, ...]
    generators: Tuple[IntPoly, ...]
    lam: int = 0
    tau_g: Optional[int] = None
    _parts: List[Dict[Exps, IntPoly]] = field(default=None, repr=False, compare=False)

    @property
    def k(self) -> int:
        return len(self.x_vars)

    @property
    def params(self) -> Tuple[str, ...]:
        return (self.z,) + tuple(v for v in self.y if v != self.z)

    @property
    def ell(self) -> int:
        return len(self.y)

    @property
    def N(self) -> int:
        return math.prod(self.degrees)

    @property
    def D(self) -> int:
        return sum(self.degrees) - self.k + 1

    def tail(self, i: int) -> Dict[Exps, IntPoly]:
        """``Q_i`` split by X-exponent, coefficients over :attr:`params`."""
        return self._parts[i]

    def generator_bitsize(self) -> int:
        return max(g.bitsize() for g in self.generators)

    def entry_bound(self) -> int:
        tau = self.tau_g if self.tau_g is not None else self.generator_bitsize()
        return entry_bitsize_estimate(self.degrees, self.ell, self.lam, tau)


def make_sgb(generators: Sequence[IntPoly], x_vars: Sequence[str], degrees: Sequence[int], z: str,
             y: Sequence[str] = (), lam: Optional[int] = None, tau_g: Optional[int] = None,
             normalize: bool = True) -> SpecialGroebnerBasis:
    """Assemble a basis, scaling each generator so its ``Xi^di`` coefficient is exactly ``Z``.

    Scaling by the integer ``u`` in ``u*Z*Xi^di`` (typically ``u = -1``) leaves
    the ideal unchanged.  A generator that cannot be normalized is kept as is and
    reported by :func:`validate_sgb`.
    """
    x_vars, degrees, y = tuple(x_vars), tuple(degrees), tuple(y)
    if len(generators) != len(x_vars) or len(degrees) != len(x_vars):
        raise InvalidBasis("need one generator and one degree per variable")
    params = (z,) + tuple(v for v in y if v != z)
    stray = {v for g in generators for v in g.used_variables()} - set(x_vars) - set(params)
    if stray:
        raise InvalidBasis(f"generators use undeclared variables {sorted(stray)}")
    gens = []
    parts = []
    zpoly = IntPoly.var(z, params)
    for i, g in enumerate(generators):
        split = g.coefficients_in(x_vars)
        lead_e = tuple(degrees[i] if j == i else 0 for j in range(len(x_vars)))
        lead = split.get(lead_e)
        if normalize and lead is not None:
            lead = lead.with_variables(params)
            if len(lead.terms) == 1:
                (e, c), = lead.terms.items()
                if e == zpoly.leading_term()[0] and c != 1:
                    try:
                        g = g.exact_div(c)
                        split = g.coefficients_in(x_vars)
                    except ArithmeticError:
                        pass
        gens.append(g)
        parts.append({e: p.with_variables(params) for e, p in split.items() if e != lead_e})
    lam_measured = max((p.degree_in(y) for part in parts for p in part.values()), default=0)
    lam = max(lam_measured, 0) if lam is None else lam
    return SpecialGroebnerBasis(x_vars, degrees, z, y, tuple(gens), lam, tau_g, parts)


@dataclass
class ValidationReport:
    status: str  # "pass" | "warn" | "fail"
    messages: List[str]

    @property
    def ok(self) -> bool:
        return self.status != "fail"


def validate_sgb(g: SpecialGroebnerBasis) -> ValidationReport:
    fails: List[str] = []
    warns: List[str] = []
    k = g.k
    if any(a < b for a, b in zip(g.degrees, g.degrees[1:])) or min(g.degrees, default=0) < 1:
        fails.append(f"degrees {g.degrees} must be nonincreasing and >= 1")
    zpoly = IntPoly.var(g.z, g.params)
    for i, gen in enumerate(g.generators):
        split = gen.coefficients_in(g.x_vars)
        lead_e = tuple(g.degrees[i] if j == i else 0 for j in range(k))
        lead = split.get(lead_e)
        if lead is None or lead.with_variables(g.params) != zpoly:
            fails.append(f"generator {i + 1}: X-leading part is {lead} * {g.x_vars[i]}^{g.degrees[i]}, not {g.z}")
        tail = g.tail(i)
        deg = max((sum(e) for e in tail), default=-1)
        if deg >= g.degrees[i]:
            fails.append(f"generator {i + 1}: deg(Q{i + 1}) = {deg} >= d{i + 1} = {g.degrees[i]}")
        for j in range(k):
            if j == i:
                continue
            dj = max((e[j] for e in tail), default=0)
            if dj > g.degrees[j]:
                fails.append(f"generator {i + 1}: deg_{g.x_vars[j]}(Q{i + 1}) = {dj} > d{j + 1}")
            elif dj == g.degrees[j]:
                warns.append(f"generator {i + 1}: deg_{g.x_vars[j]}(Q{i + 1}) = d{j + 1} = {dj}")
        lam = max((p.degree_in(g.y) for p in tail.values()), default=0)
        if lam > g.lam:
            fails.append(f"generator {i + 1}: deg_Y(Q{i + 1}) = {lam} > lambda = {g.lam}")
    if g.tau_g is not None and g.generator_bitsize() > g.tau_g:
        fails.append(f"generator bitsize {g.generator_bitsize()} exceeds tau_G = {g.tau_g}")
    if fails:
        return ValidationReport("fail", fails + warns)
    return ValidationReport("warn" if warns else "pass", warns)


def mon_basis(g: SpecialGroebnerBasis) -> List[Exps]:
    """Exponents ``a`` of the basis elements ``Z^|a| X^a``, in graded-lex order."""
    alphas = list(itertools.product(*(range(d) for d in g.degrees)))
    alphas.sort(key=lambda a: (sum(a), tuple(-x for x in a)))
    return alphas


def _basis_index(g: SpecialGroebnerBasis) -> Dict[Exps, int]:
    return {a: i for i, a in enumerate(mon_basis(g))}


def normal_form(g: SpecialGroebnerBasis, z_exp: int, beta: Sequence[int],
                strategy: str = "highest") -> List[IntPoly]:
    """Coordinates of ``Z^z_exp X^beta`` over :func:`mon_basis`, entries in ``Y, Z``.

    ``strategy`` picks the next term to rewrite: ``"highest"`` takes the
    highest-degree violating term and its leftmost violating variable,
    ``"lowest"`` the lowest-degree term and its rightmost variable.
    """
    beta = tuple(beta)
    if z_exp < sum(beta):
        raise ValueError(f"need Z-exponent >= |beta|, got {z_exp} < {sum(beta)}")
    params = g.params
    return _reduce(g, {beta: IntPoly.monomial(params, (z_exp,) + (0,) * (len(params) - 1))}, strategy)


def _reduce(g: SpecialGroebnerBasis, acc: Dict[Exps, IntPoly], strategy: str) -> List[IntPoly]:
    degs = g.degrees
    k = len(degs)
    z = g.z
    acc = dict(acc)
    while True:
        bad = [b for b in acc if any(b[i] >= degs[i] for i in range(k))]
        if not bad:
            break
        if strategy == "highest":
            b = max(bad, key=lambda e: (sum(e), e))
            i = next(i for i in range(k) if b[i] >= degs[i])
        elif strategy == "lowest":
            b = min(bad, key=lambda e: (sum(e), e))
            i = next(i for i in reversed(range(k)) if b[i] >= degs[i])
        else:
            raise ValueError(f"unknown strategy {strategy!r}")
        c = acc.pop(b).shift(z, -1)
        base = b[:i] + (b[i] - degs[i],) + b[i + 1:]
        for gam, q in g.tail(i).items():
            nb = tuple(x + y for x, y in zip(base, gam))
            v = acc.get(nb)
            t = c * q
            v = -t if v is None else v - t
            if v:
                acc[nb] = v
            else:
                acc.pop(nb, None)
    index = _basis_index(g)
    zero = IntPoly.const(0, g.params)
    vec = [zero] * len(index)
    for a, c in acc.items():
        vec[index[a]] = c.shift(z, -sum(a))
    return vec


def mult_matrix(g: SpecialGroebnerBasis, i: int, strategy: str = "highest") -> PolyMatrix:
    """Matrix of multiplication by ``Z*X_i`` (``i`` is 0-based) on the basis."""
    if not validate_sgb(g).ok:
        raise InvalidBasis("; ".join(validate_sgb(g).messages))
    basis = mon_basis(g)
    cols = []
    for a in basis:
        beta = tuple(x + (j == i) for j, x in enumerate(a))
        cols.append(normal_form(g, sum(a) + 1, beta, strategy))
    n = len(basis)
    return PolyMatrix([[cols[c][r] for c in range(n)] for r in range(n)], g.params)


def mult_matrix_linear_form(g: SpecialGroebnerBasis, j: int, mats: Sequence[PolyMatrix] | None = None) -> PolyMatrix:
    """Matrix of ``Z*(X1 + j X2 + ... + j^(k-1) Xk)``."""
    if j < 0:
        raise ValueError("j must be >= 0")
    if mats is None:
        mats = [mult_matrix(g, i) for i in range(g.k)]
    out = mats[0]
    for i in range(1, g.k):
        c = j ** i
        if c:
            out = out + mats[i].scale(c)
    return out


# --------------------------------------------------------------------------
# audits


def check_commutation(mats: Sequence[PolyMatrix]) -> List[Tuple[int, int]]:
    """Pairs ``(i, j)`` whose matrices fail to commute."""
    bad = []
    for i, j in itertools.combinations(range(len(mats)), 2):
        if mats[i] @ mats[j] != mats[j] @ mats[i]:
            bad.append((i, j))
    return bad


def random_monomials(g: SpecialGroebnerBasis, count: int, seed: int = 0, max_factor: int = 2):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        beta = tuple(rng.randint(0, max_factor * d) for d in g.degrees)
        out.append((sum(beta) + rng.randint(0, 2), beta))
    return out


def confluence_probe(g: SpecialGroebnerBasis, count: int = 1000, seed: int = 0) -> int:
    """Number of random monomials whose two rewrite strategies disagree."""
    bad = 0
    for e, beta in random_monomials(g, count, seed):
        if normal_form(g, e, beta, "highest") != normal_form(g, e, beta, "lowest"):
            bad += 1
    return bad


def matrix_audit(g: SpecialGroebnerBasis, m: PolyMatrix) -> Dict[str, object]:
    """Degree and bitsize bounds on entries of a multiplication matrix."""
    zdeg = m.max_degree(g.z)
    ydeg = m.max_degree_in(g.y) if g.y else 0
    bits = m.bitsize()
    bound = g.entry_bound()
    return {
        "z_degree": zdeg, "z_degree_bound": g.D,
        "y_degree": ydeg, "y_degree_bound": g.D * g.lam,
        "bitsize": bits, "bitsize_bound": bound,
        "ok": zdeg <= g.D and ydeg <= g.D * g.lam and bits <= bound,
    }
