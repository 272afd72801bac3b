"""Sparse multivariate polynomials with arbitrary-precision integer coefficients.

An :class:`IntPoly` is an immutable map from exponent vectors to nonzero
Python ints over an ordered tuple of variable names.  Polynomials over
different variable tuples combine freely: the result lives over the union of
the two tuples (left operand's order first).
"""

from __future__ import annotations

import ast
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Sequence, Tuple, Union

Exps = Tuple[int, ...]
RationalValue = Fraction
Scalar = Union[int, Fraction]


def bit(n: int) -> int:
    """Number of binary digits of ``|n|``; ``bit(0)`` is 1 by convention."""
    n = abs(int(n))
    return n.bit_length() if n else 1


def _grlex_key(e: Exps):
    return (sum(e), e)


class IntPoly:
    __slots__ = ("variables", "terms")

    def __init__(self, variables: Iterable[str] = (), terms: Mapping[Exps, int] | None = None):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise ValueError(f"duplicate variable in {variables}")
        n = len(variables)
        clean: Dict[Exps, int] = {}
        if terms:
            for e, c in terms.items():
                e = tuple(int(x) for x in e)
                if len(e) != n:
                    raise ValueError(f"exponent vector {e} does not match variables {variables}")
                if any(x < 0 for x in e):
                    raise ValueError(f"negative exponent in {e}")
                if c:
                    clean[e] = clean.get(e, 0) + int(c)
                    if not clean[e]:
                        del clean[e]
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("IntPoly is immutable")

    @classmethod
    def _raw(cls, variables: Tuple[str, ...], terms: Dict[Exps, int]) -> "IntPoly":
        # trusted constructor: terms already clean
        p = object.__new__(cls)
        object.__setattr__(p, "variables", variables)
        object.__setattr__(p, "terms", terms)
        return p

    # ----- constructors -------------------------------------------------

    @classmethod
    def const(cls, c: int, variables: Iterable[str] = ()) -> "IntPoly":
        variables = tuple(variables)
        return cls._raw(variables, {(0,) * len(variables): int(c)} if c else {})

    @classmethod
    def var(cls, name: str, variables: Iterable[str] | None = None) -> "IntPoly":
        variables = tuple(variables) if variables is not None else (name,)
        if name not in variables:
            variables = variables + (name,)
        e = tuple(1 if v == name else 0 for v in variables)
        return cls._raw(variables, {e: 1})

    @classmethod
    def monomial(cls, variables: Sequence[str], exps: Sequence[int], coeff: int = 1) -> "IntPoly":
        return cls(variables, {tuple(exps): coeff})

    @classmethod
    def parse(cls, text: str, variables: Sequence[str] | None = None) -> "IntPoly":
        """Parse ``+ - * ^`` expressions with integer constants, e.g. ``"3*X1^2 - 12"``."""
        tree = ast.parse(text.replace("^", "**"), mode="eval")
        names = sorted({n.id for n in ast.walk(tree) if isinstance(n, ast.Name)})
        if variables is None:
            variables = tuple(names)
        else:
            variables = tuple(variables) + tuple(n for n in names if n not in variables)
        env = {v: cls.var(v, variables) for v in variables}

        def ev(node):
            if isinstance(node, ast.Expression):
                return ev(node.body)
            if isinstance(node, ast.Constant) and isinstance(node.value, int):
                return cls.const(node.value, variables)
            if isinstance(node, ast.Name):
                return env[node.id]
            if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
                v = ev(node.operand)
                return -v if isinstance(node.op, ast.USub) else v
            if isinstance(node, ast.BinOp):
                if isinstance(node.op, ast.Pow):
                    ex = node.right
                    if not (isinstance(ex, ast.Constant) and isinstance(ex.value, int)):
                        raise ValueError("exponents must be integer literals")
                    return ev(node.left) ** ex.value
                a, b = ev(node.left), ev(node.right)
                if isinstance(node.op, ast.Add):
                    return a + b
                if isinstance(node.op, ast.Sub):
                    return a - b
                if isinstance(node.op, ast.Mult):
                    return a * b
            raise ValueError(f"unsupported syntax in polynomial: {text!r}")

        return ev(tree).with_variables(variables)

    # ----- variable bookkeeping -----------------------------------------

    def with_variables(self, variables: Sequence[str]) -> "IntPoly":
        """Re-express over ``variables``; every variable actually used must be present."""
        variables = tuple(variables)
        if variables == self.variables:
            return self
        pos = {v: i for i, v in enumerate(variables)}
        used = self.used_variables()
        missing = [v for v in used if v not in pos]
        if missing:
            raise ValueError(f"variables {missing} are used but not in {variables}")
        idx = [(pos[v], i) for i, v in enumerate(self.variables) if v in pos]
        n = len(variables)
        out = {}
        for e, c in self.terms.items():
            ne = [0] * n
            for j, i in idx:
                ne[j] = e[i]
            out[tuple(ne)] = c
        return IntPoly._raw(variables, out)

    def used_variables(self) -> Tuple[str, ...]:
        used = [False] * len(self.variables)
        for e in self.terms:
            for i, x in enumerate(e):
                if x:
                    used[i] = True
        return tuple(v for v, u in zip(self.variables, used) if u)

    def _align(self, other: "IntPoly"):
        if self.variables == other.variables:
            return self.variables, self.terms, other.terms
        merged = self.variables + tuple(v for v in other.variables if v not in self.variables)
        return merged, self.with_variables(merged).terms, other.with_variables(merged).terms

    def _coerce(self, other) -> "IntPoly":
        if isinstance(other, IntPoly):
            return other
        if isinstance(other, int):
            return IntPoly.const(other, self.variables)
        return NotImplemented

    # ----- arithmetic ---------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        vs, a, b = self._align(other)
        out = dict(a)
        for e, c in b.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return IntPoly._raw(vs, out)

    __radd__ = __add__

    def __neg__(self):
        return IntPoly._raw(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, int):
            if not other:
                return IntPoly._raw(self.variables, {})
            return IntPoly._raw(self.variables, {e: c * other for e, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        vs, a, b = self._align(other)
        if len(a) > len(b):
            a, b = b, a
        out: Dict[Exps, int] = {}
        get = out.get
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = get(e, 0) + ca * cb
        return IntPoly._raw(vs, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = IntPoly.const(1, self.variables)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = IntPoly.const(other, self.variables)
        if not isinstance(other, IntPoly):
            return NotImplemented
        if self.variables == other.variables:
            return self.terms == other.terms
        _, a, b = self._align(other)
        return a == b

    def __hash__(self):
        return hash(frozenset(
            (tuple((v, x) for v, x in zip(self.variables, e) if x), c) for e, c in self.terms.items()
        ))

    def __bool__(self):
        return bool(self.terms)

    # ----- inspection ---------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> int:
        if not self.is_constant():
            raise ValueError("not a constant polynomial")
        return next(iter(self.terms.values()), 0)

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def degree(self, var: str) -> int:
        """Degree in one variable; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        if var not in self.variables:
            return 0
        i = self.variables.index(var)
        return max(e[i] for e in self.terms)

    def degree_in(self, variables: Iterable[str]) -> int:
        """Joint total degree in a subset of the variables; -1 for zero."""
        idx = [i for i, v in enumerate(self.variables) if v in set(variables)]
        return max((sum(e[i] for i in idx) for e in self.terms), default=-1)

    def bitsize(self) -> int:
        return max((bit(c) for c in self.terms.values()), default=0)

    def coefficient(self, exps: Sequence[int]) -> int:
        return self.terms.get(tuple(exps), 0)

    def sorted_terms(self):
        """Terms in descending graded-lexicographic order."""
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def leading_term(self) -> Tuple[Exps, int]:
        return max(self.terms.items(), key=lambda t: _grlex_key(t[0]))

    def content(self) -> int:
        from math import gcd
        g = 0
        for c in self.terms.values():
            g = gcd(g, c)
        return g

    # ----- structural operations ----------------------------------------

    def partial_derivative(self, var: Union[str, int]) -> "IntPoly":
        """Formal derivative; ``var`` is a name or a 0-based index into ``variables``."""
        if isinstance(var, int):
            var = self.variables[var]
        if var not in self.variables:
            return IntPoly._raw(self.variables, {})
        i = self.variables.index(var)
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = e[:i] + (e[i] - 1,) + e[i + 1:]
                out[ne] = c * e[i]
        return IntPoly._raw(self.variables, out)

    def coefficients_in(self, variables: Sequence[str]) -> Dict[Exps, "IntPoly"]:
        """Split as ``sum coeff[a] * vars^a``; coefficients live over the remaining variables."""
        variables = tuple(variables)
        pos = [self.variables.index(v) if v in self.variables else None for v in variables]
        rest = tuple(v for v in self.variables if v not in variables)
        rest_idx = [i for i, v in enumerate(self.variables) if v not in variables]
        groups: Dict[Exps, Dict[Exps, int]] = {}
        for e, c in self.terms.items():
            key = tuple(e[p] if p is not None else 0 for p in pos)
            groups.setdefault(key, {})[tuple(e[i] for i in rest_idx)] = c
        return {k: IntPoly._raw(rest, t) for k, t in groups.items()}

    @classmethod
    def from_coefficients(cls, variables: Sequence[str], coeffs: Mapping[Exps, "IntPoly"],
                          coeff_variables: Sequence[str]) -> "IntPoly":
        """Inverse of :meth:`coefficients_in`."""
        variables = tuple(variables)
        coeff_variables = tuple(coeff_variables)
        if set(variables) & set(coeff_variables):
            raise ValueError("monomial and coefficient variables overlap")
        out: Dict[Exps, int] = {}
        for key, cp in coeffs.items():
            cp = cp.with_variables(coeff_variables) if cp.variables != coeff_variables else cp
            for e, c in cp.terms.items():
                ne = tuple(key) + e
                out[ne] = out.get(ne, 0) + c
        return IntPoly(variables + coeff_variables, out)

    def min_degree(self, var: str) -> int:
        """Largest ``c`` with ``var^c`` dividing the polynomial (the monomial content)."""
        if not self.terms:
            raise ValueError("zero polynomial has no monomial content")
        if var not in self.variables:
            return 0
        i = self.variables.index(var)
        return min(e[i] for e in self.terms)

    def shift(self, var: str, k: int) -> "IntPoly":
        """Multiply by ``var^k``; negative ``k`` divides and must be exact."""
        if var not in self.variables:
            if k < 0 and self.terms:
                raise ValueError(f"{var}^{-k} does not divide")
            return self.with_variables(self.variables + (var,)).shift(var, k)
        i = self.variables.index(var)
        out = {}
        for e, c in self.terms.items():
            x = e[i] + k
            if x < 0:
                raise ValueError(f"{var}^{-k} does not divide")
            out[e[:i] + (x,) + e[i + 1:]] = c
        return IntPoly._raw(self.variables, out)

    def exact_div(self, other) -> "IntPoly":
        """Exact quotient; raises ``ArithmeticError`` if ``other`` does not divide."""
        if isinstance(other, int):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            out = {}
            for e, c in self.terms.items():
                q, r = divmod(c, other)
                if r:
                    raise ArithmeticError("inexact integer division")
                out[e] = q
            return IntPoly._raw(self.variables, out)
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        vs, a, b = self._align(other)
        if len(b) == 1:
            (eb, cb), = b.items()
            out = {}
            for e, c in a.items():
                ne = tuple(x - y for x, y in zip(e, eb))
                q, r = divmod(c, cb)
                if r or min(ne, default=0) < 0:
                    raise ArithmeticError("inexact monomial division")
                out[ne] = q
            return IntPoly._raw(vs, out)
        rem = dict(a)
        lt_e, lt_c = max(b.items(), key=lambda t: _grlex_key(t[0]))
        quot: Dict[Exps, int] = {}
        while rem:
            e, c = max(rem.items(), key=lambda t: _grlex_key(t[0]))
            ne = tuple(x - y for x, y in zip(e, lt_e))
            q, r = divmod(c, lt_c)
            if r or min(ne, default=0) < 0:
                raise ArithmeticError("inexact polynomial division")
            quot[ne] = q
            for eb, cb in b.items():
                k = tuple(x + y for x, y in zip(ne, eb))
                s = rem.get(k, 0) - q * cb
                if s:
                    rem[k] = s
                else:
                    rem.pop(k, None)
        return IntPoly._raw(vs, quot)

    def specialize(self, var: str, value: Scalar) -> "IntPoly":
        """Substitute ``var := value`` and drop ``var``.

        A non-integral rational value ``p/q`` yields ``q^deg_var(P) * P(p/q)``, which
        is integral and has the same zero set in the other variables.
        """
        if var not in self.variables:
            raise ValueError(f"{var} is not a variable of this polynomial")
        value = Fraction(value)
        i = self.variables.index(var)
        rest = self.variables[:i] + self.variables[i + 1:]
        num, den = value.numerator, value.denominator
        dg = max(self.degree(var), 0)
        out: Dict[Exps, int] = {}
        for e, c in self.terms.items():
            k = e[i]
            ne = e[:i] + e[i + 1:]
            out[ne] = out.get(ne, 0) + c * num ** k * den ** (dg - k)
        return IntPoly._raw(rest, {e: c for e, c in out.items() if c})

    def evaluate(self, point: Mapping[str, Scalar]) -> Scalar:
        """Exact value at a full assignment of the used variables."""
        total: Scalar = 0
        vals = [point.get(v, 0) if v in point else None for v in self.variables]
        for e, c in self.terms.items():
            t: Scalar = c
            for v, x, name in zip(vals, e, self.variables):
                if x:
                    if v is None:
                        raise KeyError(f"no value for variable {name}")
                    t = t * v ** x
            total += t
        return total

    def substitute(self, var: str, poly: "IntPoly") -> "IntPoly":
        """Replace ``var`` by a polynomial."""
        if var not in self.variables:
            return self
        groups = self.coefficients_in((var,))
        result = IntPoly.const(0, tuple(v for v in self.variables if v != var))
        powers = {0: IntPoly.const(1, poly.variables)}
        for (k,), c in sorted(groups.items()):
            if k not in powers:
                powers[k] = poly ** k
            result = result + c * powers[k]
        return result

    # ----- rendering ----------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(v if x == 1 else f"{v}^{x}" for v, x in zip(self.variables, e) if x)
            a = abs(c)
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(("+ " if c > 0 else "- ") + body)
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"IntPoly({str(self)!r}, variables={self.variables!r})"


def rescale_roots(chi: IntPoly, z: str, t: str = "T") -> IntPoly:
    """Return ``z^-c * chi(z, z*t)`` where ``z^c`` is the exact ``z``-content.

    For every ``z0 != 0``, ``t0`` is a root of the result at ``z = z0`` iff
    ``z0*t0`` is a root of ``chi`` at ``z = z0``.
    """
    if chi.is_zero():
        raise ValueError("zero input")
    vs = chi.variables
    for v in (z, t):
        if v not in vs:
            vs = vs + (v,)
    p = chi.with_variables(vs)
    iz, it = vs.index(z), vs.index(t)
    out = {}
    for e, c in p.terms.items():
        ne = list(e)
        ne[iz] += e[it]
        out[tuple(ne)] = c
    scaled = IntPoly._raw(vs, out)
    return scaled.shift(z, -scaled.min_degree(z))


def specialize(p: IntPoly, var: str, value: Scalar) -> IntPoly:
    return p.specialize(var, value)


def bitsize(p: IntPoly) -> int:
    return p.bitsize()


def partial_derivative(p: IntPoly, var: Union[str, int]) -> IntPoly:
    return p.partial_derivative(var)
