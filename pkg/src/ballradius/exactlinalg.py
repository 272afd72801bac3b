"""Division-free characteristic polynomials (Berkowitz)."""

from __future__ import annotations

import time
from typing import List, Optional, Sequence

from .polyring import IntPoly
from .sgb import PolyMatrix


class BudgetExceeded(RuntimeError):
    """Raised when a computation cannot finish inside its time budget."""


def berkowitz_coefficients(rows: Sequence[Sequence], one, deadline: Optional[float] = None,
                           progress=None) -> List:
    """Coefficients ``[1, c1, ..., cn]`` of ``det(t*I - M)``, highest degree first.

    Works over any commutative ring whose elements support ``+ - *``; ``one``
    is the ring's unit.  ``progress(r, n)`` is called after each leading block.
    """
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("charpoly needs a square matrix")
    if n == 0:
        return [one]
    zero = one - one
    c = [one, zero - rows[0][0]]
    for r in range(1, n):
        if deadline is not None and time.monotonic() > deadline:
            raise BudgetExceeded(f"charpoly stopped at block {r}/{n}")
        # column above the diagonal, row left of it, and the diagonal entry
        col = [rows[i][r] for i in range(r)]
        row = [rows[r][i] for i in range(r)]
        first = [one, zero - rows[r][r]]
        v = col
        for _ in range(r):
            s = zero
            for a, b in zip(row, v):
                if a and b:
                    s = s + a * b
            first.append(zero - s)
            if len(first) < r + 2:
                nv = []
                for i in range(r):
                    acc = zero
                    ri = rows[i]
                    for t in range(r):
                        if ri[t] and v[t]:
                            acc = acc + ri[t] * v[t]
                    nv.append(acc)
                v = nv
        # Toeplitz (r+2) x (r+1) lower-triangular product with c
        new = []
        for i in range(r + 2):
            acc = zero
            for j in range(min(i, r) + 1):
                a = first[i - j]
                if a and c[j]:
                    acc = acc + a * c[j]
            new.append(acc)
        c = new
        if progress is not None:
            progress(r + 1, n)
    return c


def charpoly(m: PolyMatrix, t: str = "T", deadline: Optional[float] = None, progress=None) -> IntPoly:
    """``det(t*I - M)`` as an :class:`IntPoly` over ``(t,) + M.variables``."""
    if t in m.variables:
        raise ValueError(f"{t} already occurs in the matrix entries")
    vs = m.variables
    one = IntPoly.const(1, vs)
    coeffs = berkowitz_coefficients(m.rows, one, deadline, progress)
    n = m.size
    allv = (t,) + vs
    terms = {}
    for i, cp in enumerate(coeffs):
        for e, c in cp.terms.items():
            terms[(n - i,) + e] = c
    return IntPoly(allv, terms)


def evaluate_charpoly_coefficients(coeffs: Sequence[IntPoly], m: PolyMatrix) -> PolyMatrix:
    """``chi(M)`` by Horner's rule; coefficients highest degree first."""
    n = m.size
    acc = PolyMatrix.identity(n, m.variables).scale(0)
    ident = PolyMatrix.identity(n, m.variables)
    for c in coeffs:
        acc = acc @ m + ident.scale(c)
    return acc
