"""Closed-form radii for balls containing / meeting connected components.

All radii have the shape ``sqrt(m * 2^e)`` for integers ``m, e``, so a report
stores ``radius_squared`` as an exact int and keeps ``radius_log2`` only for
display.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Dict, Optional, Sequence, Union

from .polyring import bit


class ParameterError(ValueError):
    pass


@dataclass(frozen=True)
class BoundReport:
    theorem: str
    k: int
    d: int
    tau: int
    s: Optional[int]
    intermediates: Dict[str, int]
    mantissa: int
    exponent2: int

    @cached_property
    def radius_squared(self) -> int:
        """Exact value; materializing it costs ``exponent2`` bits."""
        return self.mantissa << self.exponent2

    def compare(self, x: Union[int, Fraction, "BoundReport"]) -> int:
        """Sign of ``radius_squared - x``, decided without expanding huge powers of two."""
        if isinstance(x, BoundReport):
            return _cmp_pairs(self.mantissa, self.exponent2, x.mantissa, x.exponent2)
        return -cmp_pow2(x, self.mantissa, self.exponent2)

    def covers(self, x: Union[int, Fraction]) -> bool:
        """``x <= radius_squared``, exactly."""
        return self.compare(x) >= 0

    @property
    def radius_log2(self) -> float:
        return (math.log2(self.mantissa) + self.exponent2) / 2

    def normalized(self):
        """``(odd_mantissa, exponent)`` with ``radius_squared = odd_mantissa * 2**exponent``."""
        m, e = self.mantissa, self.exponent2
        tz = (m & -m).bit_length() - 1
        return m >> tz, e + tz

    def to_json(self) -> dict:
        m, e = self.normalized()
        it = self.intermediates
        return {
            "theorem": self.theorem,
            "k": self.k,
            "d": self.d,
            "s": self.s,
            "tau": self.tau,
            "N": it.get("N"),
            "D": it.get("D"),
            "dprime": it.get("dprime"),
            "rho": it.get("rho"),
            "rhoprime": it.get("rhoprime"),
            "tauprime": it.get("tauprime", it.get("tausecond")),
            "radius_sq_mantissa": str(m),
            "radius_sq_exponent2": e,
            "radius_log2": self.radius_log2,
        }


def _check(**params):
    for name, v in params.items():
        if not isinstance(v, int) or isinstance(v, bool) or v < 1:
            raise ParameterError(f"{name} must be a positive integer, got {v!r}")


def _cmp_pairs(m1: int, e1: int, m2: int, e2: int) -> int:
    l1, l2 = m1.bit_length() + e1, m2.bit_length() + e2
    if l1 != l2:
        return 1 if l1 > l2 else -1
    # equal lengths keep the exponent gap below the mantissa sizes
    e = min(e1, e2)
    a, b = m1 << (e1 - e), m2 << (e2 - e)
    return (a > b) - (a < b)


def cmp_pow2(x: Union[int, Fraction], m: int, e: int) -> int:
    """Sign of ``x - m * 2**e`` for ``m > 0, e >= 0``; exact."""
    x = Fraction(x)
    if x <= 0:
        return -1
    # log2(x) lies in (lx - 1, lx + 1) and log2(m * 2^e) in [ly - 1, ly)
    lx = x.numerator.bit_length() - x.denominator.bit_length()
    ly = m.bit_length() + e
    if lx + 1 <= ly - 1:
        return -1
    if lx - 1 >= ly:
        return 1
    diff = x.numerator - x.denominator * (m << e)
    return (diff > 0) - (diff < 0)


def _report(theorem, k, d, tau, s, inter, mantissa, exponent) -> BoundReport:
    return BoundReport(theorem, k, d, tau, s, inter, mantissa, exponent)


def thm1_radius(k: int, d: int, tau: int) -> BoundReport:
    """Ball containing every bounded component of ``Zer(Q)``, ``deg Q = d``, bitsize ``tau``."""
    _check(k=k, d=d, tau=tau)
    n = (d + 1) * d ** (k - 1)
    exp = n * (k * d + 2) * (tau + bit(n) + bit(d + 1))
    return _report("T1", k, d, tau, None, {"N": n, "exponent": exp}, k * (n + 1) ** 2, 2 * exp)


def meeting_parameters(k: int, d: int) -> Dict[str, int]:
    """``d', D, N, rho, rho'`` shared by the two meeting bounds."""
    dp = max(2 * (d + 1), 6)
    big_d = k * dp - 2 * (k - 1)
    n = dp * (dp - 1) ** (k - 1)
    rho = big_d * (k * bit(d + 1) + bit(dp) + 1 + 4 * bit(2 * big_d + 1) + bit(n)) - 2 * bit(2 * big_d + 1)
    rho_p = (2 * k - 2) * bit(n) + k * bit(k) + 2 * bit(2 * big_d * n + 1) + 1
    return {"dprime": dp, "D": big_d, "N": n, "rho": rho, "rhoprime": rho_p}


def _meeting(theorem, k, d, tau, s, t_key, t_val, p) -> BoundReport:
    n, big_d = p["N"], p["D"]
    inter = dict(p)
    inter[t_key] = t_val
    mantissa = 2 * big_d * n * (2 * n - 1) + 1
    exponent = (2 * n - 1) * t_val + n * n * bit(n + 1)
    inter["exponent"] = exponent
    return _report(theorem, k, d, tau, s, inter, mantissa, exponent)


def thm2_radius(k: int, d: int, tau: int) -> BoundReport:
    _check(k=k, d=d, tau=tau)
    p = meeting_parameters(k, d)
    n, big_d = p["N"], p["D"]
    tau_p = 2 * n * big_d * tau + n * (p["rho"] + p["rhoprime"])
    return _meeting("T2", k, d, tau, None, "tauprime", tau_p, p)


def thm3_radius(k: int, d: int, s: int, tau: int) -> BoundReport:
    _check(k=k, d=d, s=s, tau=tau)
    n = (2 * d + 1) * (2 * d) ** (k - 1)
    exp = n * (2 * k * d + 2) * (2 * tau + bit(n) + (k + 1) * bit(d + 1) + bit(s))
    return _report("T3", k, d, tau, s, {"N": n, "exponent": exp}, k * (n + 1) ** 2, 2 * exp)


def thm4_radius(k: int, d: int, s: int, tau: int) -> BoundReport:
    _check(k=k, d=d, s=s, tau=tau)
    p = meeting_parameters(k, d)
    n, big_d = p["N"], p["D"]
    tau_pp = 2 * n * big_d * (2 * tau + k * bit(d + 1) + bit(s)) + n * (p["rho"] + p["rhoprime"])
    return _meeting("T4", k, d, tau, s, "tausecond", tau_pp, p)


def entry_bitsize_estimate(degrees: Sequence[int], ell: int, lam: int, tau_g: int) -> int:
    """Bitsize bound for entries of the parametrized multiplication matrices."""
    degrees = list(degrees)
    if not degrees or any(a < b for a, b in zip(degrees, degrees[1:])) or degrees[-1] < 1:
        raise ParameterError(f"degree list must be nonincreasing and positive: {degrees}")
    if ell < 0 or lam < 0 or tau_g < 1:
        raise ParameterError("need ell, lambda >= 0 and tau_G >= 1")
    k = len(degrees)
    big_d = sum(degrees) - k + 1
    n = math.prod(degrees)
    b = bit(big_d * lam + 1)
    return big_d * (tau_g + 2 * ell * b + bit(n)) - ell * b - bit(n)


def closed_form(theorem: int, k: int, d: int, tau: int, s: int = 1) -> BoundReport:
    if theorem == 1:
        return thm1_radius(k, d, tau)
    if theorem == 2:
        return thm2_radius(k, d, tau)
    if theorem == 3:
        return thm3_radius(k, d, s, tau)
    if theorem == 4:
        return thm4_radius(k, d, s, tau)
    raise ParameterError(f"unknown theorem {theorem}")
