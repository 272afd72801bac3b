"""Brute-force oracles used to sanity-check certified radii.

Exact in one variable (real root isolation); approximate in two (sign grid
plus flood fill).  The grid is only ever compared with a margin equal to its
stated error bound.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import ndimage

from .polyring import IntPoly
from .univar import IsolatingInterval, isolate_real_roots, root_square_at_most, to_dense


@dataclass(frozen=True)
class SignCondition:
    assignment: Dict[int, int]

    def check(self, size: int) -> None:
        if sorted(self.assignment) != list(range(size)):
            raise ValueError(f"sign condition must assign every index 0..{size - 1} exactly once")
        bad = [v for v in self.assignment.values() if v not in (-1, 0, 1)]
        if bad:
            raise ValueError(f"signs must be -1, 0 or 1, got {bad}")


@dataclass
class GridComponent:
    label: int
    representative: Tuple[float, float]
    touches_boundary: bool
    min_distance: float
    max_distance: float
    cells: int

    @property
    def bounded(self) -> bool:
        return not self.touches_boundary

    def to_json(self) -> dict:
        return {"label": self.label, "representative": list(self.representative),
                "bounded_within_box": self.bounded, "min_distance": self.min_distance,
                "max_distance": self.max_distance, "cells": self.cells}


@dataclass
class GridReport:
    resolution: int
    box: float
    components: List[GridComponent] = field(default_factory=list)

    @property
    def error(self) -> float:
        # distance from a cell center to its farthest corner
        return self.box * math.sqrt(2) / self.resolution

    def to_json(self) -> dict:
        return {"resolution": self.resolution, "box": self.box, "distance_error": self.error,
                "components": [c.to_json() for c in self.components]}


def oracle_roots_1d(q: IntPoly) -> List[IsolatingInterval]:
    """Sorted isolating intervals of the real roots of a univariate ``q``."""
    if q.is_zero():
        raise ValueError("zero polynomial")
    return isolate_real_roots(to_dense(q))


def _eval_grid(p: IntPoly, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    out = np.zeros(np.broadcast(xs, ys).shape)
    for (a, b), c in p.terms.items():
        out += float(c) * xs ** a * ys ** b
    return out


def oracle_extent_grid(polys: Sequence[IntPoly], sign_condition: Optional[SignCondition] = None,
                       resolution: int = 512, box: float = 4.0) -> GridReport:
    """Components of a sign condition's realization on ``[-box, box]^2``.

    Without a sign condition the common zero set of ``polys`` is used.  A cell
    realizes an equation when the polynomial's corner signs are not all equal
    and the same strict sign; it realizes ``+-1`` when its center has that sign.
    """
    polys = list(polys)
    if not polys:
        raise ValueError("empty family")
    if any(len(p.variables) != 2 for p in polys):
        raise ValueError("the grid oracle needs exactly two variables")
    if resolution < 64:
        raise ValueError("resolution must be at least 64")
    if sign_condition is None:
        sign_condition = SignCondition({i: 0 for i in range(len(polys))})
    sign_condition.check(len(polys))
    axis = np.linspace(-box, box, resolution + 1)
    gx, gy = np.meshgrid(axis, axis, indexing="ij")
    centers = (axis[:-1] + axis[1:]) / 2
    cx, cy = np.meshgrid(centers, centers, indexing="ij")
    mask = np.ones((resolution, resolution), dtype=bool)
    for i, p in enumerate(polys):
        sigma = sign_condition.assignment[i]
        if sigma == 0:
            s = np.sign(_eval_grid(p, gx, gy))
            corners = [s[:-1, :-1], s[1:, :-1], s[:-1, 1:], s[1:, 1:]]
            all_pos = np.logical_and.reduce([c > 0 for c in corners])
            all_neg = np.logical_and.reduce([c < 0 for c in corners])
            mask &= ~(all_pos | all_neg)
        else:
            mask &= np.sign(_eval_grid(p, cx, cy)) == sigma
    labels, count = ndimage.label(mask, structure=np.ones((3, 3), dtype=int))
    dist = np.hypot(cx, cy)
    comps = []
    for lab in range(1, count + 1):
        cells = labels == lab
        idx = np.argwhere(cells)
        rows, cols = idx[:, 0], idx[:, 1]
        touches = bool(rows.min() == 0 or cols.min() == 0 or rows.max() == resolution - 1
                       or cols.max() == resolution - 1)
        d = dist[cells]
        r0, c0 = idx[0]
        comps.append(GridComponent(lab, (float(centers[r0]), float(centers[c0])), touches,
                                   float(d.min()), float(d.max()), int(cells.sum())))
    return GridReport(resolution, float(box), comps)


def grid_meets_all(report: GridReport, radius_squared: Fraction) -> bool:
    r = math.sqrt(float(radius_squared))
    return all(c.min_distance <= r + report.error for c in report.components)


def grid_contains_bounded(report: GridReport, radius_squared: Fraction) -> bool:
    r = math.sqrt(float(radius_squared))
    return all(c.max_distance <= r + report.error for c in report.components if c.bounded)


def roots_inside(polys: Sequence[IntPoly], radius_squared: Fraction) -> bool:
    """Every real root of every univariate member satisfies ``r^2 <= radius_squared`` (exact)."""
    return all(root_square_at_most(iv, Fraction(radius_squared))
               for p in polys for iv in oracle_roots_1d(p))


def random_instance(seed: int, k: int, d: int, tau: int, s: int) -> List[IntPoly]:
    """``s`` sparse polynomials in ``X1..Xk`` of total degree exactly ``d``, coefficient bitsize <= tau."""
    for name, v in (("k", k), ("d", d), ("tau", tau), ("s", s)):
        if v < 1:
            raise ValueError(f"{name} must be positive")
    rng = random.Random(seed)
    xs = tuple(f"X{i + 1}" for i in range(k))
    cmax = 2 ** tau - 1
    out = []
    for _ in range(s):
        terms: Dict[Tuple[int, ...], int] = {}
        top = [0] * k
        for _ in range(d):
            top[rng.randrange(k)] += 1
        terms[tuple(top)] = rng.choice((-1, 1)) * rng.randint(1, cmax)
        for _ in range(rng.randint(0, 3)):
            e = [0] * k
            for _ in range(rng.randint(0, d)):
                e[rng.randrange(k)] += 1
            terms[tuple(e)] = rng.choice((-1, 1)) * rng.randint(1, cmax)
        out.append(IntPoly(xs, terms))
    return out
