"""Facets of the correlation polytope of three propositions and their AND.

The vertices are the rows ``(a1, a2, a3, a1 & a2 & a3)`` of the truth table.
Facets are found by exact enumeration: every 4-subset of vertices spanning a
hyperplane is tested for having all remaining vertices on one side.  All
arithmetic is over the integers.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import reduce

import numpy as np

from ..core import ROUNDING_SLACK

VARIABLES = ("p1", "p2", "p3", "p123")


def truth_table_vertices() -> list[tuple[int, int, int, int]]:
    return [(a, b, c, a & b & c) for a, b, c in itertools.product((0, 1), repeat=3)]


@dataclass(frozen=True)
class LinearInequality:
    """``coeffs . p <= rhs`` with coprime integer coefficients."""

    coeffs: tuple[int, ...]
    rhs: int

    def evaluate(self, p) -> float:
        return float(np.dot(self.coeffs, p)) - self.rhs

    def satisfied(self, p, tol: float = 1e-12) -> bool:
        return self.evaluate(p) <= tol

    def tight(self, p, tol: float = 1e-12) -> bool:
        return abs(self.evaluate(p)) <= tol

    def __str__(self) -> str:
        terms = []
        for c, name in zip(self.coeffs, VARIABLES):
            if c:
                sign = "-" if c < 0 else "+"
                mag = "" if abs(c) == 1 else f"{abs(c)}*"
                terms.append(f"{sign} {mag}{name}")
        lhs = " ".join(terms).lstrip("+ ").strip() or "0"
        return f"{lhs} <= {self.rhs}"


def _det(m: list[list[int]]) -> int:
    # Laplace expansion; matrices here are at most 3x3
    n = len(m)
    if n == 1:
        return m[0][0]
    return sum((-1) ** j * m[0][j] * _det([row[:j] + row[j + 1 :] for row in m[1:]]) for j in range(n))


def _normal(points: list[tuple[int, ...]]) -> tuple[int, ...]:
    """Integer normal of the hyperplane through 4 points in Z^4 (zero if degenerate)."""
    base = points[0]
    rows = [[p[i] - base[i] for i in range(4)] for p in points[1:]]
    return tuple((-1) ** j * _det([r[:j] + r[j + 1 :] for r in rows]) for j in range(4))


def _primitive(coeffs: tuple[int, ...], rhs: int) -> LinearInequality:
    g = reduce(math.gcd, [abs(c) for c in coeffs] + [abs(rhs)])
    return LinearInequality(tuple(c // g for c in coeffs), rhs // g)


def polytope_inequalities(vertices=None) -> list[LinearInequality]:
    """Facet inequalities of conv(vertices), in a stable sorted order."""
    verts = vertices or truth_table_vertices()
    facets = set()
    for quad in itertools.combinations(verts, 4):
        n = _normal(list(quad))
        if not any(n):
            continue
        rhs = sum(a * b for a, b in zip(n, quad[0]))
        vals = [sum(a * b for a, b in zip(n, v)) for v in verts]
        if all(v <= rhs for v in vals):
            facets.add(_primitive(n, rhs))
        elif all(v >= rhs for v in vals):
            facets.add(_primitive(tuple(-c for c in n), -rhs))
    return sorted(facets, key=lambda f: (f.coeffs, f.rhs))


# The eight inequalities in the familiar form, normalised as coeffs.p <= rhs
KNOWN_FORMS = {
    "p1 <= 1": LinearInequality((1, 0, 0, 0), 1),
    "p2 <= 1": LinearInequality((0, 1, 0, 0), 1),
    "p3 <= 1": LinearInequality((0, 0, 1, 0), 1),
    "p123 >= 0": LinearInequality((0, 0, 0, -1), 0),
    "p123 <= p1": LinearInequality((-1, 0, 0, 1), 0),
    "p123 <= p2": LinearInequality((0, -1, 0, 1), 0),
    "p123 <= p3": LinearInequality((0, 0, -1, 1), 0),
    "p123 >= p1 + p2 + p3 - 2": LinearInequality((1, 1, 1, -1), 2),
}


def and_probability_range(p1: float, p2: float, p3: float, inequalities=None) -> tuple[float, float] | None:
    """Exact LP range of p123 for fixed marginals, from the facet list.

    With three coordinates fixed the LP is one-dimensional: each facet either
    caps p123 from one side or is a feasibility condition on the marginals.
    Returns None when the marginals are infeasible.
    """
    ineqs = inequalities if inequalities is not None else polytope_inequalities()
    lo, hi = -math.inf, math.inf
    for f in ineqs:
        slack = f.rhs - (f.coeffs[0] * p1 + f.coeffs[1] * p2 + f.coeffs[2] * p3)
        a = f.coeffs[3]
        if a > 0:
            hi = min(hi, slack / a)
        elif a < 0:
            lo = max(lo, slack / a)
        elif slack < -1e-12:
            return None
    if lo > hi + ROUNDING_SLACK:
        return None
    return min(lo, hi), hi


def and_probability_range_linprog(p1: float, p2: float, p3: float, inequalities=None) -> tuple[float, float] | None:
    """Same range via scipy's LP solver (cross-check path)."""
    from scipy.optimize import linprog

    ineqs = inequalities if inequalities is not None else polytope_inequalities()
    A = np.array([f.coeffs for f in ineqs], dtype=float)
    b = np.array([f.rhs for f in ineqs], dtype=float)
    A_eq = np.eye(4)[:3]
    b_eq = np.array([p1, p2, p3])
    bounds = [(None, None)] * 4
    out = []
    for sign in (1.0, -1.0):
        res = linprog(c=[0, 0, 0, sign], A_ub=A, b_ub=b, A_eq=A_eq, b_eq=b_eq, bounds=bounds, method="highs")
        if res.status != 0:
            return None
        out.append(res.x[3])
    return out[0], out[1]
