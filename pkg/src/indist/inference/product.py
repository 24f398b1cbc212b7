"""Bounds under the pure product-state model.

For pure states with overlaps ``r = cos^2(theta)`` the closing overlap of a
three-vertex chain lies in ``[cos^2(t1 + t2), cos^2(t1 - t2)]``, written in
terms of r as

    upper = (sqrt(r1 r2) + sqrt((1 - r1)(1 - r2)))^2
    lower = (sqrt(r1 r2) - sqrt((1 - r1)(1 - r2)))^2

The upper bound always holds.  The lower bound holds for qubits; in
dimension >= 3 it holds only when ``r1 + r2 > 1`` and is 0 otherwise.

r_AD is bounded by chaining A-B-D over the admissible r_BD range (and A-C-D
over r_AC), maximising/minimising numerically.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np

from ..core import Interval, ModelInconsistent, OverlapGraph, clamp_unit

DimensionHint = Literal["qubit", "general"]

GRID_POINTS = 10_000
GOLDEN_TOL = 1e-10
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def normalize_hint(hint) -> str:
    """Accept ``"qubit"``, ``"general"`` or an integer Hilbert-space dimension."""
    if isinstance(hint, (int, np.integer)) and not isinstance(hint, bool):
        if hint < 2:
            raise ValueError("dimension must be >= 2")
        return "qubit" if hint == 2 else "general"
    if hint not in ("qubit", "general"):
        raise ValueError(f"unknown dimension hint {hint!r}")
    return hint


def _cross_terms(r1: float, r2: float) -> tuple[float, float]:
    r1 = min(max(r1, 0.0), 1.0)
    r2 = min(max(r2, 0.0), 1.0)
    return math.sqrt(r1 * r2), math.sqrt((1.0 - r1) * (1.0 - r2))


def product_upper(r1: float, r2: float) -> float:
    a, b = _cross_terms(r1, r2)
    return min((a + b) ** 2, 1.0)


def product_lower(r1: float, r2: float, dimension_hint="general") -> float:
    hint = normalize_hint(dimension_hint)
    if hint == "general" and r1 + r2 <= 1.0:
        return 0.0
    a, b = _cross_terms(r1, r2)
    return min((a - b) ** 2, 1.0)


def product_chain_bounds(r_xy: float, r_yz: float, dimension_hint="general") -> Interval:
    lo = product_lower(r_xy, r_yz, dimension_hint)
    hi = product_upper(r_xy, r_yz)
    return Interval(clamp_unit(min(lo, hi))[0], clamp_unit(hi)[0])


# ---------------------------------------------------------------------------
# one-dimensional extremization: dense grid, then golden-section refinement
# ---------------------------------------------------------------------------


def _golden_max(f: Callable[[float], float], a: float, b: float, tol: float) -> tuple[float, float]:
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def maximize_on_interval(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    grid: int = GRID_POINTS,
    tol: float = GOLDEN_TOL,
    f_vec: Callable[[np.ndarray], np.ndarray] | None = None,
) -> tuple[float, float]:
    """Return ``(argmax, max)`` of ``f`` on ``[lo, hi]``."""
    if hi - lo <= tol:
        return lo, max(f(lo), f(hi))
    xs = np.linspace(lo, hi, grid)
    ys = f_vec(xs) if f_vec is not None else np.array([f(x) for x in xs])
    k = int(np.argmax(ys))
    best_x, best_y = float(xs[k]), float(ys[k])
    a, b = float(xs[max(k - 1, 0)]), float(xs[min(k + 1, grid - 1)])
    x, y = _golden_max(f, a, b, tol)
    if y > best_y:
        best_x, best_y = x, y
    return best_x, best_y


def _upper_vec(r1, r2):
    r1 = np.clip(r1, 0, 1)
    r2 = np.clip(r2, 0, 1)
    return np.minimum((np.sqrt(r1 * r2) + np.sqrt((1 - r1) * (1 - r2))) ** 2, 1.0)


def _lower_vec(r1, r2, hint):
    r1 = np.clip(r1, 0, 1)
    r2 = np.clip(r2, 0, 1)
    val = np.minimum((np.sqrt(r1 * r2) - np.sqrt((1 - r1) * (1 - r2))) ** 2, 1.0)
    if hint == "general":
        val = np.where(r1 + r2 > 1.0, val, 0.0)
    return val


def chain_through_interval(
    r_known: float,
    middle: Interval,
    dimension_hint="general",
    upper_method: Literal["extremize", "endpoints"] = "extremize",
) -> Interval:
    """Bound x-z given r_xy = ``r_known`` and r_yz somewhere in ``middle``.

    ``upper_method="endpoints"`` only evaluates the upper-bound formula at the
    two ends of ``middle``.  That misses interior maxima and is *not* a sound
    bound; it is kept for comparison with values computed that way.
    """
    hint = normalize_hint(dimension_hint)
    lo_m, hi_m = middle.lo, middle.hi
    if upper_method == "endpoints":
        upper = max(product_upper(r_known, lo_m), product_upper(r_known, hi_m))
    elif upper_method == "extremize":
        _, upper = maximize_on_interval(
            lambda t: product_upper(r_known, t), lo_m, hi_m, f_vec=lambda t: _upper_vec(r_known, t)
        )
    else:
        raise ValueError(f"unknown upper_method {upper_method!r}")
    _, neg_lower = maximize_on_interval(
        lambda t: -product_lower(r_known, t, hint), lo_m, hi_m, f_vec=lambda t: -_lower_vec(r_known, t, hint)
    )
    lower = -neg_lower
    # the general-dimension lower bound is monotone in the middle overlap, so
    # its minimum sits at the lower end; keep the explicit value if smaller
    lower = min(lower, product_lower(r_known, lo_m, hint), product_lower(r_known, hi_m, hint))
    lower, upper = clamp_unit(lower)[0], clamp_unit(upper)[0]
    return Interval(min(lower, upper), upper)


def product_r_AD_bounds(
    g: OverlapGraph,
    dimension_hint="general",
    route: Literal["both", "ABD", "ACD"] = "both",
    upper_method: Literal["extremize", "endpoints"] = "extremize",
) -> Interval | ModelInconsistent:
    r_ab, r_bc, r_cd = g.chain_values()
    hint = normalize_hint(dimension_hint)
    if route in ("both", "ABD"):
        bd = product_chain_bounds(r_bc, r_cd, hint)
        via_b = chain_through_interval(r_ab, bd, hint, upper_method)
        if route == "ABD":
            return via_b
    ac = product_chain_bounds(r_ab, r_bc, hint)
    via_c = chain_through_interval(r_cd, ac, hint, upper_method)
    if route == "ACD":
        return via_c
    return via_b.intersect(via_c)


@dataclass(frozen=True)
class ProductBoundsReport:
    r_AC: Interval
    r_BD: Interval
    r_AD: Interval | ModelInconsistent
    dimension_hint: str = "general"
    sigmas: dict | None = None

    def intervals(self) -> dict[str, Interval | ModelInconsistent]:
        return {"r_AC": self.r_AC, "r_BD": self.r_BD, "r_AD": self.r_AD}

    def endpoints(self) -> list[float]:
        out = []
        for v in self.intervals().values():
            out.extend((v.raw_lo, v.raw_hi) if isinstance(v, ModelInconsistent) else (v.lo, v.hi))
        return out


def product_bounds(g: OverlapGraph, dimension_hint="general", upper_method="extremize") -> ProductBoundsReport:
    r_ab, r_bc, r_cd = g.chain_values()
    hint = normalize_hint(dimension_hint)
    return ProductBoundsReport(
        r_AC=product_chain_bounds(r_ab, r_bc, hint),
        r_BD=product_chain_bounds(r_bc, r_cd, hint),
        r_AD=product_r_AD_bounds(g, hint, upper_method=upper_method),
        dimension_hint=hint,
    )


# ---------------------------------------------------------------------------
# vectorised closed form (angle picture), used for large random sweeps
# ---------------------------------------------------------------------------


def _angle(r):
    return np.arccos(np.sqrt(np.clip(r, 0.0, 1.0)))


def _cos2(x):
    return np.cos(x) ** 2


def _min_cos2(lo, hi):
    """min of cos^2 on [lo, hi] within [0, pi]."""
    inside = (lo <= np.pi / 2) & (hi >= np.pi / 2)
    return np.where(inside, 0.0, np.minimum(_cos2(lo), _cos2(hi)))


def _chain_angles(t1, t2, hint):
    """Angle range of the closing edge of a chain with edge angles t1, t2."""
    lo = np.abs(t1 - t2)
    s = t1 + t2
    hi = np.minimum(s, np.pi - s) if hint == "qubit" else np.minimum(s, np.pi / 2)
    return lo, hi


def _through(t_known, mid_lo, mid_hi, hint):
    # upper: cos^2 of the angular distance from t_known to [mid_lo, mid_hi]
    dist = np.maximum(0.0, np.maximum(mid_lo - t_known, t_known - mid_hi))
    upper = _cos2(dist)
    if hint == "qubit":
        lower = _min_cos2(t_known + mid_lo, t_known + mid_hi)
    else:
        lower = _cos2(np.minimum(t_known + mid_hi, np.pi / 2))
    return lower, upper


def product_bounds_array(r_ab, r_bc, r_cd, dimension_hint="general") -> dict[str, tuple[np.ndarray, np.ndarray]]:
    """Closed-form product bounds for arrays of chain overlaps.

    Returns ``{"r_AC": (lo, hi), "r_BD": (lo, hi), "r_AD": (lo, hi)}``.  Agrees
    with :func:`product_bounds` (numerical extremization) to ~1e-9.
    """
    hint = normalize_hint(dimension_hint)
    a, b, c = _angle(r_ab), _angle(r_bc), _angle(r_cd)
    ac_lo, ac_hi = _chain_angles(a, b, hint)
    bd_lo, bd_hi = _chain_angles(b, c, hint)
    lb1, ub1 = _through(a, bd_lo, bd_hi, hint)
    lb2, ub2 = _through(c, ac_lo, ac_hi, hint)
    ad_lo = np.maximum(lb1, lb2)
    ad_hi = np.minimum(ub1, ub2)
    # cos^2 evaluated at the angle ends; for r in [0,1] these reproduce the
    # sqrt formulas including the r1 + r2 <= 1 switch in general dimension
    return {
        "r_AC": (_cos2(ac_hi), _cos2(ac_lo)),
        "r_BD": (_cos2(bd_hi), _cos2(bd_lo)),
        "r_AD": (np.minimum(ad_lo, ad_hi), ad_hi),
    }


def product_r_AD_routes_array(r_ab, r_bc, r_cd, dimension_hint="general") -> dict[str, tuple[np.ndarray, np.ndarray]]:
    """r_AD intervals via A-B-D and via A-C-D separately (closed form)."""
    hint = normalize_hint(dimension_hint)
    a, b, c = _angle(r_ab), _angle(r_bc), _angle(r_cd)
    lb1, ub1 = _through(a, *_chain_angles(b, c, hint), hint)
    lb2, ub2 = _through(c, *_chain_angles(a, b, hint), hint)
    return {"ABD": (lb1, ub1), "ACD": (lb2, ub2)}
