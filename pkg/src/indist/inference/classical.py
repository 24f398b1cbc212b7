"""Bounds under the classical mixture model.

Every pair of photons is either identical or orthogonal, so overlaps are
probabilities of logical propositions ("A = B", ...) and the bounds follow
from Boolean-algebra inequalities on those probabilities.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..core import Interval, ModelInconsistent, OverlapGraph


def _lo_hi(x: Interval | ModelInconsistent) -> tuple[float, float]:
    if isinstance(x, ModelInconsistent):
        return x.raw_lo, x.raw_hi
    return x.lo, x.hi


def c1_bounds(g: OverlapGraph) -> Interval | ModelInconsistent:
    """Weight of the fully indistinguishable component from the P4 overlaps."""
    r_ab, r_bc, r_cd = g.chain_values()
    return Interval.clamped(r_ab + r_bc + r_cd - 2.0, min(r_ab, r_bc, r_cd))


def chain_bounds(r_xy: float, r_yz: float) -> Interval | ModelInconsistent:
    """Range of the closing overlap r_xz of a three-vertex chain x-y-z."""
    return Interval.clamped(r_xy + r_yz - 1.0, 1.0 - abs(r_xy - r_yz))


def _distance_to_interval(x: float, lo: float, hi: float) -> float:
    if x < lo:
        return lo - x
    if x > hi:
        return x - hi
    return 0.0


def classical_r_AD_bounds(g: OverlapGraph) -> Interval | ModelInconsistent:
    """Range of r_AD, chaining A-B-D through the admissible range of r_BD.

    ``1 - |r_AB - r_BD|`` is maximised at the point of the r_BD interval
    nearest to r_AB, so the upper bound is one minus that distance.
    """
    r_ab, r_bc, r_cd = g.chain_values()
    bd = chain_bounds(r_bc, r_cd)
    if isinstance(bd, ModelInconsistent):
        return bd
    lower = r_ab + r_bc + r_cd - 2.0
    upper = 1.0 - _distance_to_interval(r_ab, bd.lo, bd.hi)
    return Interval.clamped(lower, upper)


def three_term_r_AD_upper(r_ab: float, r_bc: float, r_cd: float) -> float:
    """Closed-form r_AD upper bound, ``2 + min(...)`` capped at 1.

    The middle term uses r_BC; this agrees with the nearest-point
    extremization in :func:`classical_r_AD_bounds` for all inputs in [0, 1].
    """
    return min(1.0, 2.0 + min(r_ab - r_bc - r_cd, r_bc - r_ab - r_cd, r_cd - r_ab - r_bc))


@dataclass(frozen=True)
class ClassicalBoundsReport:
    c1: Interval | ModelInconsistent
    r_AC: Interval | ModelInconsistent
    r_BD: Interval | ModelInconsistent
    r_AD: Interval | ModelInconsistent
    # endpoint standard deviations, filled in by Monte-Carlo propagation
    sigmas: dict | None = None

    @property
    def consistent(self) -> bool:
        return all(isinstance(x, Interval) for x in (self.c1, self.r_AC, self.r_BD, self.r_AD))

    def intervals(self) -> dict[str, Interval | ModelInconsistent]:
        return {"c1": self.c1, "r_AC": self.r_AC, "r_BD": self.r_BD, "r_AD": self.r_AD}

    def endpoints(self) -> list[float]:
        out = []
        for v in self.intervals().values():
            out.extend(_lo_hi(v))
        return out


def classical_bounds(g: OverlapGraph) -> ClassicalBoundsReport:
    r_ab, r_bc, r_cd = g.chain_values()
    return ClassicalBoundsReport(
        c1=c1_bounds(g),
        r_AC=chain_bounds(r_ab, r_bc),
        r_BD=chain_bounds(r_bc, r_cd),
        r_AD=classical_r_AD_bounds(g),
    )
