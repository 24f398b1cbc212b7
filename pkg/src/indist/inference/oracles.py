"""Brute-force soundness checks for the bound formulas.

Classical: random mixtures over all partitions of {A, B, C, D}; every
mixture's c1 and unmeasured overlaps must lie inside the intervals computed
from its measured overlaps.  Product: Haar-random pure 4-tuples.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .._parallel import map_chunks
from ..core import LABELS, Interval, OverlapGraph, all_partitions
from .classical import classical_bounds
from .product import normalize_hint, product_bounds, product_bounds_array

PAIRS = tuple(u + v for u, v in combinations(LABELS, 2))  # AB AC AD BC BD CD
_TOL = 1e-9


def partition_table():
    """Rows: partitions; columns: c1 indicator then pair-identity indicators."""
    parts = all_partitions(LABELS)
    M = np.array(
        [[float(p.is_fully_indistinguishable)] + [float(p.identical(q[0], q[1])) for q in PAIRS] for p in parts]
    )
    return parts, M


@dataclass
class OracleReport:
    trials: int
    tested: int
    violations: int
    max_excess: float = 0.0
    feasible: bool = True
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.violations == 0


def _excess(iv, x: float) -> float:
    if not isinstance(iv, Interval):
        return float("inf")
    return max(iv.lo - x, x - iv.hi, 0.0)


def _check_mixture_rows(rows: np.ndarray, report_bounds) -> tuple[int, float]:
    """rows: (n, 7) with c1, AB, AC, AD, BC, BD, CD."""
    bad, worst = 0, 0.0
    for row in rows:
        c1, ab, ac, ad, bc, bd, cd = row
        rep = report_bounds if report_bounds is not None else classical_bounds(OverlapGraph.chain(ab, bc, cd))
        ex = max(
            _excess(rep.c1, c1), _excess(rep.r_AC, ac), _excess(rep.r_BD, bd), _excess(rep.r_AD, ad)
        )
        worst = max(worst, ex)
        bad += int(ex > _TOL)
    return bad, worst


def feasible_mixture_vertices(g: OverlapGraph, n_objectives: int = 64, seed: int = 0):
    """Vertices of {mixture weights : induced chain overlaps == g}, via random LPs."""
    from scipy.optimize import linprog

    _, M = partition_table()
    chain_cols = [1 + PAIRS.index(p) for p in ("AB", "BC", "CD")]
    A_eq = np.vstack([M[:, chain_cols].T, np.ones(M.shape[0])])
    b_eq = np.array(list(g.chain_values()) + [1.0])
    rng = np.random.default_rng([seed, 7])
    verts = []
    for _ in range(n_objectives):
        res = linprog(rng.normal(size=M.shape[0]), A_eq=A_eq, b_eq=b_eq, bounds=(0, None), method="highs")
        if res.status != 0:
            return None
        w = np.clip(res.x, 0, None)
        verts.append(w / w.sum())
    return np.unique(np.round(np.array(verts), 12), axis=0)


def classical_oracle_check(g: OverlapGraph | None = None, trials: int = 100_000, seed: int = 0) -> OracleReport:
    """Sample random mixtures and count bound violations.

    Without ``g``, weights are Dirichlet over the 15 partitions (half dense,
    half sparse to reach the faces) and each mixture is checked against the
    bounds from its own overlaps.  With ``g``, mixtures are random convex
    combinations of the vertices of the set of mixtures reproducing ``g``
    exactly, all checked against the bounds computed from ``g``.
    """
    parts, M = partition_table()
    if g is None:
        def work(rng, n):
            alpha = np.where(rng.random(n) < 0.5, 1.0, 0.1)[:, None] * np.ones(len(parts))
            w = np.array([rng.dirichlet(a) for a in alpha])
            return _check_mixture_rows(w @ M, None)

        results = map_chunks(work, trials, seed, chunk=5_000)
        bad = sum(r[0] for r in results)
        worst = max((r[1] for r in results), default=0.0)
        return OracleReport(trials, trials, int(bad), float(worst))

    verts = feasible_mixture_vertices(g, seed=seed)
    if verts is None:
        return OracleReport(trials, 0, 0, feasible=False)
    rep = classical_bounds(g)
    rows_v = verts @ M

    def work(rng, n):
        lam = rng.dirichlet(np.full(len(verts), 0.5), size=n)
        rows = lam @ rows_v
        c1, ab, ac, ad, bc, bd, cd = rows.T
        ex = np.zeros(n)
        for iv, x in ((rep.c1, c1), (rep.r_AC, ac), (rep.r_BD, bd), (rep.r_AD, ad)):
            lo, hi = (iv.lo, iv.hi) if isinstance(iv, Interval) else (np.inf, -np.inf)
            ex = np.maximum(ex, np.maximum(lo - x, x - hi))
        match = np.max(np.abs(rows[:, [1, 4, 6]] - np.array(g.chain_values())), axis=1)
        return int(np.sum(ex > _TOL)), float(max(ex.max(initial=0.0), 0.0)), float(match.max(initial=0.0)), c1

    results = map_chunks(work, trials, seed, chunk=20_000)
    # the vertices themselves realise the extreme values
    v_bad, v_worst = _check_mixture_rows(rows_v, rep)
    c1_all = np.concatenate([r[3] for r in results] + [rows_v[:, 0]])
    return OracleReport(
        trials,
        trials + len(verts),
        sum(r[0] for r in results) + v_bad,
        max([r[1] for r in results] + [v_worst]),
        details={
            "vertices": len(verts),
            "max_marginal_mismatch": max(r[2] for r in results),
            "c1_range": (float(c1_all.min()), float(c1_all.max())),
        },
    )


# ---------------------------------------------------------------------------
# product states
# ---------------------------------------------------------------------------


def haar_states(rng: np.random.Generator, n: int, dimension: int, count: int = 4) -> np.ndarray:
    z = rng.normal(size=(n, count, dimension)) + 1j * rng.normal(size=(n, count, dimension))
    return z / np.linalg.norm(z, axis=2, keepdims=True)


def pairwise_overlaps(states: np.ndarray) -> dict[str, np.ndarray]:
    """|<i|j>|^2 for every label pair; ``states`` has shape (n, 4, d)."""
    out = {}
    for (i, u), (j, v) in combinations(enumerate(LABELS), 2):
        out[u + v] = np.abs(np.einsum("nd,nd->n", states[:, i].conj(), states[:, j])) ** 2
    return out


def check_product_states(states: np.ndarray, dimension_hint) -> tuple[int, float]:
    hint = normalize_hint(dimension_hint)
    r = pairwise_overlaps(states)
    bounds = product_bounds_array(r["AB"], r["BC"], r["CD"], hint)
    ex = np.zeros(states.shape[0])
    for name, key in (("r_AC", "AC"), ("r_BD", "BD"), ("r_AD", "AD")):
        lo, hi = bounds[name]
        ex = np.maximum(ex, np.maximum(lo - r[key], r[key] - hi))
    return int(np.sum(ex > _TOL)), float(max(ex.max(initial=0.0), 0.0))


def product_oracle_check(dimension: int, trials: int = 100_000, seed: int = 0, scalar_checks: int = 200) -> OracleReport:
    """Haar-random sweep; also spot-checks the scalar extremization route."""
    if dimension < 2:
        raise ValueError("dimension must be >= 2")
    hint = normalize_hint(dimension)

    def work(rng, n):
        return check_product_states(haar_states(rng, n, dimension), hint)

    results = map_chunks(work, trials, seed, chunk=20_000)
    # scalar route on a few states: the reported intervals must contain them too
    rng = np.random.default_rng([seed, 99])
    sample = haar_states(rng, scalar_checks, dimension)
    r = pairwise_overlaps(sample)
    scalar_bad = 0
    for k in range(scalar_checks):
        rep = product_bounds(OverlapGraph.chain(r["AB"][k], r["BC"][k], r["CD"][k]), hint)
        for name, key in (("r_AC", "AC"), ("r_BD", "BD"), ("r_AD", "AD")):
            scalar_bad += int(_excess(rep.intervals()[name], r[key][k]) > _TOL)
    return OracleReport(
        trials,
        trials + scalar_checks,
        sum(x[0] for x in results) + scalar_bad,
        max(x[1] for x in results),
        details={"dimension": dimension, "hint": hint, "scalar_violations": scalar_bad},
    )
