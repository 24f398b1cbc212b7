"""Pairwise overlaps from post-selected four-photon statistics."""
from __future__ import annotations

import numpy as np

from ..core import IndistError, OutputDistribution, OverlapGraph
from .circuit import InterferometerSpec, SourceSpec

AUTO_CORRECTION_THRESHOLD = 0.005


class NoConditionedEvents(IndistError, RuntimeError):
    pass


def pair_labels(spec: InterferometerSpec, source: SourceSpec) -> list[tuple[tuple[int, int], str]]:
    """For each layer-2 splitter, the two photons that can meet there."""
    u = spec.transfer_matrix()
    out = []
    for (i, j), _ in spec.layer2:
        rows = [i - 1, j - 1]
        labs = [
            lab
            for lab, mode in sorted(source.injected_modes.items(), key=lambda kv: kv[1])
            if np.any(np.abs(u[rows, mode - 1]) > 0)
        ]
        if len(labs) != 2:
            raise ValueError(f"splitter {(i, j)} is reachable by photons {labs}, expected two")
        out.append(((i, j), "".join(sorted(labs))))
    return out


def coalescence_probability(dist: OutputDistribution, pair: tuple[int, int]) -> tuple[float, float]:
    """(P[both photons in one port | two photons in pair], conditioned mass)."""
    i, j = pair[0] - 1, pair[1] - 1
    cond = same = 0.0
    for occ, p in dist.items():
        if occ[i] + occ[j] == 2:
            cond += p
            if occ[i] == 2 or occ[j] == 2:
                same += p
    if cond <= 0:
        raise NoConditionedEvents(f"no outcomes with two photons in splitter {pair}")
    return same / cond, cond


def overlap_from_bunching(p_b: float, reflectivity: float = 0.5, correct: bool = False) -> float:
    """Invert the two-photon statistics of one splitter.

    Uncorrected: ``r = 2 p_b - 1``.  Corrected for reflectivity R, using
    ``P_coinc = R^2 + (1-R)^2 - 2R(1-R) r``.
    """
    if not correct:
        return 2.0 * p_b - 1.0
    rt = reflectivity * (1.0 - reflectivity)
    if rt == 0:
        raise ValueError("reflectivity 0 or 1 carries no interference information")
    return (reflectivity**2 + (1.0 - reflectivity) ** 2 - (1.0 - p_b)) / (2.0 * rt)


def estimate_overlaps_from_distribution(
    dist: OutputDistribution,
    spec: InterferometerSpec | None = None,
    source: SourceSpec | None = None,
    correct_reflectivity: bool | None = None,
    clamp: bool = False,
) -> OverlapGraph:
    """One edge per layer-2 splitter, in splitter order.

    ``correct_reflectivity=None`` enables the correction only for splitters
    whose R is more than 0.005 away from 0.5.
    """
    spec = spec or InterferometerSpec.ideal()
    source = source or SourceSpec()
    values = []
    for pair, name in pair_labels(spec, source):
        refl = spec.layer2_reflectivity(pair)
        corr = abs(refl - 0.5) > AUTO_CORRECTION_THRESHOLD if correct_reflectivity is None else correct_reflectivity
        p_b, _ = coalescence_probability(dist, pair)
        values.append((name, overlap_from_bunching(p_b, refl, corr)))
    return OverlapGraph.from_edges(values, clamp=clamp)
