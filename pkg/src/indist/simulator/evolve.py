"""Output distributions for partially distinguishable photons.

Photons in one partition block are identical and interfere; different
blocks are orthogonal and add incoherently, so the output distribution is
the convolution of the per-block distributions.  A block with input mode
multiset S reaches output pattern T with probability
``|perm(U[T, S])|^2 / (prod t! prod s!)``.
"""
from __future__ import annotations

import math
from itertools import combinations_with_replacement

import numpy as np

from ..core import (
    IndistError,
    LABELS,
    DistinguishabilityPartition,
    MixtureModel,
    ModeOccupation,
    OutputDistribution,
    canonical_partition,
)
from .circuit import InterferometerSpec, SourceSpec
from .permanent import permanents_batched

_ZERO = 1e-28


class DimensionMismatch(IndistError, ValueError):
    pass


def photons_for_input(occ: ModeOccupation, source: SourceSpec | None = None) -> list[tuple[str, int]]:
    """``(label, mode)`` per photon; extra photons in a mode share its label."""
    source = source or SourceSpec()
    out = []
    for mode0, n in enumerate(occ):
        if n == 0:
            continue
        lab = source.label_of_mode(mode0 + 1)
        if lab is None:
            raise DimensionMismatch(f"no photon is injected in mode {mode0 + 1}")
        out.extend([(lab, mode0)] * n)
    return out


def _occupation(modes: tuple[int, ...], size: int) -> tuple[int, ...]:
    occ = [0] * size
    for m in modes:
        occ[m] += 1
    return tuple(occ)


class BlockEvolver:
    """Per-block output distributions for one transfer matrix, cached."""

    def __init__(self, matrix: np.ndarray, kept_modes: int | None = None):
        self.u = np.asarray(matrix)
        self.size = self.u.shape[0]
        self.kept = kept_modes or self.size
        self._cache: dict[tuple[int, ...], dict[tuple[int, ...], float]] = {}

    def block(self, in_modes: tuple[int, ...]) -> dict[tuple[int, ...], float]:
        key = tuple(sorted(in_modes))
        if key not in self._cache:
            self._cache[key] = self._compute(key)
        return self._cache[key]

    def _compute(self, in_modes: tuple[int, ...]) -> dict[tuple[int, ...], float]:
        k = len(in_modes)
        reach = sorted({int(r) for s in in_modes for r in np.nonzero(np.abs(self.u[:, s]) > 0)[0]})
        patterns = list(combinations_with_replacement(reach, k))
        cols = list(in_modes)
        mats = np.stack([self.u[np.ix_(list(t), cols)] for t in patterns])
        perms = permanents_batched(mats)
        s_fact = math.prod(math.factorial(in_modes.count(s)) for s in set(in_modes))
        out: dict[tuple[int, ...], float] = {}
        for t, perm in zip(patterns, perms):
            p = abs(perm) ** 2
            if p <= _ZERO:
                continue
            t_fact = math.prod(math.factorial(t.count(m)) for m in set(t))
            occ = _occupation(t, self.size)[: self.kept]
            out[occ] = out.get(occ, 0.0) + p / (t_fact * s_fact)
        return out


def _convolve(a: dict, b: dict) -> dict:
    out: dict = {}
    for ka, pa in a.items():
        for kb, pb in b.items():
            k = tuple(x + y for x, y in zip(ka, kb))
            out[k] = out.get(k, 0.0) + pa * pb
    return out


def make_evolver(spec: InterferometerSpec, lossy: bool = False) -> BlockEvolver:
    if lossy and not spec.lossless:
        return BlockEvolver(spec.dilated_matrix(), kept_modes=spec.mode_count)
    return BlockEvolver(spec.transfer_matrix())


def _as_partition(p) -> DistinguishabilityPartition:
    return canonical_partition(p) if isinstance(p, str) else p


def _partition_dict(evolver, photons, partition) -> dict:
    blocks: dict[int, list[int]] = {}
    for lab, mode in photons:
        blocks.setdefault(partition.block_of(lab), []).append(mode)
    dist = {tuple([0] * evolver.kept): 1.0}
    for modes in blocks.values():
        dist = _convolve(dist, evolver.block(tuple(modes)))
    return dist


def evolve_partition(
    spec: InterferometerSpec,
    occ: ModeOccupation,
    partition: DistinguishabilityPartition | str,
    source: SourceSpec | None = None,
    lossy: bool = False,
    evolver: BlockEvolver | None = None,
) -> OutputDistribution:
    """Output distribution for one distinguishability partition.

    With ``lossy=True`` the mode losses of ``spec`` act between the layers
    and the result covers all surviving-photon numbers.
    """
    if len(occ) != spec.mode_count:
        raise DimensionMismatch(f"input has {len(occ)} modes, interferometer has {spec.mode_count}")
    partition = _as_partition(partition)
    evolver = evolver or make_evolver(spec, lossy)
    return OutputDistribution(_partition_dict(evolver, photons_for_input(occ, source), partition))


def evolve_mixture(
    spec: InterferometerSpec,
    occ: ModeOccupation,
    model: MixtureModel,
    source: SourceSpec | None = None,
    lossy: bool = False,
    evolver: BlockEvolver | None = None,
) -> OutputDistribution:
    if len(occ) != spec.mode_count:
        raise DimensionMismatch(f"input has {len(occ)} modes, interferometer has {spec.mode_count}")
    evolver = evolver or make_evolver(spec, lossy)
    photons = photons_for_input(occ, source)
    acc: dict = {}
    for w, part in model.terms:
        for k, p in _partition_dict(evolver, photons, part).items():
            acc[k] = acc.get(k, 0.0) + w * p
    return OutputDistribution(acc)


# adjacent-pair pattern (AB, BC, CD identical?) -> configuration label
RHO_SOURCE_TERMS = {
    (True, True, True): "XXXX",
    (False, True, True): "XYYY",
    (True, False, True): "XXYY",
    (True, True, False): "XXXY",
    (True, False, False): "XXYZ",
    (False, False, True): "XYXX",
    (False, True, False): "XYYZ",
    (False, False, False): "XYZW",
}


def build_rho_source(v_ab: float, v_bc: float, v_cd: float) -> MixtureModel:
    """Zero-delay source state: each chain pair independently identical with
    probability equal to its HOM visibility."""
    vs = (v_ab, v_bc, v_cd)
    if any(not (0.0 <= v <= 1.0) for v in vs):
        raise ValueError(f"visibilities must lie in [0, 1]: {vs}")
    weights = {}
    for pattern, name in RHO_SOURCE_TERMS.items():
        w = math.prod(v if same else 1.0 - v for v, same in zip(vs, pattern))
        weights[name] = w
    return MixtureModel.from_weights(weights, LABELS, tol=1e-12)
