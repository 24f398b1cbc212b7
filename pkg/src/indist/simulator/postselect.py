"""Heralding-free post-selection.

The three four-photon inputs produced by the two sources reach pairwise
disjoint sets of output occupations, so an observed four-photon outcome
identifies its input uniquely.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

from ..core import IndistError, ModeOccupation, OutputDistribution
from .circuit import InterferometerSpec, SourceSpec
from .detection import clicks_to_occupation
from .evolve import photons_for_input

FORBIDDEN = "forbidden"


class WrongPhotonNumber(IndistError, ValueError):
    pass


class EmptyPostselection(IndistError, RuntimeError):
    pass


def input_tag(occ: ModeOccupation) -> str:
    return "input_" + "".join(str(n) for n in occ)


def enumerate_reachable_outputs(
    spec: InterferometerSpec, occ: ModeOccupation, source: SourceSpec | None = None
) -> frozenset[ModeOccupation]:
    """Outputs reachable by at least one routing of the (distinguishable) photons.

    Any partition's support is contained in this set, and the fully
    distinguishable partition attains all of it.
    """
    u = spec.transfer_matrix()
    photons = photons_for_input(occ, source)
    routes = [np.nonzero(np.abs(u[:, mode]) > 0)[0] for _, mode in photons]
    out = set()
    for choice in product(*routes):
        o = [0] * spec.mode_count
        for m in choice:
            o[m] += 1
        out.add(tuple(o))
    return frozenset(out)


@lru_cache(maxsize=64)
def _reachability(spec: InterferometerSpec, source: SourceSpec) -> tuple[tuple[str, frozenset], ...]:
    return tuple(
        (input_tag(occ), enumerate_reachable_outputs(spec, occ, source))
        for occ in source.four_photon_inputs(spec.mode_count)
    )


def classify_output(
    occ: ModeOccupation, spec: InterferometerSpec | None = None, source: SourceSpec | None = None
) -> str:
    """Tag of the unique input that can produce ``occ``, or ``"forbidden"``."""
    spec = spec or InterferometerSpec.measured()
    source = source or SourceSpec()
    if sum(occ) != 4:
        raise WrongPhotonNumber(f"expected 4 photons, got {sum(occ)} in {occ}")
    return _classify(tuple(occ), _reachability(spec.without_loss(), source))


def _classify(occ: ModeOccupation, reach_sets) -> str:
    hits = [tag for tag, reach in reach_sets if occ in reach]
    if len(hits) > 1:
        raise AssertionError(f"output {occ} reachable from several inputs: {hits}")
    return hits[0] if hits else FORBIDDEN


@dataclass(frozen=True)
class Postselection:
    distribution: OutputDistribution
    retained: float
    discarded: float


def postselect(
    dist: OutputDistribution,
    spec: InterferometerSpec | None = None,
    source: SourceSpec | None = None,
) -> Postselection:
    """Keep four-photon outcomes tagged with the one-photon-per-input state.

    ``dist`` may be over occupations (length m keys) or click patterns
    (length 2m keys, four-fold coincidences only).  Returns the renormalised
    distribution over occupations and the retained/discarded mass.
    """
    spec = spec or InterferometerSpec.measured()
    source = source or SourceSpec()
    wanted = input_tag(source.main_input(spec.mode_count))
    m = spec.mode_count
    total = dist.total()
    reach_sets = _reachability(spec.without_loss(), source)
    kept: dict[ModeOccupation, float] = {}
    for key, p in dist.items():
        if len(key) == 2 * m:
            if sum(key) != 4:
                continue
            occ = clicks_to_occupation(key)
        elif len(key) == m:
            occ = key
            if sum(occ) != 4:
                continue
        else:
            raise ValueError(f"outcome {key} has neither {m} nor {2 * m} entries")
        if _classify(tuple(occ), reach_sets) == wanted:
            kept[occ] = kept.get(occ, 0.0) + p
    retained = sum(kept.values())
    if retained <= 0:
        raise EmptyPostselection("no retained outcomes after post-selection")
    return Postselection(
        OutputDistribution({k: v / retained for k, v in kept.items()}),
        retained,
        total - retained,
    )
