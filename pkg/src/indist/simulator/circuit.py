"""Interferometer, source and detector descriptions.

Modes are numbered 1..m as on the optical table.  Matrices act on column
vectors of input amplitudes: ``U[out, in]`` with 0-based indices.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from types import MappingProxyType
from typing import Mapping

import numpy as np

from ..core import LABELS, ModeOccupation

Layer = tuple[tuple[tuple[int, int], float], ...]

# measured values for the four-photon experiment
LAYER1: Layer = (((2, 3), 0.5), ((4, 5), 0.5))
MEASURED_LAYER2: Layer = (((1, 2), 0.515), ((3, 4), 0.507), ((5, 6), 0.498))
IDEAL_LAYER2: Layer = (((1, 2), 0.5), ((3, 4), 0.5), ((5, 6), 0.5))
# source coupling x delay-line coupling x fibre-BS insertion, extra stage on mode 5
_COMMON_T = 0.4 * 0.7 * 0.7
MEASURED_MODE_LOSS = (_COMMON_T, _COMMON_T, _COMMON_T, _COMMON_T, _COMMON_T * 0.625, _COMMON_T)
MEASURED_MMFBS = (0.65, 0.77, 0.72, 0.77, 0.47, 0.15)
DEFAULT_INJECTION = MappingProxyType({"A": 1, "B": 2, "C": 5, "D": 6})


def beam_splitter(reflectivity: float) -> np.ndarray:
    """Real 2x2 convention ``[[sqrt R, sqrt(1-R)], [sqrt(1-R), -sqrt R]]``."""
    if not (0.0 <= reflectivity <= 1.0):
        raise ValueError(f"reflectivity {reflectivity} outside [0, 1]")
    r, t = math.sqrt(reflectivity), math.sqrt(1.0 - reflectivity)
    return np.array([[r, t], [t, -r]])


def layer_matrix(layer: Layer, mode_count: int) -> np.ndarray:
    u = np.eye(mode_count)
    used: set[int] = set()
    for (i, j), refl in layer:
        if i == j or {i, j} & used:
            raise ValueError(f"mode pairs within a layer must be disjoint: {layer}")
        if not (1 <= i <= mode_count and 1 <= j <= mode_count):
            raise ValueError(f"mode pair {(i, j)} outside 1..{mode_count}")
        used |= {i, j}
        bs = beam_splitter(refl)
        idx = [i - 1, j - 1]
        u[np.ix_(idx, idx)] = bs
    return u


@dataclass(frozen=True)
class InterferometerSpec:
    mode_count: int = 6
    layer1: Layer = LAYER1
    layer2: Layer = MEASURED_LAYER2
    mode_loss: tuple[float, ...] = (1.0,) * 6

    def __post_init__(self):
        object.__setattr__(self, "layer1", tuple((tuple(p), float(r)) for p, r in self.layer1))
        object.__setattr__(self, "layer2", tuple((tuple(p), float(r)) for p, r in self.layer2))
        object.__setattr__(self, "mode_loss", tuple(float(x) for x in self.mode_loss))
        if len(self.mode_loss) != self.mode_count:
            raise ValueError("mode_loss needs one transmission per mode")
        if any(not (0.0 <= x <= 1.0) for x in self.mode_loss):
            raise ValueError("mode transmissions must lie in [0, 1]")
        # builds and validates both layers
        layer_matrix(self.layer1, self.mode_count)
        layer_matrix(self.layer2, self.mode_count)

    @classmethod
    def measured(cls, lossy: bool = False) -> "InterferometerSpec":
        return cls(6, LAYER1, MEASURED_LAYER2, MEASURED_MODE_LOSS if lossy else (1.0,) * 6)

    @classmethod
    def ideal(cls) -> "InterferometerSpec":
        return cls(6, LAYER1, IDEAL_LAYER2, (1.0,) * 6)

    @property
    def lossless(self) -> bool:
        return all(x == 1.0 for x in self.mode_loss)

    def without_loss(self) -> "InterferometerSpec":
        return replace(self, mode_loss=(1.0,) * self.mode_count)

    def transfer_matrix(self) -> np.ndarray:
        """Lossless mode transformation, layer 1 then layer 2."""
        return layer_matrix(self.layer2, self.mode_count) @ layer_matrix(self.layer1, self.mode_count)

    def dilated_matrix(self) -> np.ndarray:
        """2m x 2m unitary: losses between the layers as beam splitters onto
        ancilla modes m..2m-1 (traced out afterwards)."""
        m = self.mode_count
        big = np.eye(2 * m)
        l1 = big.copy()
        l1[:m, :m] = layer_matrix(self.layer1, m)
        l2 = big.copy()
        l2[:m, :m] = layer_matrix(self.layer2, m)
        loss = big.copy()
        for i, eta in enumerate(self.mode_loss):
            loss[np.ix_([i, m + i], [i, m + i])] = beam_splitter(eta)
        return l2 @ loss @ l1

    def layer2_reflectivity(self, pair: tuple[int, int]) -> float:
        for p, refl in self.layer2:
            if set(p) == set(pair):
                return refl
        raise KeyError(pair)


def _tanh_cosh(g: float) -> tuple[float, float]:
    return math.tanh(g), math.cosh(g)


@dataclass(frozen=True)
class SourceSpec:
    """Two pair sources: (A, B) from the first, (C, D) from the second."""

    g: float = 0.1
    injected_modes: Mapping[str, int] = field(default_factory=lambda: DEFAULT_INJECTION)
    include_six_photon_terms: bool = True

    def __post_init__(self):
        if not self.g > 0:
            raise ValueError("squeezing parameter g must be positive")
        inj = dict(self.injected_modes)
        if sorted(inj) != sorted(LABELS) or len(set(inj.values())) != len(inj):
            raise ValueError(f"injected_modes must map A..D to distinct modes: {inj}")
        object.__setattr__(self, "injected_modes", MappingProxyType(inj))

    def __hash__(self):
        return hash((self.g, tuple(sorted(self.injected_modes.items())), self.include_six_photon_terms))

    def __eq__(self, other):
        if not isinstance(other, SourceSpec):
            return NotImplemented
        return (self.g, dict(self.injected_modes), self.include_six_photon_terms) == (
            other.g,
            dict(other.injected_modes),
            other.include_six_photon_terms,
        )

    def label_of_mode(self, mode: int) -> str | None:
        for lab, m in self.injected_modes.items():
            if m == mode:
                return lab
        return None

    def occupation(self, counts: Mapping[str, int], mode_count: int = 6) -> ModeOccupation:
        occ = [0] * mode_count
        for lab, n in counts.items():
            occ[self.injected_modes[lab] - 1] += n
        return tuple(occ)

    def main_input(self, mode_count: int = 6) -> ModeOccupation:
        return self.occupation({lab: 1 for lab in LABELS}, mode_count)

    def four_photon_inputs(self, mode_count: int = 6) -> list[ModeOccupation]:
        """The three two-pair inputs: one pair per source, or both from one."""
        return [
            self.main_input(mode_count),
            self.occupation({"A": 2, "B": 2}, mode_count),
            self.occupation({"C": 2, "D": 2}, mode_count),
        ]

    @property
    def p_four(self) -> float:
        t, c = _tanh_cosh(self.g)
        return t**4 / c**4

    @property
    def p_six(self) -> float:
        t, c = _tanh_cosh(self.g)
        return t**6 / c**4

    def emission_terms(self, mode_count: int = 6) -> list[tuple[float, ModeOccupation]]:
        terms = [(self.p_four, occ) for occ in self.four_photon_inputs(mode_count)]
        if self.include_six_photon_terms:
            terms.append((self.p_six, self.occupation({"A": 2, "B": 2, "C": 1, "D": 1}, mode_count)))
            terms.append((self.p_six, self.occupation({"A": 1, "B": 1, "C": 2, "D": 2}, mode_count)))
        return terms


def swap_to_CDAB(source: SourceSpec) -> SourceSpec:
    """Exchange photons A<->C and B<->D at the input; the measured chain becomes C-D-A-B."""
    inj = source.injected_modes
    swapped = {"A": inj["C"], "B": inj["D"], "C": inj["A"], "D": inj["B"]}
    return replace(source, injected_modes=swapped)


@dataclass(frozen=True)
class DetectionSpec:
    mmfbs_reflectivity: tuple[float, ...] = MEASURED_MMFBS
    eta_det: float = 0.6

    def __post_init__(self):
        object.__setattr__(self, "mmfbs_reflectivity", tuple(float(x) for x in self.mmfbs_reflectivity))
        if any(not (0.0 <= x <= 1.0) for x in self.mmfbs_reflectivity):
            raise ValueError("MMFBS reflectivities must lie in [0, 1]")
        if not (0.0 <= self.eta_det <= 1.0):
            raise ValueError("detector efficiency must lie in [0, 1]")

    @classmethod
    def ideal(cls, mode_count: int = 6) -> "DetectionSpec":
        return cls((0.5,) * mode_count, 1.0)

    def click_probability(self, n: int) -> float:
        return 1.0 - (1.0 - self.eta_det) ** n
