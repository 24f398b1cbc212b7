"""Loss, pseudo-number-resolving detection and click patterns.

Each output mode j feeds a multimode fibre splitter whose two ports go to
detectors ``j`` and ``j'``; a photon goes to ``j'`` with the splitter's
reflectivity.  A detector hit by n photons clicks with ``1 - (1 - eta)^n``.
Click patterns are tuples ``(c1, c1', c2, c2', ...)`` of 0/1.
"""
from __future__ import annotations

from functools import lru_cache
from math import comb
from typing import Sequence

from ..core import OutputDistribution
from .circuit import DetectionSpec


@lru_cache(maxsize=4096)
def _mode_clicks(n: int, eta_loss: float, refl: float, eta_det: float) -> tuple[tuple[tuple[int, int], float], ...]:
    """Distribution of (click j, click j') for n photons entering mode j."""
    out: dict[tuple[int, int], float] = {}
    for survive in range(n + 1):
        p_s = comb(n, survive) * eta_loss**survive * (1 - eta_loss) ** (n - survive)
        if p_s == 0:
            continue
        for k in range(survive + 1):  # k photons routed to j'
            p_k = comb(survive, k) * refl**k * (1 - refl) ** (survive - k)
            if p_k == 0:
                continue
            pc_main = 1 - (1 - eta_det) ** (survive - k)
            pc_pair = 1 - (1 - eta_det) ** k
            for c_main, pm in ((1, pc_main), (0, 1 - pc_main)):
                for c_pair, pp in ((1, pc_pair), (0, 1 - pc_pair)):
                    w = p_s * p_k * pm * pp
                    if w > 0:
                        out[(c_main, c_pair)] = out.get((c_main, c_pair), 0.0) + w
    return tuple(sorted(out.items()))


def apply_losses_and_detection(
    dist: OutputDistribution,
    det: DetectionSpec,
    loss: Sequence[float] | None = None,
) -> OutputDistribution:
    """Map a distribution over occupations to one over click patterns.

    ``loss`` optionally thins each output mode (per-photon survival).  Losses
    inside the interferometer belong in the evolution step instead.
    """
    out: dict[tuple[int, ...], float] = {}
    for occ, p in dist.items():
        m = len(occ)
        if len(det.mmfbs_reflectivity) != m:
            raise ValueError("need one MMFBS reflectivity per mode")
        etas = loss if loss is not None else (1.0,) * m
        partial: dict[tuple[int, ...], float] = {(): p}
        for j, n in enumerate(occ):
            opts = _mode_clicks(n, float(etas[j]), det.mmfbs_reflectivity[j], det.eta_det)
            partial = {k + c: q * w for k, q in partial.items() for c, w in opts}
        for k, q in partial.items():
            out[k] = out.get(k, 0.0) + q
    return OutputDistribution(out)


def clicks_to_occupation(pattern: Sequence[int]) -> tuple[int, ...]:
    """Inferred photon numbers: clicks on ``j`` plus clicks on ``j'``."""
    return tuple(pattern[2 * j] + pattern[2 * j + 1] for j in range(len(pattern) // 2))
