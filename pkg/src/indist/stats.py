"""Count statistics: normalisation, Poisson Monte-Carlo propagation, TVD."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np

from ._parallel import map_chunks
from .core import IndistError, ModeOccupation, OutputDistribution

DEFAULT_REPLICATES = 1000
MIN_REPLICATES = 100


class EmptyCounts(IndistError, ValueError):
    pass


@dataclass(frozen=True)
class CountsRecord:
    entries: Mapping[ModeOccupation, int]

    def __post_init__(self):
        clean = {}
        for k, v in self.entries.items():
            if int(v) != v or v < 0:
                raise ValueError(f"count for {k} must be a non-negative integer, got {v}")
            clean[tuple(int(x) for x in k)] = int(v)
        object.__setattr__(self, "entries", dict(sorted(clean.items())))

    @property
    def total(self) -> int:
        return sum(self.entries.values())

    def keys(self) -> list[ModeOccupation]:
        return list(self.entries)

    def counts(self) -> np.ndarray:
        return np.array(list(self.entries.values()), dtype=float)

    def scaled(self, factor: int) -> "CountsRecord":
        return CountsRecord({k: v * factor for k, v in self.entries.items()})


@dataclass(frozen=True)
class UncertainValue:
    mean: float
    sigma: float = 0.0

    def __post_init__(self):
        if not self.sigma >= 0:
            raise ValueError("sigma must be non-negative")

    def __format__(self, spec: str) -> str:
        return f"{format(self.mean, spec or '.4f')} ± {format(self.sigma, spec or '.4f')}"

    def __str__(self) -> str:
        return format(self, "")


def normalize(c: CountsRecord) -> OutputDistribution:
    n = c.total
    if n < 1:
        raise EmptyCounts("no counts to normalise")
    return OutputDistribution({k: v / n for k, v in c.entries.items()})


def tvd(p: Mapping, q: Mapping) -> float:
    """Half the L1 distance over the union of supports."""
    keys = set(p) | set(q)
    return 0.5 * sum(abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in keys)


def _summarize(samples: np.ndarray) -> UncertainValue | list[UncertainValue]:
    mean = samples.mean(axis=0)
    sd = samples.std(axis=0, ddof=1) if len(samples) > 1 else np.zeros_like(mean)
    # clean up round-off for constant outputs
    sd = np.where(np.ptp(samples, axis=0) == 0, 0.0, sd)
    if samples.ndim == 1:
        return UncertainValue(float(mean), float(sd))
    return [UncertainValue(float(m), float(s)) for m, s in zip(mean, sd)]


def propagate(
    counts: CountsRecord,
    f: Callable[[OutputDistribution], float | Sequence[float]],
    replicates: int = DEFAULT_REPLICATES,
    seed: int = 0,
) -> UncertainValue | list[UncertainValue]:
    """Mean and spread of ``f`` over Poisson-resampled copies of ``counts``.

    Every count is redrawn as Poisson(observed) and the result renormalised,
    so the total N fluctuates as well.  Deterministic for fixed ``seed``.
    """
    if replicates < MIN_REPLICATES:
        raise ValueError(f"need at least {MIN_REPLICATES} replicates")
    if counts.total < 1:
        raise EmptyCounts("no counts to propagate")
    keys = counts.keys()
    lam = counts.counts()

    def run(rng: np.random.Generator, n: int) -> list:
        out = []
        draws = rng.poisson(lam, size=(n, len(lam)))
        for row in draws:
            tot = row.sum()
            if tot == 0:
                continue
            dist = OutputDistribution({k: c / tot for k, c in zip(keys, row) if c})
            out.append(f(dist))
        return out

    results = [r for part in map_chunks(run, replicates, seed, chunk=100) for r in part]
    return _summarize(np.array(results, dtype=float))


def propagate_gaussian(
    values: Sequence[float],
    sigmas: Sequence[float],
    f: Callable[..., float | Sequence[float]],
    replicates: int = DEFAULT_REPLICATES,
    seed: int = 0,
    clip: tuple[float, float] | None = (0.0, 1.0),
) -> UncertainValue | list[UncertainValue]:
    """Propagate independent normal errors on ``values`` through ``f(*values)``."""
    if replicates < MIN_REPLICATES:
        raise ValueError(f"need at least {MIN_REPLICATES} replicates")
    mu = np.asarray(values, dtype=float)
    sd = np.asarray(sigmas, dtype=float)
    if mu.shape != sd.shape or np.any(sd < 0):
        raise ValueError("need one non-negative sigma per value")

    def run(rng: np.random.Generator, n: int) -> list:
        x = rng.normal(mu, sd, size=(n, len(mu)))
        if clip is not None:
            x = np.clip(x, *clip)
        return [f(*row) for row in x]

    results = [r for part in map_chunks(run, replicates, seed, chunk=100) for r in part]
    return _summarize(np.array(results, dtype=float))


def sample_counts(dist: Mapping, n_events: int, seed: int = 0) -> CountsRecord:
    """Multinomial sample of ``n_events`` outcomes from ``dist``."""
    if n_events < 0:
        raise ValueError("n_events must be non-negative")
    keys = sorted(dist)
    p = np.array([dist[k] for k in keys], dtype=float)
    s = p.sum()
    if s <= 0:
        raise EmptyCounts("distribution has no mass")
    draws = np.random.default_rng(seed).multinomial(n_events, p / s)
    return CountsRecord({k: int(c) for k, c in zip(keys, draws) if c})


def binomial_sigma(p: float, n: float) -> float:
    return math.sqrt(p * (1 - p) / n) if n > 0 else math.inf
