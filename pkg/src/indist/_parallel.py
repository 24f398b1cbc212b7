"""Chunked, seed-stable parallel map.

Work is split into fixed-size chunks, each with its own generator seeded by
``(seed, chunk_index)``; results therefore do not depend on the worker count.
``INDIST_THREADS`` caps the number of worker threads.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, TypeVar

import numpy as np

T = TypeVar("T")


def max_workers() -> int:
    cpu = os.cpu_count() or 1
    env = os.environ.get("INDIST_THREADS")
    if env:
        try:
            return max(1, min(int(env), cpu))
        except ValueError:
            pass
    return cpu


def chunk_sizes(total: int, chunk: int) -> list[int]:
    full, rest = divmod(total, chunk)
    return [chunk] * full + ([rest] if rest else [])


def chunk_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), int(index)])


def map_chunks(fn: Callable[[np.random.Generator, int], T], total: int, seed: int, chunk: int = 10_000) -> list[T]:
    """Call ``fn(rng, n)`` for each chunk; results are returned in chunk order."""
    sizes = chunk_sizes(total, chunk)
    jobs = [(chunk_rng(seed, i), n) for i, n in enumerate(sizes)]
    workers = min(max_workers(), len(jobs)) or 1
    if workers == 1:
        return [fn(r, n) for r, n in jobs]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(lambda job: fn(*job), jobs))
