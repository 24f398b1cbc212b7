"""Matrix permanents by Ryser's inclusion-exclusion formula.

    perm(A) = (-1)^n  sum_{S subset of cols} (-1)^|S|  prod_i sum_{j in S} a_ij

:func:`permanent` walks the subsets in Gray-code order so each step updates
the row sums with one column; :func:`permanents_batched` evaluates many
equally sized matrices at once with a precomputed subset table.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np


def permanent(a) -> complex:
    a = np.asarray(a)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError(f"permanent needs a square matrix, got shape {a.shape}")
    if n == 0:
        return 1.0
    if n == 1:
        return a[0, 0]
    if n == 2:
        return a[0, 0] * a[1, 1] + a[0, 1] * a[1, 0]
    cols = [a[:, j] for j in range(n)]
    row_sums = np.zeros(n, dtype=np.result_type(a.dtype, float))
    in_set = [False] * n
    total = 0.0
    sign = -1.0  # (-1)^|S| for the current subset
    for k in range(1, 1 << n):
        # the bit that flips between Gray codes k-1 and k
        j = (k & -k).bit_length() - 1
        if in_set[j]:
            row_sums -= cols[j]
        else:
            row_sums += cols[j]
        in_set[j] = not in_set[j]
        total += sign * np.prod(row_sums)
        sign = -sign
    return (-1) ** n * total


@lru_cache(maxsize=16)
def _subset_table(n: int) -> tuple[np.ndarray, np.ndarray]:
    masks = np.arange(1, 1 << n)
    table = ((masks[:, None] >> np.arange(n)) & 1).astype(float)  # (2^n - 1, n)
    signs = (-1.0) ** table.sum(axis=1)
    return table, signs


def permanents_batched(mats: np.ndarray) -> np.ndarray:
    """Permanents of a stack of matrices, shape (N, n, n) -> (N,)."""
    mats = np.asarray(mats)
    N, n, m = mats.shape
    if n != m:
        raise ValueError("matrices must be square")
    if n == 0:
        return np.ones(N, dtype=mats.dtype)
    table, signs = _subset_table(n)
    sums = mats @ table.T  # (N, n, 2^n - 1): row sums over each column subset
    return (-1) ** n * (np.prod(sums, axis=1) @ signs)
