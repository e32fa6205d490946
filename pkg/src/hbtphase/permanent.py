"""Exact matrix permanents."""

from __future__ import annotations

from itertools import permutations

import numpy as np

from .errors import CapacityError

DEFAULT_MAX_SIZE = 8


def permanent_ryser(matrix: np.ndarray, max_size: int = DEFAULT_MAX_SIZE) -> complex:
    """Permanent of a square matrix by Ryser's formula in Gray-code order.

    Each step toggles one column in or out of the subset, so the row sums
    are updated in O(n) and the whole evaluation costs O(2^n n).
    """
    a = np.asarray(matrix, dtype=complex)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError(f"permanent needs a square matrix, got {a.shape}")
    if n == 0:
        return 1.0 + 0j
    if n > max_size:
        raise CapacityError(f"permanent of size {n} exceeds cap {max_size}")

    row_sums = np.zeros(n, dtype=complex)
    in_subset = np.zeros(n, dtype=bool)
    total = 0j
    for step in range(1, 2**n):
        col = (step & -step).bit_length() - 1
        if in_subset[col]:
            row_sums -= a[:, col]
        else:
            row_sums += a[:, col]
        in_subset[col] = not in_subset[col]
        sign = -1.0 if in_subset.sum() % 2 else 1.0
        total += sign * np.prod(row_sums)
    return complex((-1) ** n * total)


def permanent_naive(matrix: np.ndarray) -> complex:
    """Permanent as the explicit sum over all n! permutations."""
    a = np.asarray(matrix, dtype=complex)
    n = a.shape[0]
    rows = np.arange(n)
    return complex(sum(np.prod(a[rows, list(p)]) for p in permutations(range(n))))
