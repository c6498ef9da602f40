"""Input validation helpers shared by the selector and metric layers."""

from __future__ import annotations

from typing import Iterable

import numpy as np


def check_scores(scores, name: str = "scores") -> np.ndarray:
    """Coerce ``scores`` to a 1-D float64 array and reject empty or non-finite input."""
    arr = np.asarray(scores, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError(f"{name} must be non-empty")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must contain only finite values")
    return arr


def check_positive_int(value, name: str = "k") -> int:
    """Reject anything that is not an integer >= 1."""
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise ValueError(f"{name} must be a positive integer, got {value!r}")
    if value < 1:
        raise ValueError(f"{name} must be >= 1, got {value}")
    return int(value)


def check_index_set(indices: Iterable[int], n: int, name: str = "selection") -> frozenset[int]:
    """Validate a set of token positions against a sentence of length ``n``."""
    out = set()
    for i in indices:
        if isinstance(i, bool) or not isinstance(i, (int, np.integer)):
            raise ValueError(f"{name} contains a non-integer index: {i!r}")
        if not 0 <= i < n:
            raise ValueError(f"{name} index {i} out of range for length {n}")
        out.add(int(i))
    return frozenset(out)
