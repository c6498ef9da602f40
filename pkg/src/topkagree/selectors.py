"""Fixed and dynamic top-k token selection over a single score vector.

Dynamic selection marks the strict interior local maxima of the profile that
also exceed the profile mean; when no position qualifies, it falls back to
the single global argmax and flags the fallback.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corpus import KSpec
from .validation import check_positive_int, check_scores

TIE_EARLIEST = "earliest"
TIE_RANDOM = "random"


@dataclass(frozen=True)
class TopKSelection:
    """A set of selected token positions for one (method, instance) pair."""

    indices: frozenset[int]
    k: int
    mode: KSpec
    fallback_used: bool = False

    def __post_init__(self):
        if self.k != len(self.indices):
            raise ValueError(f"k={self.k} does not match |indices|={len(self.indices)}")
        if self.k < 1:
            raise ValueError("a selection must contain at least one position")

    def sorted_indices(self) -> list[int]:
        return sorted(self.indices)


def _tie_rank(n: int, tie_break: str, seed) -> np.ndarray | None:
    """Secondary sort key for equal scores: index order or a seeded shuffle."""
    if tie_break == TIE_EARLIEST:
        return None
    if tie_break == TIE_RANDOM:
        if seed is None:
            raise ValueError("tie_break='random' requires a seed for reproducibility")
        return np.random.default_rng(seed).permutation(n)
    raise ValueError(f"unknown tie_break {tie_break!r}")


def fixed_topk(scores, k: int, tie_break: str = TIE_EARLIEST, seed=None) -> TopKSelection:
    """Select the min(k, n) positions with the highest scores.

    Ties at the selection boundary are resolved by ``tie_break``: lowest
    index first ("earliest") or a seeded random order ("random").  The
    result is deterministic given (scores, k, tie_break, seed).
    """
    arr = check_scores(scores)
    k = check_positive_int(k, "k")
    n = arr.size
    rank = _tie_rank(n, tie_break, seed)
    if rank is None:
        order = np.argsort(-arr, kind="stable")
    else:
        order = np.lexsort((rank, -arr))
    kept = min(k, n)
    indices = frozenset(int(i) for i in order[:kept])
    return TopKSelection(indices, kept, KSpec.fixed(k))


def detect_peaks(scores) -> frozenset[int]:
    """Interior positions strictly above both neighbors and the profile mean.

    Comparisons are strict, so plateaus and boundary positions never
    qualify; vectors shorter than 3 have no interior and yield the empty set.
    """
    arr = check_scores(scores)
    if arr.size < 3:
        return frozenset()
    inner = arr[1:-1]
    ok = (inner > arr[:-2]) & (inner > arr[2:]) & (inner > arr.mean())
    return frozenset((np.flatnonzero(ok) + 1).tolist())


def dynamic_topk(scores) -> TopKSelection:
    """Peak-driven selection with a single-argmax fallback.

    If the profile has qualifying peaks they form the selection and k is
    their count; otherwise the earliest global maximum is selected with
    k=1 and ``fallback_used`` set.
    """
    arr = check_scores(scores)
    peaks = detect_peaks(arr)
    if peaks:
        return TopKSelection(peaks, len(peaks), KSpec.dynamic())
    return TopKSelection(frozenset((int(np.argmax(arr)),)), 1, KSpec.dynamic(), fallback_used=True)
