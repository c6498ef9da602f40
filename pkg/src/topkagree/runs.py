"""Average pairwise difference between model runs and median-run selection.

Each run's corpus is flattened into one matrix: one row per (instance,
method) in canonical order, zero-padded to the corpus maximum sentence
length.  The run whose matrix differs least from the others on average is
the "median" run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from .corpus import Corpus, CorpusError


@dataclass(eq=False)
class RunMatrix:
    """Padded attribution matrix for one run; rows follow the canonical order."""

    run_id: str
    matrix: np.ndarray

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=np.float64)
        if self.matrix.ndim != 2:
            raise ValueError(f"run matrix must be 2-D, got shape {self.matrix.shape}")
        self.matrix.setflags(write=False)


def build_run_matrix(corpus: Corpus, run_id: str) -> RunMatrix:
    """Flatten a corpus into its (instances x methods) by max-length matrix.

    Rows iterate instances in corpus order, methods in sorted-name order
    within each instance, so matrices from different runs over the same
    instances line up row by row.  Padding is exactly 0.
    """
    if not corpus.instances:
        raise CorpusError("cannot build a run matrix from an empty corpus")
    methods = corpus.methods_sorted()
    if not methods:
        raise CorpusError("cannot build a run matrix without attribution methods")
    width = corpus.max_length()
    matrix = np.zeros((len(corpus.instances) * len(methods), width), dtype=np.float64)
    row = 0
    for inst in corpus.instances:
        for name in methods:
            vec = inst.attributions[name]
            matrix[row, : len(vec)] = vec
            row += 1
    return RunMatrix(run_id, matrix)


def average_difference(t1: RunMatrix, t2: RunMatrix) -> float:
    """Mean element-wise absolute difference between two run matrices."""
    if t1.matrix.shape != t2.matrix.shape:
        raise ValueError(
            f"matrix shapes differ: {t1.matrix.shape} vs {t2.matrix.shape}"
        )
    # float64 with numpy's pairwise summation keeps ~1e-3 scale values stable.
    return float(np.mean(np.abs(t1.matrix - t2.matrix)))


def apd_select(runs: Sequence[RunMatrix]) -> tuple[dict[str, float], str]:
    """Score every run by its average difference to the others; pick the argmin.

    Returns the full run_id -> APD map (input order) and the selected
    run_id; APD ties break lexicographically by run_id.  Each unordered
    pair is measured exactly once.
    """
    if len(runs) < 2:
        raise ValueError("apd_select needs at least two runs")
    ids = [r.run_id for r in runs]
    if len(set(ids)) != len(ids):
        raise ValueError("run ids must be unique")
    # fsum of the per-run AD lists keeps APD exact, so the scores do not
    # depend on the order the runs were supplied in.
    per_run: dict[str, list[float]] = {rid: [] for rid in ids}
    for a, b in combinations(runs, 2):
        ad = average_difference(a, b)
        per_run[a.run_id].append(ad)
        per_run[b.run_id].append(ad)
    scores = {rid: math.fsum(per_run[rid]) / (len(runs) - 1) for rid in ids}
    selected = min(ids, key=lambda rid: (scores[rid], rid))
    return scores, selected
