"""Seeded synthetic corpora for demos, determinism checks, and benchmarks.

Instances share a hidden set of salient positions per sentence; each
synthetic method sees them through its own noise and bump heights, and the
annotators highlight them imperfectly.  Everything is driven by one
numpy Generator, so a given (seed, shape) always yields the same corpus.
"""

from __future__ import annotations

import numpy as np

from .corpus import Corpus, make_corpus, make_instance

_WORDS = (
    "the", "a", "man", "woman", "dog", "cat", "child", "group", "street",
    "park", "ball", "red", "blue", "old", "young", "runs", "sits", "holds",
    "wears", "plays", "reads", "walks", "near", "with", "on", "in", "and",
    "is", "are", "two", "some", "happy", "tired", "small", "large", "bike",
    "car", "house", "tree", "water",
)

_LABELS = ("label_0", "label_1", "label_2")


def synthetic_corpus(
    n_instances: int = 1000,
    n_methods: int = 6,
    seed: int = 0,
    min_tokens: int = 5,
    max_tokens: int = 40,
    annotators: int = 3,
    annotated_fraction: float = 1.0,
) -> Corpus:
    """Generate a corpus of random attribution profiles with shared structure."""
    if n_instances < 1 or n_methods < 1:
        raise ValueError("need at least one instance and one method")
    if not 2 <= min_tokens <= max_tokens:
        raise ValueError("token range must satisfy 2 <= min_tokens <= max_tokens")
    rng = np.random.default_rng(seed)
    methods = [f"method_{i}" for i in range(n_methods)]
    instances = []
    for idx in range(n_instances):
        n = int(rng.integers(min_tokens, max_tokens + 1))
        tokens = [str(rng.choice(_WORDS)) for _ in range(n - 1)] + ["."]
        if n >= 8 and rng.random() < 0.4:
            tokens[int(rng.integers(2, n - 2))] = ","
        content = [i for i, t in enumerate(tokens) if t not in (",", ".")]

        n_salient = max(1, min(len(content), 1 + int(rng.poisson(2.0))))
        salient = sorted(rng.choice(content, size=n_salient, replace=False).tolist())

        attributions = {}
        for name in methods:
            scores = rng.normal(0.0, 0.12, size=n)
            for s in salient:
                if rng.random() < 0.85:
                    scores[s] += rng.uniform(0.4, 1.2)
            attributions[name] = [float(v) for v in scores]

        human = None
        if annotators > 0 and rng.random() < annotated_fraction:
            rows = []
            for _ in range(annotators):
                row = [0] * n
                for s in salient:
                    if rng.random() < 0.75:
                        row[s] = 1
                for i in content:
                    if rng.random() < 0.03:
                        row[i] = 1
                rows.append(row)
            human = rows

        gold = str(rng.choice(_LABELS))
        predicted = gold if rng.random() < 0.85 else str(rng.choice(_LABELS))
        instances.append(
            make_instance(
                instance_id=f"syn-{idx:05d}",
                tokens=tokens,
                attributions=attributions,
                human_selections=human,
                gold_label=gold,
                predicted_label=predicted,
            )
        )
    return make_corpus(instances)
