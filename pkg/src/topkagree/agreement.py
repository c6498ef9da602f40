"""Token relevance and agreement@k between selector entities.

A selector entity is anything producing a set of token positions: one
attribution method's top-k selection, or one human annotator's highlighted
set.  Relevance of a token is the fraction of entities that selected it;
sentence-level agreement@k is the mean relevance over tokens with nonzero
relevance (tokens selected by nobody are excluded so that agreement is not
inflated by shared non-selection); dataset-level agreement@k is the plain
mean of the sentence scores.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from typing import AbstractSet, Mapping, Sequence

import numpy as np

from .corpus import AttributionInstance, Corpus, CorpusError, KSpec
from .selectors import TIE_EARLIEST, TIE_RANDOM, TopKSelection, dynamic_topk, fixed_topk
from .validation import check_index_set

#: Reserved selector name addressing the human annotators of an instance.
HUMAN = "human"

COMBINE_ENTITIES = "entities"
COMBINE_AVERAGE = "average"


class UndefinedAgreementError(ValueError):
    """agreement@k is undefined when no token has nonzero relevance."""


@dataclass(frozen=True)
class RelevanceVector:
    """Per-token selection ratios in [0, 1].

    ``selector_count`` is the resolution denominator: every value is an
    integer multiple of 1/selector_count.
    """

    values: tuple[float, ...]
    selector_count: int

    def __post_init__(self):
        if self.selector_count < 1:
            raise ValueError("selector_count must be >= 1")
        for v in self.values:
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"relevance value {v!r} outside [0, 1]")
            if abs(v * self.selector_count - round(v * self.selector_count)) > 1e-9:
                raise ValueError(
                    f"relevance value {v!r} is not a multiple of 1/{self.selector_count}"
                )

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class KStats:
    """Mean and population standard deviation of per-instance dynamic k."""

    mean: float
    sd: float


@dataclass(frozen=True)
class PairAgreement:
    """Dataset-level agreement@k for one selector pair under one k spec."""

    selector_a: str
    selector_b: str
    k_spec: str
    mean_agreement: float
    n_instances: int
    n_skipped: int = 0
    dynamic_k: Mapping[str, KStats] | None = None

    def __post_init__(self):
        if self.n_instances < 1:
            raise ValueError("an agreement entry needs at least one scored instance")
        if not 0.0 < self.mean_agreement <= 1.0:
            raise ValueError(f"mean agreement {self.mean_agreement!r} outside (0, 1]")


def relevance(selections: Sequence[AbstractSet[int]], n: int) -> RelevanceVector:
    """Fraction of selectors containing each of the n token positions."""
    m = len(selections)
    if m == 0:
        raise ValueError("relevance needs at least one selector")
    counts = [0] * n
    for sel in selections:
        for i in check_index_set(sel, n):
            counts[i] += 1
    return RelevanceVector(tuple(c / m for c in counts), m)


def human_relevance(human_selections: Sequence[Sequence[int]]) -> RelevanceVector:
    """Ratio of annotators who selected each token.

    With three annotators the values lie in {0, 1/3, 2/3, 1}.
    """
    m = len(human_selections)
    if m == 0:
        raise ValueError("human_relevance needs at least one annotator")
    n = len(human_selections[0])
    counts = [0] * n
    for a, row in enumerate(human_selections):
        if len(row) != n:
            raise ValueError(f"annotator {a} vector has length {len(row)}, expected {n}")
        for i, v in enumerate(row):
            if v not in (0, 1):
                raise ValueError(f"annotator {a} vector must be binary, got {v!r}")
            counts[i] += v
    return RelevanceVector(tuple(c / m for c in counts), m)


def agreement_sentence(rel: RelevanceVector) -> float:
    """Mean relevance over the tokens with nonzero relevance."""
    nonzero = [v for v in rel.values if v > 0.0]
    if not nonzero:
        raise UndefinedAgreementError(
            "agreement is undefined: no token was selected by any selector"
        )
    return math.fsum(nonzero) / len(nonzero)


def agreement_dataset(sentence_scores: Sequence[float]) -> float:
    """Arithmetic mean of sentence-level agreement scores."""
    if len(sentence_scores) == 0:
        raise ValueError("agreement_dataset needs at least one sentence score")
    return math.fsum(sentence_scores) / len(sentence_scores)


def _subseed(seed, instance_id: str, method: str) -> int:
    """Stable per-(instance, method) seed so random ties are order-independent."""
    digest = hashlib.blake2b(
        f"{seed}:{instance_id}:{method}".encode("utf-8"), digest_size=8
    ).digest()
    return int.from_bytes(digest, "big")


def method_selection(
    instance: AttributionInstance,
    method: str,
    k_spec: KSpec,
    tie_break: str = TIE_EARLIEST,
    seed=None,
    use_abs: bool = False,
) -> TopKSelection:
    """Compute one method's selection on one instance under a k spec."""
    try:
        scores = instance.attributions[method]
    except KeyError:
        raise CorpusError(f"unknown method {method!r}") from None
    arr = np.asarray(scores, dtype=np.float64)
    if use_abs:
        arr = np.abs(arr)
    if k_spec.mode == "dynamic":
        return dynamic_topk(arr)
    if tie_break == TIE_RANDOM:
        seed = _subseed(seed, instance.instance_id, method)
    return fixed_topk(arr, k_spec.k, tie_break, seed)


def instance_human_score(
    instance: AttributionInstance,
    method_sel: TopKSelection,
    combine: str = COMBINE_ENTITIES,
) -> float:
    """Sentence agreement between one method selection and the annotators.

    ``entities`` treats each annotator as one selector next to the method;
    ``average`` averages the method's membership indicator with the
    annotator ratio per token.
    """
    if not instance.human_selections:
        raise UndefinedAgreementError(
            f"instance {instance.instance_id!r} has no human annotations"
        )
    n = len(instance)
    if combine == COMBINE_ENTITIES:
        entities: list[AbstractSet[int]] = [method_sel.indices]
        for row in instance.human_selections:
            entities.append({i for i, v in enumerate(row) if v})
        rel = relevance(entities, n)
    elif combine == COMBINE_AVERAGE:
        ratios = human_relevance(instance.human_selections)
        values = tuple(
            ((1.0 if i in method_sel.indices else 0.0) + ratios.values[i]) / 2.0
            for i in range(n)
        )
        rel = RelevanceVector(values, 2 * instance.n_annotators)
    else:
        raise ValueError(f"unknown combine mode {combine!r}")
    return agreement_sentence(rel)


def _k_stats(ks: Sequence[int]) -> KStats:
    mean = math.fsum(ks) / len(ks)
    var = math.fsum((k - mean) ** 2 for k in ks) / len(ks)
    return KStats(mean, math.sqrt(var))


def _require_methods(corpus: Corpus, methods: Sequence[str]) -> None:
    for m in methods:
        if m not in corpus.method_names:
            raise CorpusError(f"unknown method {m!r}; corpus has {corpus.methods_sorted()}")


def method_pair_agreement(
    corpus: Corpus,
    method_a: str,
    method_b: str,
    k_spec: KSpec,
    *,
    tie_break: str = TIE_EARLIEST,
    seed=None,
    use_abs: bool = False,
) -> PairAgreement:
    """Dataset agreement@k between two methods.

    Under a fixed spec both methods use the same k; under the dynamic spec
    each method's own profile drives its selection, and the entry carries
    the per-method mean and spread of the dynamic k.
    """
    _require_methods(corpus, [method_a, method_b])
    sentence_scores = []
    dyn_ks: dict[str, list[int]] = {method_a: [], method_b: []}
    for inst in corpus.instances:
        sel_a = method_selection(inst, method_a, k_spec, tie_break, seed, use_abs)
        sel_b = method_selection(inst, method_b, k_spec, tie_break, seed, use_abs)
        rel = relevance([sel_a.indices, sel_b.indices], len(inst))
        sentence_scores.append(agreement_sentence(rel))
        if k_spec.mode == "dynamic":
            dyn_ks[method_a].append(sel_a.k)
            dyn_ks[method_b].append(sel_b.k)
    mean = agreement_dataset(sentence_scores)
    stats = None
    if k_spec.mode == "dynamic":
        stats = {m: _k_stats(ks) for m, ks in dyn_ks.items()}
    return PairAgreement(
        method_a, method_b, k_spec.describe(), mean, len(sentence_scores), 0, stats
    )


def method_human_agreement(
    corpus: Corpus,
    method: str,
    k_spec: KSpec,
    combine: str = COMBINE_ENTITIES,
    *,
    tie_break: str = TIE_EARLIEST,
    seed=None,
    use_abs: bool = False,
) -> PairAgreement:
    """Dataset agreement@k between one method and the human annotators.

    Instances without annotations are skipped and counted in ``n_skipped``.
    """
    _require_methods(corpus, [method])
    sentence_scores = []
    dyn_ks: list[int] = []
    skipped = 0
    for inst in corpus.instances:
        if not inst.human_selections:
            skipped += 1
            continue
        sel = method_selection(inst, method, k_spec, tie_break, seed, use_abs)
        try:
            score = instance_human_score(inst, sel, combine)
        except UndefinedAgreementError:
            skipped += 1
            continue
        sentence_scores.append(score)
        if k_spec.mode == "dynamic":
            dyn_ks.append(sel.k)
    if not sentence_scores:
        raise CorpusError("no annotated instances to compare against")
    mean = agreement_dataset(sentence_scores)
    stats = {method: _k_stats(dyn_ks)} if k_spec.mode == "dynamic" else None
    return PairAgreement(
        method, HUMAN, k_spec.describe(), mean, len(sentence_scores), skipped, stats
    )


def agreement_curve(
    corpus: Corpus,
    selector_a: str,
    selector_b: str,
    k_values: Sequence[int],
    *,
    combine: str = COMBINE_ENTITIES,
    tie_break: str = TIE_EARLIEST,
    seed=None,
    use_abs: bool = False,
) -> list[PairAgreement]:
    """One fixed-k agreement entry per k, for plotting agreement-vs-k curves.

    ``selector_b`` may be the reserved name "human".
    """
    if len(k_values) == 0:
        raise ValueError("agreement_curve needs at least one k value")
    entries = []
    for k in k_values:
        spec = KSpec.fixed(k)
        if selector_b == HUMAN:
            entry = method_human_agreement(
                corpus, selector_a, spec, combine,
                tie_break=tie_break, seed=seed, use_abs=use_abs,
            )
        else:
            entry = method_pair_agreement(
                corpus, selector_a, selector_b, spec,
                tie_break=tie_break, seed=seed, use_abs=use_abs,
            )
        entries.append(entry)
    return entries
