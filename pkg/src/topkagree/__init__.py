"""Agreement@k analysis for token-level feature attribution profiles.

Core layers:

- :mod:`topkagree.corpus`: domain types and JSON-lines ingestion
- :mod:`topkagree.selectors`: fixed and peak-based dynamic top-k selection
- :mod:`topkagree.agreement`: relevance and agreement@k metrics
- :mod:`topkagree.runs`: run matrices and APD-based run selection
- :mod:`topkagree.reports`: report assembly and deterministic emission
- :mod:`topkagree.cli`: the ``topkagree`` command

``FixedTopK`` and ``DynamicTopK`` are scikit-learn compatible transformer
wrappers; they are imported lazily so the command line does not pay for
the scikit-learn import.
"""

from .agreement import (
    COMBINE_AVERAGE,
    COMBINE_ENTITIES,
    HUMAN,
    KStats,
    PairAgreement,
    RelevanceVector,
    UndefinedAgreementError,
    agreement_curve,
    agreement_dataset,
    agreement_sentence,
    human_relevance,
    method_human_agreement,
    method_pair_agreement,
    relevance,
)
from .corpus import (
    DEFAULT_PUNCTUATION,
    AttributionInstance,
    Corpus,
    CorpusError,
    KSpec,
    RecordError,
    load_corpus,
    make_corpus,
    make_instance,
    save_corpus,
    zero_punctuation,
)
from .runs import RunMatrix, apd_select, average_difference, build_run_matrix
from .selectors import TopKSelection, detect_peaks, dynamic_topk, fixed_topk
from .synthetic import synthetic_corpus

__version__ = "0.1.0"

_LAZY = {"FixedTopK", "DynamicTopK"}

__all__ = [
    "AttributionInstance",
    "COMBINE_AVERAGE",
    "COMBINE_ENTITIES",
    "Corpus",
    "CorpusError",
    "DEFAULT_PUNCTUATION",
    "DynamicTopK",
    "FixedTopK",
    "HUMAN",
    "KSpec",
    "KStats",
    "PairAgreement",
    "RecordError",
    "RelevanceVector",
    "RunMatrix",
    "TopKSelection",
    "UndefinedAgreementError",
    "agreement_curve",
    "agreement_dataset",
    "agreement_sentence",
    "apd_select",
    "average_difference",
    "build_run_matrix",
    "detect_peaks",
    "dynamic_topk",
    "fixed_topk",
    "human_relevance",
    "load_corpus",
    "make_corpus",
    "make_instance",
    "method_human_agreement",
    "method_pair_agreement",
    "relevance",
    "save_corpus",
    "synthetic_corpus",
    "zero_punctuation",
]


def __getattr__(name):
    if name in _LAZY:
        from . import estimators

        return getattr(estimators, name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")


def __dir__():
    return sorted(set(globals()) | _LAZY)
