"""scikit-learn style wrappers around the selection functions.

Both estimators are stateless: ``fit`` only returns self, and ``transform``
maps a sequence of 1-D score vectors (ragged lengths are fine) to a list of
TopKSelection objects.  They exist so selections can sit inside pipelines
and be configured through get_params/set_params like any other estimator.
"""

from __future__ import annotations

from sklearn.base import BaseEstimator, TransformerMixin

from .selectors import TIE_EARLIEST, dynamic_topk, fixed_topk


class FixedTopK(BaseEstimator, TransformerMixin):
    """Select the k highest-scoring positions of each profile."""

    def __init__(self, k: int = 1, tie_break: str = TIE_EARLIEST, seed=None):
        self.k = k
        self.tie_break = tie_break
        self.seed = seed

    def fit(self, X, y=None):
        return self

    def transform(self, X):
        return [fixed_topk(scores, self.k, self.tie_break, self.seed) for scores in X]


class DynamicTopK(BaseEstimator, TransformerMixin):
    """Select the qualifying peaks of each profile (argmax fallback)."""

    def fit(self, X, y=None):
        return self

    def transform(self, X):
        return [dynamic_topk(scores) for scores in X]
