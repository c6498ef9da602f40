import numpy as np
import pytest

from topkagree import KSpec, detect_peaks, dynamic_topk, fixed_topk

import _oracles


class TestFixedTopK:
    def test_selects_highest_scores(self):
        sel = fixed_topk([0.1, 0.9, 0.2, 0.8, 0.1], 2)
        assert sel.indices == {1, 3}
        assert sel.k == 2
        assert sel.mode == KSpec.fixed(2)
        assert not sel.fallback_used

    def test_k_larger_than_n_selects_everything(self):
        sel = fixed_topk([0.3, 0.1], 10)
        assert sel.indices == {0, 1}
        assert sel.k == 2
        # the requested k is preserved even when truncated
        assert sel.mode == KSpec.fixed(10)

    def test_earliest_tie_break(self):
        sel = fixed_topk([0.5, 0.5, 0.5], 2)
        assert sel.indices == {0, 1}

    def test_random_tie_break_is_seeded(self):
        a = fixed_topk([0.5, 0.5, 0.5, 0.5], 2, tie_break="random", seed=123)
        b = fixed_topk([0.5, 0.5, 0.5, 0.5], 2, tie_break="random", seed=123)
        assert a.indices == b.indices

    def test_random_tie_break_requires_seed(self):
        with pytest.raises(ValueError, match="seed"):
            fixed_topk([1.0, 2.0], 1, tie_break="random")

    def test_random_tie_break_never_displaces_strictly_higher_scores(self):
        rng = np.random.default_rng(7)
        for trial in range(200):
            scores = rng.integers(0, 4, size=rng.integers(2, 12)).astype(float)
            k = int(rng.integers(1, scores.size + 1))
            sel = fixed_topk(scores, k, tie_break="random", seed=trial)
            kept = sorted(scores[i] for i in sel.indices)
            dropped = sorted(scores[i] for i in range(scores.size) if i not in sel.indices)
            if dropped:
                assert max(dropped) <= min(kept)

    def test_matches_sort_oracle(self):
        rng = np.random.default_rng(11)
        for _ in range(300):
            scores = rng.normal(size=rng.integers(1, 30))
            k = int(rng.integers(1, 35))
            assert fixed_topk(scores, k).indices == _oracles.top_indices(scores, k)

    def test_rejects_bad_inputs(self):
        with pytest.raises(ValueError):
            fixed_topk([], 1)
        with pytest.raises(ValueError):
            fixed_topk([1.0], 0)
        with pytest.raises(ValueError):
            fixed_topk([np.nan], 1)
        with pytest.raises(ValueError):
            fixed_topk([1.0, 2.0], 1, tie_break="alphabetical")


class TestDetectPeaks:
    def test_two_interior_peaks(self):
        assert detect_peaks([0.1, 0.5, 0.2, 0.7, 0.3]) == {1, 3}

    def test_boundary_positions_never_qualify(self):
        # global max sits at position 0; only the interior bump counts
        assert detect_peaks([1.0, 0.1, 0.6, 0.1, 0.0]) == {2}

    def test_above_mean_constraint(self):
        # 0.3 at index 3 is a local max but sits below the profile mean (~0.37)
        assert detect_peaks([0.1, 0.9, 0.2, 0.3, 0.2, 0.8, 0.1]) == {1, 5}

    def test_plateaus_do_not_qualify(self):
        assert detect_peaks([0.0, 1.0, 1.0, 0.0]) == frozenset()

    def test_short_vectors_have_no_interior(self):
        assert detect_peaks([1.0]) == frozenset()
        assert detect_peaks([1.0, 2.0]) == frozenset()

    def test_matches_per_index_oracle(self):
        rng = np.random.default_rng(23)
        for _ in range(500):
            n = int(rng.integers(1, 51))
            scores = rng.integers(-32, 33, size=n) / 16.0
            assert detect_peaks(scores) == _oracles.peak_indices(scores)


class TestDynamicTopK:
    def test_peaks_drive_selection(self):
        sel = dynamic_topk([0.1, 0.5, 0.2, 0.7, 0.3])
        assert sel.indices == {1, 3}
        assert sel.k == 2
        assert sel.mode == KSpec.dynamic()
        assert not sel.fallback_used

    def test_fallback_on_monotone_profile(self):
        sel = dynamic_topk([0.1, 0.2, 0.3, 0.4])
        assert sel.indices == {3}
        assert sel.k == 1
        assert sel.fallback_used

    def test_fallback_on_constant_profile_picks_earliest(self):
        sel = dynamic_topk([0.5, 0.5, 0.5])
        assert sel.indices == {0}
        assert sel.fallback_used

    def test_fallback_on_single_token(self):
        sel = dynamic_topk([2.5])
        assert sel.indices == {0}
        assert sel.k == 1
        assert sel.fallback_used

    def test_k_always_equals_selection_size(self):
        rng = np.random.default_rng(5)
        for _ in range(200):
            scores = rng.normal(size=rng.integers(1, 40))
            sel = dynamic_topk(scores)
            assert sel.k == len(sel.indices) >= 1
