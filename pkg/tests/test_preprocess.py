import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vsumpipe.dataio import AnnotationSet, FeatureSequence
from vsumpipe.preprocess import (
    BinarizeRule,
    consolidate_targets,
    make_windows,
    subsample,
)


def seq_of(t, d=3, fps=30.0, seed=0):
    frames = np.random.default_rng(seed).standard_normal((t, d)).astype(np.float32)
    return FeatureSequence(video_id="v", stream="rgb", fps=fps, frames=frames)


class TestSubsample:
    def test_30fps_to_2(self):
        seq = seq_of(30, fps=30.0)
        targets = np.arange(30)
        sub, t = subsample(seq, targets, 2.0)
        assert sub.n_frames == 2
        assert np.array_equal(sub.frames, seq.frames[[0, 15]])
        assert np.array_equal(t, [0, 15])
        assert sub.fps == 2.0

    def test_identity_at_same_fps(self):
        seq = seq_of(7, fps=4.0)
        sub, t = subsample(seq, np.arange(7), 4.0)
        assert np.array_equal(sub.frames, seq.frames)
        assert np.array_equal(t, np.arange(7))

    def test_bad_targets(self):
        seq = seq_of(10)
        with pytest.raises(ValueError):
            subsample(seq, None, 0.0)
        with pytest.raises(ValueError):
            subsample(seq, None, seq.fps * 2)

    @settings(max_examples=30, deadline=None)
    @given(t=st.integers(2, 200), ratio=st.sampled_from([1.0, 1.5, 2.0, 3.0, 7.5, 15.0]))
    def test_idempotent(self, t, ratio):
        fps = 30.0
        seq = seq_of(t, fps=fps, seed=t)
        target = fps / ratio
        once, _ = subsample(seq, None, target)
        twice, _ = subsample(once, None, target)
        assert np.array_equal(once.frames, twice.frames)
        assert once.fps == twice.fps == target


class TestConsolidate:
    def test_two_of_three_users(self):
        ann = AnnotationSet(video_id="v", fps=1.0, n_frames=1,
                            users=(np.array([1.0]), np.array([1.0]), np.array([0.0])))
        out = consolidate_targets(ann, BinarizeRule(x=0.5, mark="positive"))
        assert out.labels.tolist() == [1]  # ceil(0.5 * 3) = 2 <= 2 markers

    def test_all_zero_scores(self):
        ann = AnnotationSet(video_id="v", fps=1.0, n_frames=5, users=(np.zeros(5), np.zeros(5)))
        out = consolidate_targets(ann)
        assert out.labels.tolist() == [0] * 5

    def test_single_user_identity(self):
        scores = np.array([0.0, 2.0, 0.0, 1.0])
        ann = AnnotationSet(video_id="v", fps=1.0, n_frames=4, users=(scores,))
        out = consolidate_targets(ann, BinarizeRule(x=1.0, mark="positive"))
        assert out.labels.tolist() == [0, 1, 0, 1]

    def test_bad_fraction(self):
        ann = AnnotationSet(video_id="v", fps=1.0, n_frames=2, users=(np.ones(2),))
        with pytest.raises(ValueError):
            consolidate_targets(ann, BinarizeRule(x=0.0))

    def test_percentile_rule(self):
        scores = np.arange(10, dtype=float)
        ann = AnnotationSet(video_id="v", fps=1.0, n_frames=10, users=(scores, scores))
        out = consolidate_targets(ann, BinarizeRule(kind="score_percentile", sigma=0.8))
        assert out.labels.sum() == 2  # top ceil(0.2 * 10) on distinct means

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 1000), scale=st.floats(0.01, 100.0))
    def test_median_rule_scale_invariant(self, seed, scale):
        rng = np.random.default_rng(seed)
        users = tuple(rng.random(12) * 4 + 1 for _ in range(3))
        ann1 = AnnotationSet(video_id="v", fps=1.0, n_frames=12, users=users)
        ann2 = AnnotationSet(video_id="v", fps=1.0, n_frames=12,
                             users=tuple(u * scale for u in users))
        rule = BinarizeRule(x=0.5, mark="median")
        a = consolidate_targets(ann1, rule).labels
        b = consolidate_targets(ann2, rule).labels
        assert np.array_equal(a, b)


class TestMakeWindows:
    def test_spec_example(self):
        seq = seq_of(20)
        batch = make_windows(seq, np.arange(20), 16, 1)
        assert batch.windows.shape == (5, 16, 3)
        assert batch.center_indices.tolist() == [8, 9, 10, 11, 12]
        assert batch.targets.tolist() == [8, 9, 10, 11, 12]

    def test_single_window(self):
        seq = seq_of(16)
        batch = make_windows(seq, np.arange(16), 16)
        assert batch.windows.shape[0] == 1
        assert batch.center_indices.tolist() == [8]

    def test_width_one_identity(self):
        seq = seq_of(9)
        targets = np.random.default_rng(1).integers(0, 2, 9)
        batch = make_windows(seq, targets, 1, 1)
        assert batch.windows.shape == (9, 1, 3)
        assert np.array_equal(batch.targets, targets)

    def test_window_too_long(self):
        with pytest.raises(ValueError):
            make_windows(seq_of(4), np.zeros(4), 5)

    @settings(max_examples=25, deadline=None)
    @given(t=st.integers(3, 60), w=st.integers(1, 20))
    def test_scatter_back_property(self, t, w):
        if w > t:
            w = t
        seq = seq_of(t, seed=t * 31 + w)
        targets = np.random.default_rng(t + w).integers(0, 2, t)
        batch = make_windows(seq, targets, w, 1)
        lo, hi = w // 2, t - math.ceil(w / 2) + 1
        scattered = np.zeros(t) - 1
        scattered[batch.center_indices] = batch.targets
        assert np.array_equal(scattered[lo:hi], targets[lo:hi])
        assert batch.center_indices.tolist() == list(range(lo, hi))
