"""Keyframe labeling and the per-segment sliding filter."""

from __future__ import annotations

from itertools import groupby

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bricklearn.keyframes import FrameLabel, KeyframeError, classify_frame, sliding_filter
from bricklearn.sensor import ObservationFrame


def _frame(occluded_cells: int = 0, side: int = 50, timestamp: int = 0) -> ObservationFrame:
    occ = np.zeros((side, side), dtype=bool)
    occ.ravel()[:occluded_cells] = True
    return ObservationFrame(
        color=np.zeros((side, side), dtype=np.int16),
        depth=np.zeros((side, side), dtype=np.float64),
        occlusion=occ,
        top_index=np.full((side, side), -1, dtype=np.int32),
        timestamp=timestamp,
    )


class TestClassify:
    def test_unoccluded_is_confident_keyframe(self):
        assert classify_frame(_frame(0)) == FrameLabel(True, 1.0)

    def test_fully_occluded(self):
        assert classify_frame(_frame(2500)) == FrameLabel(False, 0.0)

    def test_two_percent_occlusion(self):
        # 50 of 2500 cells = 2% < 5% threshold.
        label = classify_frame(_frame(50), theta_h=0.05)
        assert label.is_keyframe
        assert label.confidence == pytest.approx(0.98)

    def test_threshold_bounds_validated(self):
        with pytest.raises(ValueError):
            classify_frame(_frame(), theta_h=1.0)


class TestSlidingFilter:
    def test_one_keyframe_per_run(self):
        frames = [_frame(timestamp=t) for t in range(6)]
        pattern = [True, True, False, True, False, True]
        labels = [FrameLabel(k, 1.0 if k else 0.0) for k in pattern]
        out = sliding_filter(frames, labels)
        assert [f.timestamp for f in out] == [0, 3, 5]

    def test_equal_confidence_picks_earliest(self):
        frames = [_frame(timestamp=t) for t in range(5)]
        labels = [FrameLabel(True, 0.7)] * 5
        out = sliding_filter(frames, labels)
        assert len(out) == 1
        assert out[0].timestamp == 0

    def test_highest_confidence_wins_within_run(self):
        frames = [_frame(timestamp=t) for t in range(4)]
        labels = [
            FrameLabel(True, 0.6),
            FrameLabel(True, 0.9),
            FrameLabel(True, 0.8),
            FrameLabel(False, 0.0),
        ]
        assert [f.timestamp for f in sliding_filter(frames, labels)] == [1]

    def test_alternating_singleton_runs(self):
        frames = [_frame(timestamp=t) for t in range(6)]
        labels = [FrameLabel(t % 2 == 0, 1.0) for t in range(6)]
        assert [f.timestamp for f in sliding_filter(frames, labels)] == [0, 2, 4]

    def test_no_keyframes_is_an_error(self):
        frames = [_frame(timestamp=t) for t in range(3)]
        labels = [FrameLabel(False, 0.0)] * 3
        with pytest.raises(KeyframeError):
            sliding_filter(frames, labels)

    def test_empty_stream_is_an_error(self):
        with pytest.raises(KeyframeError):
            sliding_filter([], [])

    @given(st.lists(st.booleans(), min_size=1, max_size=40))
    def test_count_equals_maximal_true_runs(self, pattern):
        frames = [_frame(timestamp=t) for t in range(len(pattern))]
        labels = [FrameLabel(k, 0.5) for k in pattern]
        runs = sum(1 for key, _grp in groupby(pattern) if key)
        if runs == 0:
            with pytest.raises(KeyframeError):
                sliding_filter(frames, labels)
        else:
            out = sliding_filter(frames, labels)
            assert len(out) == runs
            stamps = [f.timestamp for f in out]
            assert stamps == sorted(stamps), "output must preserve stream order"
            assert set(stamps) <= set(range(len(pattern))), "output must be a subsequence"
