"""Task extraction: differencing estimator, position density, candidate ranking."""

from __future__ import annotations

import math

import numpy as np
import pytest

from bricklearn.assembly import Assembly, BrickPlacement
from bricklearn.extraction import (
    ExtractionError,
    estimate_delta,
    normalize_scores,
    position_likelihood,
    rank_candidates,
)
from bricklearn.fixtures import fixture_events, fixture_names
from bricklearn.sensor import render_clean

BOUNDS = (48, 48, 24)


def _clean_pair(before: Assembly, b: BrickPlacement):
    return render_clean(before), render_clean(before.apply(b))


class TestEstimateDelta:
    @pytest.mark.parametrize(
        "placement",
        [
            BrickPlacement((5, 5, 1), 1, 0, "red"),
            BrickPlacement((5, 5, 1), 1, 1, "blue"),
            BrickPlacement((10, 20, 1), 4, 0, "yellow"),
            BrickPlacement((30, 7, 1), 7, 1, "green"),
        ],
    )
    def test_zero_noise_recovers_anchor_exactly(self, placement):
        prev, nxt = _clean_pair(Assembly.empty(), placement)
        delta = estimate_delta(prev, nxt)
        assert delta.mu == tuple(float(v) for v in placement.p)
        assert max(delta.id_scores, key=delta.id_scores.get) == placement.brick_id
        assert max(delta.omega_scores, key=delta.omega_scores.get) == placement.omega
        assert delta.color_estimate == (placement.color, 1.0)

    def test_zero_noise_on_stacked_brick(self, small_tower):
        b = BrickPlacement((10, 10, 4), 6, 0, "white")
        prev, nxt = _clean_pair(small_tower, b)
        delta = estimate_delta(prev, nxt)
        assert delta.mu == (10.0, 10.0, 4.0)

    def test_no_change_is_an_error(self):
        frame = render_clean(Assembly.empty())
        with pytest.raises(ExtractionError, match="no operation"):
            estimate_delta(frame, frame)

    def test_square_region_leaves_orientation_ambiguous(self):
        prev, nxt = _clean_pair(Assembly.empty(), BrickPlacement((9, 9, 1), 5, 0, "pink"))
        delta = estimate_delta(prev, nxt)
        assert delta.omega_scores == {0: 0.5, 1: 0.5}

    def test_changed_cells_match_footprint(self):
        b = BrickPlacement((12, 8, 1), 6, 1, "orange")
        prev, nxt = _clean_pair(Assembly.empty(), b)
        delta = estimate_delta(prev, nxt)
        assert delta.changed_cells == frozenset({(12 + i, 8 + j) for i in range(2) for j in range(4)})

    def test_scores_normalized(self):
        prev, nxt = _clean_pair(Assembly.empty(), BrickPlacement((5, 5, 1), 3, 0, "red"))
        delta = estimate_delta(prev, nxt)
        assert sum(delta.id_scores.values()) == pytest.approx(1.0)
        assert sum(delta.omega_scores.values()) == pytest.approx(1.0)

    def test_largest_mass_region_wins_over_speckle(self):
        b = BrickPlacement((20, 20, 1), 6, 0, "red")
        prev, nxt = _clean_pair(Assembly.empty(), b)
        noisy_depth = nxt.depth.copy()
        noisy_depth[2, 2] += 0.8  # isolated jitter spike far from the brick
        from bricklearn.sensor import ObservationFrame

        nxt2 = ObservationFrame(nxt.color.copy(), noisy_depth, nxt.occlusion.copy(), nxt.top_index.copy(), 1)
        delta = estimate_delta(prev, nxt2)
        assert delta.mu == (20.0, 20.0, 1.0)


class TestPositionLikelihood:
    def test_closed_form_at_integral_mean(self):
        # With delta = 0 and the floored sigma of 0.1, the density is
        # (2*pi)^(-3/2) * (0.1)^(-3).
        expected = 1000.0 / (2.0 * math.pi) ** 1.5
        got = position_likelihood((7, 7, 2), (7.0, 7.0, 2.0))
        assert abs(got - expected) / expected < 1e-6

    def test_equidistant_cells_score_equally(self):
        mu = (10.3, 10.0, 2.0)
        left = position_likelihood((10, 10, 2), (10.0, 10.3, 2.0))
        right = position_likelihood((10, 10, 2), mu)
        assert left == pytest.approx(right)

    def test_strictly_decreasing_along_rays(self):
        rng = np.random.default_rng(0)
        mu = (12.4, 9.7, 3.2)
        for _ in range(5):
            direction = rng.normal(size=3)
            direction /= np.linalg.norm(direction)
            radii = np.linspace(0.1, 5.0, 100)
            values = [
                position_likelihood(tuple(np.asarray(mu) + r * direction), mu) for r in radii
            ]
            assert all(a > b for a, b in zip(values, values[1:]))

    def test_density_sums_to_one_over_lattice(self):
        # Discrete total mass check: meaningful when sigma is comparable to
        # the cell size, i.e. the mean sits well off the lattice.
        rng = np.random.default_rng(1)
        for _ in range(5):
            frac = rng.uniform(0.35, 0.5, size=3) * rng.choice([-1, 1], size=3)
            mu = tuple(np.array([20.0, 20.0, 10.0]) + frac)
            center = np.round(mu)
            total = 0.0
            for dx in range(-3, 4):
                for dy in range(-3, 4):
                    for dz in range(-3, 4):
                        p = (int(center[0]) + dx, int(center[1]) + dy, int(center[2]) + dz)
                        total += position_likelihood(p, mu)
            assert total <= 1.0 + 1e-2


class TestRankCandidates:
    def _delta(self, placement: BrickPlacement):
        prev, nxt = _clean_pair(Assembly.empty(), placement)
        return estimate_delta(prev, nxt)

    def test_zero_noise_rank_one_is_true_placement(self):
        b = BrickPlacement((14, 9, 1), 2, 1, "yellow")
        ranked = rank_candidates(self._delta(b), k_max=24, bounds=BOUNDS)
        assert ranked[0].placement == b

    def test_sorted_descending(self):
        b = BrickPlacement((14, 9, 1), 6, 0, "red")
        ranked = rank_candidates(self._delta(b), k_max=24, bounds=BOUNDS)
        scores = [c.f for c in ranked]
        assert scores == sorted(scores, reverse=True)

    def test_truncates_to_k_max(self):
        b = BrickPlacement((14, 9, 1), 6, 0, "red")
        assert len(rank_candidates(self._delta(b), k_max=5, bounds=BOUNDS)) <= 5

    def test_confidences_positive_and_product(self):
        b = BrickPlacement((14, 9, 1), 6, 0, "red")
        for c in rank_candidates(self._delta(b), k_max=24, bounds=BOUNDS):
            assert c.f > 0
            assert c.f == pytest.approx(c.f_p * c.f_id * c.f_omega)

    def test_square_bricks_enumerate_single_orientation(self):
        b = BrickPlacement((9, 9, 1), 5, 0, "pink")
        ranked = rank_candidates(self._delta(b), k_max=200, bounds=BOUNDS)
        squares = [c for c in ranked if c.placement.brick_id == 5]
        assert squares and all(c.placement.omega == 0 for c in squares)

    def test_zero_noise_completeness_on_all_fixtures(self):
        for name in fixture_names():
            asm = Assembly.empty()
            for b in fixture_events(name):
                prev, nxt = _clean_pair(asm, b)
                delta = estimate_delta(prev, nxt)
                ranked = rank_candidates(delta, k_max=24, bounds=BOUNDS)
                assert any(c.placement == b for c in ranked), f"{name}: {b} missing from candidates"
                asm = asm.apply(b)

    def test_scaling_raw_scores_preserves_normalization(self):
        raw = {1: 0.2, 2: 0.5, 3: 0.1}
        scaled = {k: 7.5 * v for k, v in raw.items()}
        a = normalize_scores(raw)
        b = normalize_scores(scaled)
        for k in raw:
            assert a[k] == pytest.approx(b[k])
