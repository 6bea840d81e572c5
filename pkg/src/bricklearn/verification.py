"""Simulation verification loop.

Candidates are executed in a clean shadow copy of the verified-so-far
structure; the rendered result is scored against the real keyframe over a
region of interest around the candidate. The first candidate clearing the
similarity threshold is accepted; if none does, the best-scoring trial wins.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .assembly import Assembly, BrickPlacement, placement_footprint
from .extraction import CandidateTask
from .sensor import ObservationFrame, render_clean

DEFAULT_SIMILARITY_THRESHOLD = 0.9
DEFAULT_DEPTH_TOLERANCE = 0.5
DEFAULT_ROI_MARGIN = 2

VIA_THRESHOLD = "threshold"
VIA_ARGMAX = "argmax-fallback"


class VerificationError(Exception):
    pass


@dataclass
class ShadowState:
    """The verified-so-far structure; advances only on accepted candidates."""

    assembly: Assembly
    step: int = 0

    def advance(self, placement: BrickPlacement) -> None:
        self.assembly = self.assembly.apply(placement)
        self.step += 1


@dataclass(frozen=True)
class Trial:
    placement: BrickPlacement
    score: float


@dataclass(frozen=True)
class Skip:
    placement: BrickPlacement
    reason: str


@dataclass(frozen=True)
class VerificationOutcome:
    accepted: BrickPlacement
    s: float
    via: str
    trials: tuple[Trial, ...]
    skips: tuple[Skip, ...] = field(default=())


def roi_cells(
    placement: BrickPlacement,
    assembly: Assembly,
    margin: int = DEFAULT_ROI_MARGIN,
) -> frozenset[tuple[int, int]]:
    """(x, y) cells of the placement's footprint dilated by ``margin``."""
    X, Y, _ = assembly.bounds
    cells = set()
    for (x, y, _z) in placement_footprint(placement, assembly.catalog):
        for i in range(max(1, x - margin), min(X, x + margin) + 1):
            for j in range(max(1, y - margin), min(Y, y + margin) + 1):
                cells.add((i, j))
    return frozenset(cells)


def similarity(
    real_kf: ObservationFrame,
    sim_kf: ObservationFrame,
    roi: frozenset[tuple[int, int]],
    tau_d: float = DEFAULT_DEPTH_TOLERANCE,
) -> float:
    """Mean per-cell agreement over the region of interest.

    Each cell contributes half for a color match and half for depth within
    tau_d, so s is in [0, 1] and symmetric in the two frames.
    """
    if real_kf.shape != sim_kf.shape:
        raise ValueError("frames must share dimensions")
    if not roi:
        raise VerificationError("empty region of interest")
    idx = np.array(sorted(roi), dtype=np.int64) - 1
    xs, ys = idx[:, 0], idx[:, 1]
    color_ok = real_kf.color[xs, ys] == sim_kf.color[xs, ys]
    depth_ok = np.abs(real_kf.depth[xs, ys] - sim_kf.depth[xs, ys]) <= tau_d
    return float(0.5 * color_ok.mean() + 0.5 * depth_ok.mean())


def verify_candidates(
    state: ShadowState,
    candidates: list[CandidateTask],
    real_kf: ObservationFrame,
    delta_s: float = DEFAULT_SIMILARITY_THRESHOLD,
    tau_d: float = DEFAULT_DEPTH_TOLERANCE,
    margin: int = DEFAULT_ROI_MARGIN,
) -> VerificationOutcome:
    """Try candidates in rank order until one clears delta_s, else argmax.

    Geometrically infeasible candidates are skipped with a recorded reason
    and never accepted. The shadow state advances by the accepted placement.
    """
    if not candidates:
        raise VerificationError("empty candidate list")

    trials: list[Trial] = []
    skips: list[Skip] = []
    accepted: BrickPlacement | None = None
    accepted_s = 0.0

    for cand in candidates:
        verdict = state.assembly.is_feasible(cand.placement)
        if not verdict:
            skips.append(Skip(cand.placement, verdict.describe()))
            continue
        shadow = state.assembly.apply(cand.placement)
        sim_kf = render_clean(shadow, timestamp=real_kf.timestamp)
        roi = roi_cells(cand.placement, state.assembly, margin)
        s = similarity(real_kf, sim_kf, roi, tau_d)
        trials.append(Trial(cand.placement, s))
        if s > delta_s:
            accepted, accepted_s, via = cand.placement, s, VIA_THRESHOLD
            break
    else:
        if not trials:
            raise VerificationError("all candidates are infeasible in the current state")
        best = max(trials, key=lambda t: t.score)
        accepted, accepted_s, via = best.placement, best.score, VIA_ARGMAX

    state.advance(accepted)
    return VerificationOutcome(
        accepted=accepted,
        s=accepted_s,
        via=via,
        trials=tuple(trials),
        skips=tuple(skips),
    )
