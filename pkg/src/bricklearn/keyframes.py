"""Keyframe detection: flag settled frames and pick one per settled segment."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Protocol, Sequence

from .sensor import ObservationFrame

DEFAULT_OCCLUSION_THRESHOLD = 0.05


class KeyframeError(Exception):
    pass


@dataclass(frozen=True)
class FrameLabel:
    is_keyframe: bool
    confidence: float


class FrameClassifier(Protocol):
    """Anything that labels a frame; lets a learned classifier drop in later."""

    def __call__(self, frame: ObservationFrame) -> FrameLabel: ...


def classify_frame(frame: ObservationFrame, theta_h: float = DEFAULT_OCCLUSION_THRESHOLD) -> FrameLabel:
    """Label a frame by how much of the board the demonstrator covers.

    A frame is a keyframe when the occluded fraction stays below theta_h;
    confidence is 1 minus the occluded fraction.
    """
    if not 0.0 < theta_h < 1.0:
        raise ValueError(f"theta_h must be in (0, 1), got {theta_h}")
    occ = frame.occluded_fraction()
    return FrameLabel(is_keyframe=occ < theta_h, confidence=1.0 - occ)


@dataclass(frozen=True)
class OcclusionFractionClassifier:
    theta_h: float = DEFAULT_OCCLUSION_THRESHOLD

    def __call__(self, frame: ObservationFrame) -> FrameLabel:
        return classify_frame(frame, self.theta_h)


def sliding_filter(
    frames: Sequence[ObservationFrame],
    labels: Sequence[FrameLabel],
) -> list[ObservationFrame]:
    """One representative keyframe per maximal run of keyframe-labeled frames.

    Picks the highest-confidence frame of each run, earliest index on ties;
    output preserves stream order.
    """
    if not frames:
        raise KeyframeError("empty frame stream")
    if len(frames) != len(labels):
        raise ValueError("frames and labels must be parallel")

    out: list[ObservationFrame] = []
    best: ObservationFrame | None = None
    best_conf = -1.0
    for frame, label in zip(frames, labels):
        if label.is_keyframe:
            if label.confidence > best_conf:
                best, best_conf = frame, label.confidence
        elif best is not None:
            out.append(best)
            best, best_conf = None, -1.0
    if best is not None:
        out.append(best)
    if not out:
        raise KeyframeError("no keyframe-labeled frames in the stream")
    return out
