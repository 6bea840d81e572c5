"""Virtual top-down RGB-D sensor.

Observations are per-(x, y) height and color grids rather than perspective
images: depth is the top occupied brick height (baseplate = 0) and color is
the topmost brick's palette code. The noise model reproduces the two failure
modes of a real sensor over a brick workspace: dark bricks blending into the
background, and inconsistent per-brick depth offsets on top of per-cell
jitter.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .assembly import (
    DEFAULT_BOUNDS,
    Assembly,
    Bounds,
    BrickPlacement,
    build,
    xy_extent,
)
from .catalog import DARK_COLORS, DEFAULT_CATALOG, PALETTE, BrickCatalog, color_code, color_name
from .plan import parse_placement

#: Cells around a placement the demonstrator's hand covers while operating.
OCCLUSION_MARGIN = 3


@dataclass(frozen=True)
class NoiseConfig:
    """Sensor corruption parameters. All-zero means a clean sensor."""

    sigma_d: float = 0.0   # per-cell depth noise std, brick heights
    sigma_b: float = 0.0   # per-brick depth bias std, brick heights
    p_dark: float = 0.0    # chance a dark-colored cell reads as background
    p_flip: float = 0.0    # chance a colored cell reads as an adjacent palette color
    seed: int = 0

    def __post_init__(self) -> None:
        if self.sigma_d < 0 or self.sigma_b < 0:
            raise ValueError("noise stds must be non-negative")
        for name in ("p_dark", "p_flip"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {v}")

    @property
    def is_clean(self) -> bool:
        return self.sigma_d == 0 and self.sigma_b == 0 and self.p_dark == 0 and self.p_flip == 0


ZERO_NOISE = NoiseConfig()


class ObservationFrame:
    """One sensor frame: color, depth, occlusion grids plus a frame index.

    ``top_index`` tracks which placement is visible at each cell (-1 = none)
    so per-brick depth bias can be applied; it is sensor bookkeeping, not an
    observable channel.
    """

    __slots__ = ("color", "depth", "occlusion", "top_index", "timestamp")

    def __init__(
        self,
        color: np.ndarray,
        depth: np.ndarray,
        occlusion: np.ndarray,
        top_index: np.ndarray,
        timestamp: int = 0,
    ):
        if not (color.shape == depth.shape == occlusion.shape == top_index.shape):
            raise ValueError("frame grids must share dimensions")
        self.color = color
        self.depth = depth
        self.occlusion = occlusion
        self.top_index = top_index
        self.timestamp = timestamp
        for a in (self.color, self.depth, self.occlusion, self.top_index):
            a.setflags(write=False)

    @property
    def shape(self) -> tuple[int, int]:
        return self.color.shape

    def occluded_fraction(self) -> float:
        return float(self.occlusion.mean())

    def same_grids(self, other: "ObservationFrame") -> bool:
        return (
            np.array_equal(self.color, other.color)
            and np.array_equal(self.depth, other.depth)
            and np.array_equal(self.occlusion, other.occlusion)
        )


def render_clean(assembly: Assembly, timestamp: int = 0) -> ObservationFrame:
    """Noise-free top-down view of an assembly state."""
    top_idx = assembly.top_placement_indices()
    depth = assembly.top_heights().astype(np.float64)
    color = np.zeros(top_idx.shape, dtype=np.int16)
    visible = top_idx >= 0
    if visible.any():
        codes = np.array(
            [color_code(b.color) for b in assembly.placements] or [0], dtype=np.int16
        )
        color[visible] = codes[top_idx[visible]]
    occlusion = np.zeros(top_idx.shape, dtype=bool)
    return ObservationFrame(color, depth, occlusion, top_idx.copy(), timestamp)


def corrupt(
    frame: ObservationFrame,
    cfg: NoiseConfig,
    brick_biases: np.ndarray | None = None,
    rng: np.random.Generator | None = None,
) -> ObservationFrame:
    """Apply the sensor noise model to a clean frame.

    ``brick_biases[i]`` is the fixed depth offset of placement i for this
    trace (drawn once per trace elsewhere). Deterministic for a given seed:
    without an explicit ``rng`` a fresh generator is seeded from cfg.seed.

    Args:
        frame: clean observation.
        cfg: noise parameters.
        brick_biases: per-placement depth offsets, indexed by placement.
        rng: optional generator to draw from (for frame streams).

    Returns:
        A new frame; the occlusion mask is never altered.
    """
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    depth = frame.depth.copy()
    color = frame.color.copy()

    if brick_biases is not None and len(brick_biases) and (frame.top_index >= 0).any():
        covered = frame.top_index >= 0
        depth[covered] += brick_biases[frame.top_index[covered]]
    if cfg.sigma_d > 0:
        depth += rng.normal(0.0, cfg.sigma_d, size=depth.shape)

    if cfg.p_dark > 0:
        dark_codes = np.array(sorted(color_code(c) for c in DARK_COLORS), dtype=np.int16)
        dark = np.isin(color, dark_codes)
        drop = dark & (rng.random(color.shape) < cfg.p_dark)
        color[drop] = 0
    if cfg.p_flip > 0:
        colored = color > 0
        flip = colored & (rng.random(color.shape) < cfg.p_flip)
        if flip.any():
            # Misread as a cyclically adjacent palette entry, either neighbor.
            step = rng.integers(0, 2, size=color.shape) * 2 - 1
            flipped = ((color - 1 + step) % len(PALETTE)) + 1
            color[flip] = flipped[flip]

    return ObservationFrame(color, depth, frame.occlusion.copy(), frame.top_index.copy(), frame.timestamp)


@dataclass(frozen=True)
class DemonstrationTrace:
    """The ground-truth placement sequence plus sensor configuration."""

    events: tuple[BrickPlacement, ...]
    sensor: NoiseConfig = ZERO_NOISE
    frames_per_state: int = 3
    occlusion_frames_per_event: int = 2
    bounds: Bounds = DEFAULT_BOUNDS
    catalog: BrickCatalog = field(default=DEFAULT_CATALOG, compare=False)

    def __post_init__(self) -> None:
        if self.frames_per_state < 1:
            raise ValueError("frames_per_state must be >= 1")
        if self.occlusion_frames_per_event < 0:
            raise ValueError("occlusion_frames_per_event must be >= 0")
        build(self.events, self.bounds, self.catalog)  # validates step-wise feasibility

    def target_assembly(self) -> Assembly:
        return build(self.events, self.bounds, self.catalog)


def occlusion_blob(
    b: BrickPlacement,
    bounds: Bounds,
    catalog: BrickCatalog = DEFAULT_CATALOG,
    margin: int = OCCLUSION_MARGIN,
) -> np.ndarray:
    """Boolean (X, Y) mask of the hand blob over a placement: its footprint
    dilated by ``margin`` cells, clipped to the board."""
    X, Y, _ = bounds
    mask = np.zeros((X, Y), dtype=bool)
    dx, dy = xy_extent(catalog, b.brick_id, b.omega)
    x0 = max(1, b.x - margin)
    x1 = min(X, b.x + dx - 1 + margin)
    y0 = max(1, b.y - margin)
    y1 = min(Y, b.y + dy - 1 + margin)
    mask[x0 - 1 : x1, y0 - 1 : y1] = True
    return mask


def expand_demo(trace: DemonstrationTrace) -> list[ObservationFrame]:
    """Expand a demonstration into its corrupted frame stream.

    Emits frames_per_state settled frames of the initial empty board, then
    per event: occlusion_frames_per_event frames with the hand blob over the
    event, followed by frames_per_state settled frames of the new state.
    Total frame count is frames_per_state*(n+1) + occlusion_frames_per_event*n.
    """
    rng = np.random.default_rng(trace.sensor.seed)
    n = len(trace.events)
    # One depth bias per brick, fixed for the whole trace.
    biases = rng.normal(0.0, trace.sensor.sigma_b, size=n) if n else np.zeros(0)

    frames: list[ObservationFrame] = []
    t = 0

    def emit(clean: ObservationFrame, occ_mask: np.ndarray | None) -> None:
        nonlocal t
        f = corrupt(clean, trace.sensor, biases, rng)
        occl = occ_mask if occ_mask is not None else f.occlusion
        frames.append(ObservationFrame(f.color, f.depth, occl.copy(), f.top_index.copy(), t))
        t += 1

    state = Assembly.empty(trace.bounds, trace.catalog)
    settled = render_clean(state)
    for _ in range(trace.frames_per_state):
        emit(settled, None)

    for i, event in enumerate(trace.events):
        state = state.apply(event)
        post = render_clean(state)
        blob = occlusion_blob(event, trace.bounds, trace.catalog)
        for _ in range(trace.occlusion_frames_per_event):
            emit(post, blob)
        for _ in range(trace.frames_per_state):
            emit(post, None)

    return frames


# -- trace and frame files ----------------------------------------------------


def placement_to_json(b: BrickPlacement, catalog: BrickCatalog = DEFAULT_CATALOG) -> dict:
    return {
        "brick": catalog.get(b.brick_id).name,
        "omega": b.omega,
        "position": list(b.p),
        "color": b.color,
    }


def trace_to_json(trace: DemonstrationTrace) -> str:
    doc = {
        "events": [placement_to_json(b, trace.catalog) for b in trace.events],
        "sensor": asdict(trace.sensor),
        "frames_per_state": trace.frames_per_state,
        "occlusion_frames_per_event": trace.occlusion_frames_per_event,
        "bounds": list(trace.bounds),
    }
    return json.dumps(doc, indent=2) + "\n"


def trace_from_json(data: str | bytes, catalog: BrickCatalog = DEFAULT_CATALOG) -> DemonstrationTrace:
    doc = json.loads(data)
    if "tasks" in doc and "events" not in doc:
        # A plan file doubles as a demonstration: replay its tasks as events.
        events = [parse_placement(t, f"task {i}", catalog) for i, t in enumerate(doc["tasks"], 1)]
        bounds = tuple(doc.get("bounds", DEFAULT_BOUNDS))
        return DemonstrationTrace(tuple(events), ZERO_NOISE, bounds=bounds, catalog=catalog)
    events = [parse_placement(e, f"event {i}", catalog) for i, e in enumerate(doc.get("events", []), 1)]
    sensor = NoiseConfig(**doc.get("sensor", {}))
    bounds = tuple(doc.get("bounds", DEFAULT_BOUNDS))
    return DemonstrationTrace(
        events=tuple(events),
        sensor=sensor,
        frames_per_state=int(doc.get("frames_per_state", 3)),
        occlusion_frames_per_event=int(doc.get("occlusion_frames_per_event", 2)),
        bounds=bounds,
        catalog=catalog,
    )


def frames_to_json(frames: list[ObservationFrame]) -> str:
    """Debug dump of a frame stream."""
    doc = {
        "frames": [
            {
                "timestamp": f.timestamp,
                "depth": np.round(f.depth, 4).tolist(),
                "color": [[color_name(int(c)) for c in row] for row in f.color],
                "occlusion": f.occlusion.astype(int).tolist(),
            }
            for f in frames
        ]
    }
    return json.dumps(doc) + "\n"


def with_seed(cfg: NoiseConfig, seed: int) -> NoiseConfig:
    return replace(cfg, seed=seed)
