"""Built-in demonstration models.

Eight prototype structures (flat letter pairs, a figure, furniture, a
spiral staircase, a bridge, a pyramid, a temple) with fixed brick counts
{10, 12, 17, 21, 5, 19, 15, 23}. Every event is placed on top of the
current structure so the whole sequence is observable by a top-down sensor
and step-wise feasible. Geometries are original designs.
"""

from __future__ import annotations

import numpy as np

from .assembly import DEFAULT_BOUNDS, Assembly, Bounds, BrickPlacement, build
from .catalog import DEFAULT_CATALOG, PALETTE, BrickCatalog
from .sensor import DemonstrationTrace, NoiseConfig, ZERO_NOISE

# Catalog ids for readability.
B1X2, B1X4, B1X6, B1X8, B2X2, B2X4, B2X6 = 1, 2, 3, 4, 5, 6, 7


def _b(brick_id: int, x: int, y: int, z: int, omega: int, color: str) -> BrickPlacement:
    return BrickPlacement((x, y, z), brick_id, omega, color)


def _spiral() -> list[BrickPlacement]:
    """Five plates winding upward, each resting on the previous one."""
    return [
        _b(B2X4, 20, 20, 1, 0, "red"),
        _b(B2X4, 22, 21, 2, 1, "yellow"),
        _b(B2X4, 19, 23, 3, 0, "blue"),
        _b(B2X4, 19, 20, 4, 1, "green"),
        _b(B2X4, 20, 21, 5, 0, "white"),
    ]


def _pyramid() -> list[BrickPlacement]:
    """Three shrinking slabs: 8x8, 6x6, and a 2x4 cap (15 bricks)."""
    out = []
    base_colors = ["red", "red", "yellow", "yellow", "green", "green", "blue", "blue"]
    k = 0
    for y in (18, 20, 22, 24):
        for x in (18, 22):
            out.append(_b(B2X4, x, y, 1, 0, base_colors[k]))
            k += 1
    mid_colors = ["white", "orange", "white", "orange", "white", "orange"]
    k = 0
    for y in (19, 21, 23):
        out.append(_b(B2X4, 19, y, 2, 0, mid_colors[k]))
        out.append(_b(B2X2, 23, y, 2, 0, mid_colors[k + 1]))
        k += 2
    out.append(_b(B2X4, 20, 21, 3, 0, "pink"))
    return out


def _characters_ai() -> list[BrickPlacement]:
    """Flat letters A and I on the baseplate (10 bricks)."""
    return [
        # A
        _b(B1X6, 10, 10, 1, 1, "red"),
        _b(B1X6, 14, 10, 1, 1, "red"),
        _b(B1X4, 10, 16, 1, 0, "red"),
        _b(B1X2, 11, 12, 1, 0, "yellow"),
        # I
        _b(B1X4, 17, 10, 1, 0, "blue"),
        _b(B1X4, 17, 16, 1, 0, "blue"),
        _b(B1X2, 18, 12, 1, 1, "white"),
        _b(B1X2, 18, 14, 1, 1, "white"),
        _b(B1X2, 19, 12, 1, 1, "white"),
        _b(B1X2, 19, 14, 1, 1, "white"),
    ]


def _characters_ri() -> list[BrickPlacement]:
    """Flat letters R and I on the baseplate (12 bricks)."""
    return [
        # R
        _b(B1X6, 10, 10, 1, 1, "green"),
        _b(B1X4, 10, 16, 1, 0, "green"),
        _b(B1X2, 13, 14, 1, 1, "green"),
        _b(B1X2, 11, 13, 1, 0, "orange"),
        _b(B1X2, 12, 11, 1, 1, "green"),
        _b(B1X2, 13, 10, 1, 1, "green"),
        _b(B1X2, 11, 15, 1, 0, "orange"),
        # I
        _b(B1X4, 17, 10, 1, 0, "red"),
        _b(B1X4, 17, 16, 1, 0, "red"),
        _b(B1X2, 18, 12, 1, 1, "yellow"),
        _b(B1X2, 18, 14, 1, 1, "yellow"),
        _b(B1X2, 19, 12, 1, 1, "yellow"),
    ]


def _human() -> list[BrickPlacement]:
    """A standing figure: feet, legs, hips, torso, arms, hands, head (17)."""
    out = [
        _b(B1X2, 20, 19, 1, 1, "black"),
        _b(B1X2, 25, 19, 1, 1, "black"),
    ]
    for z in (2, 3):
        out.append(_b(B1X2, 20, 19, z, 1, "blue"))
        out.append(_b(B1X2, 25, 19, z, 1, "blue"))
    out += [
        _b(B1X6, 20, 19, 4, 0, "white"),
        _b(B2X4, 21, 19, 5, 0, "red"),
        _b(B2X4, 21, 19, 6, 0, "red"),
        _b(B1X8, 19, 19, 7, 0, "yellow"),
        _b(B1X2, 19, 19, 8, 1, "pink"),
        _b(B1X2, 26, 19, 8, 1, "pink"),
        _b(B1X2, 21, 19, 8, 1, "orange"),
        _b(B1X2, 24, 19, 8, 1, "orange"),
        _b(B2X2, 22, 19, 8, 0, "green"),
        _b(B2X2, 22, 19, 9, 0, "green"),
        _b(B2X2, 22, 19, 10, 0, "green"),
    ]
    return out


def _chair() -> list[BrickPlacement]:
    """Two side walls, a slatted seat, backrest, armrest, cushions (21)."""
    out = []
    for z in (1, 2):
        out.append(_b(B2X6, 16, 16, z, 1, "black"))
        out.append(_b(B2X6, 22, 16, z, 1, "black"))
    for y in range(16, 22):
        out.append(_b(B1X8, 16, y, 3, 0, "yellow"))
    for z in range(4, 9):
        out.append(_b(B1X6, 16, 16, z, 1, "red"))
    out += [
        _b(B1X6, 23, 16, 4, 1, "red"),
        _b(B2X4, 18, 17, 4, 1, "white"),
        _b(B2X4, 20, 17, 4, 1, "white"),
        _b(B1X6, 16, 16, 9, 1, "orange"),
        _b(B1X2, 16, 16, 10, 1, "green"),
        _b(B1X2, 16, 20, 10, 1, "green"),
    ]
    return out


def _bridge() -> list[BrickPlacement]:
    """Two towers and a pier carrying a two-lane deck with railings (19)."""
    out = []
    for z in range(1, 5):
        out.append(_b(B2X2, 14, 20, z, 0, "white"))
        out.append(_b(B2X2, 28, 20, z, 0, "white"))
        out.append(_b(B2X2, 21, 20, z, 0, "yellow"))
    out += [
        _b(B1X8, 14, 20, 5, 0, "red"),
        _b(B1X8, 22, 20, 5, 0, "red"),
        _b(B1X8, 14, 21, 5, 0, "red"),
        _b(B1X8, 22, 21, 5, 0, "red"),
        _b(B1X6, 16, 20, 6, 0, "blue"),
        _b(B1X6, 22, 21, 6, 0, "blue"),
        _b(B1X2, 14, 20, 6, 1, "orange"),
    ]
    return out


def _temple() -> list[BrickPlacement]:
    """Four columns, architraves, a two-slab roof, and an apex block (23)."""
    out = []
    col_colors = {16: "white", 22: "yellow"}
    for z in range(1, 5):
        for x in (16, 22):
            for y in (16, 22):
                out.append(_b(B2X2, x, y, z, 0, col_colors[x]))
    for y in (16, 17, 22, 23):
        out.append(_b(B1X8, 16, y, 5, 0, "red"))
    out += [
        _b(B2X6, 18, 16, 6, 1, "blue"),
        _b(B2X6, 20, 16, 6, 1, "blue"),
        _b(B2X2, 19, 18, 7, 0, "orange"),
    ]
    return out


_BUILDERS = {
    "ai": _characters_ai,
    "ri": _characters_ri,
    "human": _human,
    "chair": _chair,
    "spiral": _spiral,
    "bridge": _bridge,
    "pyramid": _pyramid,
    "temple": _temple,
}

#: Expected brick count per fixture.
FIXTURE_SIZES = {
    "ai": 10,
    "ri": 12,
    "human": 17,
    "chair": 21,
    "spiral": 5,
    "bridge": 19,
    "pyramid": 15,
    "temple": 23,
}


def fixture_names() -> list[str]:
    return list(_BUILDERS)


def fixture_events(name: str) -> tuple[BrickPlacement, ...]:
    try:
        builder = _BUILDERS[name]
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; available: {', '.join(_BUILDERS)}") from None
    return tuple(builder())


def fixture_trace(
    name: str,
    sensor: NoiseConfig = ZERO_NOISE,
    frames_per_state: int = 3,
    occlusion_frames_per_event: int = 2,
    bounds: Bounds = DEFAULT_BOUNDS,
) -> DemonstrationTrace:
    return DemonstrationTrace(
        events=fixture_events(name),
        sensor=sensor,
        frames_per_state=frames_per_state,
        occlusion_frames_per_event=occlusion_frames_per_event,
        bounds=bounds,
    )


def random_feasible_events(
    rng: np.random.Generator,
    n_events: int,
    bounds: Bounds = DEFAULT_BOUNDS,
    catalog: BrickCatalog = DEFAULT_CATALOG,
) -> tuple[BrickPlacement, ...]:
    """Random on-top placement sequence, clustered so structures stack.

    Square bricks always use omega=0: both orientations occupy the same
    cells, so the canonical one keeps generated traces learnable.
    """
    X, Y, Z = bounds
    asm = Assembly.empty(bounds, catalog)
    events: list[BrickPlacement] = []
    for _ in range(n_events):
        placed = False
        for _attempt in range(200):
            bt = catalog.entries[int(rng.integers(0, len(catalog)))]
            omega = 0 if bt.length == bt.width else int(rng.integers(0, 2))
            dx, dy = (bt.length, bt.width) if omega == 0 else (bt.width, bt.length)
            if events and rng.random() < 0.6:
                ref = events[int(rng.integers(0, len(events)))]
                x = int(np.clip(ref.x + int(rng.integers(-3, 4)), 1, X - dx + 1))
                y = int(np.clip(ref.y + int(rng.integers(-3, 4)), 1, Y - dy + 1))
            else:
                x = int(rng.integers(1, X - dx + 2))
                y = int(rng.integers(1, Y - dy + 2))
            top = asm.top_heights()[x - 1 : x - 1 + dx, y - 1 : y - 1 + dy]
            z = int(top.max()) + 1
            if z > Z:
                continue
            color = PALETTE[int(rng.integers(0, len(PALETTE)))]
            b = BrickPlacement((x, y, z), bt.id, omega, color)
            if asm.is_feasible(b):
                asm = asm.apply(b)
                events.append(b)
                placed = True
                break
        if not placed:
            break
    return tuple(events)


def validate_fixture(name: str) -> Assembly:
    """Replay a fixture through the feasibility check; returns the structure."""
    return build(fixture_events(name))
