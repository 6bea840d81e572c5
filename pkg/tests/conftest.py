from __future__ import annotations

import numpy as np
import pytest
from hypothesis import settings

from bricklearn.assembly import Assembly, BrickPlacement

settings.register_profile("ci", deadline=None)
settings.load_profile("ci")


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


@pytest.fixture
def small_tower() -> Assembly:
    """Three 2x4 bricks stacked straight up at (10, 10)."""
    asm = Assembly.empty()
    for z in (1, 2, 3):
        asm = asm.apply(BrickPlacement((10, 10, z), 6, 0, "red"))
    return asm


def make_placement(x: int, y: int, z: int, brick_id: int = 6, omega: int = 0, color: str = "red") -> BrickPlacement:
    return BrickPlacement((x, y, z), brick_id, omega, color)
