"""Brick catalog and color palette for the discrete construction workspace."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class BrickType:
    """One available brick shape. ``length`` is the long axis in studs."""

    id: int
    name: str
    length: int
    width: int

    @property
    def stud_count(self) -> int:
        return self.length * self.width


@dataclass(frozen=True)
class BrickCatalog:
    entries: tuple[BrickType, ...]

    def __post_init__(self) -> None:
        ids = [e.id for e in self.entries]
        if len(self.entries) < 7:
            raise ValueError(f"catalog needs at least 7 brick types, got {len(self.entries)}")
        if ids != list(range(1, len(ids) + 1)):
            raise ValueError(f"catalog ids must be unique and contiguous from 1, got {ids}")
        for e in self.entries:
            if e.length < 1 or e.width < 1:
                raise ValueError(f"brick {e.name} has non-positive dims")

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def get(self, brick_id: int) -> BrickType:
        if not 1 <= brick_id <= len(self.entries):
            raise UnknownBrickError(f"unknown brick id {brick_id} (catalog has 1..{len(self.entries)})")
        return self.entries[brick_id - 1]

    def by_name(self, name: str) -> BrickType:
        for e in self.entries:
            if e.name == name:
                return e
        raise UnknownBrickError(f"unknown brick name {name!r}")


class UnknownBrickError(ValueError):
    """Raised for a brick id or name that is not in the catalog."""


def _entry(brick_id: int, width: int, length: int) -> BrickType:
    return BrickType(id=brick_id, name=f"{width}x{length}", length=length, width=width)


#: The stock set of rectangular bricks, ids 1..7.
DEFAULT_CATALOG = BrickCatalog(
    (
        _entry(1, 1, 2),
        _entry(2, 1, 4),
        _entry(3, 1, 6),
        _entry(4, 1, 8),
        _entry(5, 2, 2),
        _entry(6, 2, 4),
        _entry(7, 2, 6),
    )
)

#: Enumerated color palette. Grid code 0 is reserved for background;
#: palette entries map to codes 1..len(PALETTE) in order.
PALETTE: tuple[str, ...] = ("red", "yellow", "blue", "green", "black", "white", "pink", "orange")

#: Colors that can blend into the dark baseplate under the sensor's
#: dark-color dropout mode.
DARK_COLORS: frozenset[str] = frozenset({"black", "blue"})

BACKGROUND = 0

_CODE_BY_NAME = {name: i + 1 for i, name in enumerate(PALETTE)}


def color_code(name: str) -> int:
    """Palette color name to grid code (1-based; background is 0)."""
    try:
        return _CODE_BY_NAME[name]
    except KeyError:
        raise ValueError(f"unknown color {name!r}; palette is {PALETTE}") from None


def color_name(code: int) -> str:
    if code == BACKGROUND:
        return "background"
    if not 1 <= code <= len(PALETTE):
        raise ValueError(f"color code {code} out of range")
    return PALETTE[code - 1]
