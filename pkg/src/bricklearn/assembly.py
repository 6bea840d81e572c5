"""Discrete workspace model: brick placements, occupancy grid, feasibility.

Coordinate conventions:
- Cells are 1-based: x in [1..X], y in [1..Y], z in [1..Z] (studs, studs,
  brick heights). z=1 sits on the baseplate.
- A placement's anchor is the minimum-coordinate stud of its footprint.
- omega=0 lays the brick's length axis along x, omega=1 along y.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .catalog import DEFAULT_CATALOG, BrickCatalog, color_code

Cell = tuple[int, int, int]
Bounds = tuple[int, int, int]

DEFAULT_BOUNDS: Bounds = (48, 48, 24)


@dataclass(frozen=True)
class BrickPlacement:
    """One brick operation: anchor cell, catalog type, orientation, color."""

    p: Cell
    brick_id: int
    omega: int
    color: str

    def __post_init__(self) -> None:
        if self.omega not in (0, 1):
            raise ValueError(f"omega must be 0 or 1, got {self.omega}")
        color_code(self.color)  # validates

    @property
    def x(self) -> int:
        return self.p[0]

    @property
    def y(self) -> int:
        return self.p[1]

    @property
    def z(self) -> int:
        return self.p[2]

    def sort_key(self) -> tuple:
        return (self.z, self.y, self.x, self.brick_id, self.omega, self.color)


def xy_extent(catalog: BrickCatalog, brick_id: int, omega: int) -> tuple[int, int]:
    """Stud extents (dx, dy) of a brick type at the given orientation."""
    bt = catalog.get(brick_id)
    if omega not in (0, 1):
        raise ValueError(f"omega must be 0 or 1, got {omega}")
    return (bt.length, bt.width) if omega == 0 else (bt.width, bt.length)


def footprint(
    brick_id: int,
    omega: int,
    p: Cell,
    catalog: BrickCatalog = DEFAULT_CATALOG,
) -> frozenset[Cell]:
    """Set of cells the brick occupies; the anchor is the minimum corner."""
    dx, dy = xy_extent(catalog, brick_id, omega)
    x, y, z = p
    return frozenset((x + i, y + j, z) for i in range(dx) for j in range(dy))


def placement_footprint(b: BrickPlacement, catalog: BrickCatalog = DEFAULT_CATALOG) -> frozenset[Cell]:
    return footprint(b.brick_id, b.omega, b.p, catalog)


@dataclass(frozen=True)
class Feasibility:
    """Verdict of a placement check. Offending cells are named on failure."""

    ok: bool
    kind: str | None = None
    cells: tuple[Cell, ...] = ()

    OUT_OF_BOUNDS = "out_of_bounds"
    COLLISION = "collision"
    UNSUPPORTED = "unsupported"

    def __bool__(self) -> bool:
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return "ok"
        return f"{self.kind} at cells {sorted(self.cells)}"


FEASIBLE = Feasibility(ok=True)


class InfeasiblePlacement(Exception):
    """Raised when applying a placement that fails the feasibility check."""

    def __init__(self, verdict: Feasibility, placement: BrickPlacement):
        self.verdict = verdict
        self.placement = placement
        super().__init__(f"infeasible placement {placement}: {verdict.describe()}")


class Assembly:
    """An ordered set of placements with a derived occupancy grid.

    Immutable: ``apply`` returns a new Assembly and leaves the original
    untouched, so assemblies are safe to share across threads.
    """

    __slots__ = ("bounds", "catalog", "placements", "_occ", "_top_z", "_top_idx")

    def __init__(
        self,
        bounds: Bounds = DEFAULT_BOUNDS,
        catalog: BrickCatalog = DEFAULT_CATALOG,
        _placements: tuple[BrickPlacement, ...] = (),
        _occ: np.ndarray | None = None,
        _top_z: np.ndarray | None = None,
        _top_idx: np.ndarray | None = None,
    ):
        X, Y, Z = bounds
        if X < 1 or Y < 1 or Z < 1:
            raise ValueError(f"bounds must be positive, got {bounds}")
        self.bounds = bounds
        self.catalog = catalog
        self.placements = _placements
        if _occ is None:
            _occ = np.zeros((X, Y, Z), dtype=np.int32)
            _top_z = np.zeros((X, Y), dtype=np.int32)
            _top_idx = np.full((X, Y), -1, dtype=np.int32)
        self._occ = _occ
        self._top_z = _top_z
        self._top_idx = _top_idx
        for a in (self._occ, self._top_z, self._top_idx):
            a.setflags(write=False)

    @classmethod
    def empty(cls, bounds: Bounds = DEFAULT_BOUNDS, catalog: BrickCatalog = DEFAULT_CATALOG) -> "Assembly":
        return cls(bounds, catalog)

    def __len__(self) -> int:
        return len(self.placements)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Assembly):
            return NotImplemented
        return self.bounds == other.bounds and self.placements == other.placements

    def __hash__(self) -> int:
        return hash((self.bounds, self.placements))

    def __repr__(self) -> str:
        return f"Assembly(bounds={self.bounds}, n={len(self.placements)})"

    # -- grid access ------------------------------------------------------

    def occupant(self, cell: Cell) -> int | None:
        """Index of the placement occupying the cell, or None."""
        x, y, z = cell
        v = int(self._occ[x - 1, y - 1, z - 1])
        return v - 1 if v else None

    def occupancy(self) -> np.ndarray:
        """Read-only (X, Y, Z) grid of placement index + 1 (0 = empty)."""
        return self._occ

    def top_heights(self) -> np.ndarray:
        """Read-only (X, Y) grid of the highest occupied z per column (0 = none)."""
        return self._top_z

    def top_placement_indices(self) -> np.ndarray:
        """Read-only (X, Y) grid of the topmost placement index (-1 = none)."""
        return self._top_idx

    # -- feasibility ------------------------------------------------------

    def _extent_slices(self, b: BrickPlacement) -> tuple[slice, slice, int]:
        dx, dy = xy_extent(self.catalog, b.brick_id, b.omega)
        return slice(b.x - 1, b.x - 1 + dx), slice(b.y - 1, b.y - 1 + dy), b.z - 1

    def is_feasible(self, b: BrickPlacement) -> Feasibility:
        """Check bounds, collision, and support for one placement.

        A brick is supported on the baseplate (z=1) or through at least one
        stud connection to an occupied cell directly below or directly above
        any footprint cell (bricks attach from below or from above).
        """
        X, Y, Z = self.bounds
        dx, dy = xy_extent(self.catalog, b.brick_id, b.omega)
        cells = [(b.x + i, b.y + j, b.z) for i in range(dx) for j in range(dy)]
        outside = tuple(
            (x, y, z) for (x, y, z) in cells if not (1 <= x <= X and 1 <= y <= Y and 1 <= z <= Z)
        )
        if outside:
            return Feasibility(False, Feasibility.OUT_OF_BOUNDS, outside)

        xs, ys, zi = self._extent_slices(b)
        block = self._occ[xs, ys, zi]
        if block.any():
            hit = np.argwhere(block)
            colliding = tuple((b.x + int(i), b.y + int(j), b.z) for i, j in hit)
            return Feasibility(False, Feasibility.COLLISION, colliding)

        if b.z == 1:
            return FEASIBLE
        below = self._occ[xs, ys, zi - 1].any()
        above = b.z < Z and self._occ[xs, ys, zi + 1].any()
        if below or above:
            return FEASIBLE
        return Feasibility(False, Feasibility.UNSUPPORTED, tuple(cells))

    # -- mutation by value ------------------------------------------------

    def apply(self, b: BrickPlacement) -> "Assembly":
        """Return a new assembly with ``b`` appended. Raises if infeasible."""
        verdict = self.is_feasible(b)
        if not verdict:
            raise InfeasiblePlacement(verdict, b)
        occ = self._occ.copy()
        top_z = self._top_z.copy()
        top_idx = self._top_idx.copy()
        idx = len(self.placements)
        xs, ys, zi = self._extent_slices(b)
        occ[xs, ys, zi] = idx + 1
        newtop = top_z[xs, ys] < b.z
        top_z[xs, ys] = np.where(newtop, b.z, top_z[xs, ys])
        top_idx[xs, ys] = np.where(newtop, idx, top_idx[xs, ys])
        return Assembly(
            self.bounds,
            self.catalog,
            self.placements + (b,),
            occ,
            top_z,
            top_idx,
        )

    def remove_last(self, expected: BrickPlacement | None = None) -> "Assembly":
        """Return a new assembly with the most recent placement removed.

        Disassembly proceeds strictly in reverse placement order, so only
        removing the last placement keeps every remaining brick supported.
        """
        if not self.placements:
            raise ValueError("cannot remove from an empty assembly")
        last = self.placements[-1]
        if expected is not None and expected != last:
            raise ValueError(f"expected to remove {expected}, but last placement is {last}")
        out = Assembly.empty(self.bounds, self.catalog)
        for b in self.placements[:-1]:
            out = out.apply(b)
        return out


def build(
    placements,
    bounds: Bounds = DEFAULT_BOUNDS,
    catalog: BrickCatalog = DEFAULT_CATALOG,
) -> Assembly:
    """Apply a sequence of placements to an empty workspace."""
    asm = Assembly.empty(bounds, catalog)
    for b in placements:
        asm = asm.apply(b)
    return asm
