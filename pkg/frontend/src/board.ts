/** Pure board model derived from the server's state snapshot.
 *
 * The server stays authoritative: this module only computes what to draw
 * and pre-screens ghost previews for collisions so obviously-bad clicks do
 * not round-trip.
 */

import { brickExtent } from "./catalog.js";
import type { PlacementJson, StateSnapshot } from "./types.js";

export interface Cell {
  x: number;
  y: number;
  z: number;
}

export function footprintCells(p: PlacementJson): Cell[] {
  const { dx, dy } = brickExtent(p.brick, p.omega);
  const [x0, y0, z] = p.position;
  const cells: Cell[] = [];
  for (let i = 0; i < dx; i++) {
    for (let j = 0; j < dy; j++) {
      cells.push({ x: x0 + i, y: y0 + j, z });
    }
  }
  return cells;
}

const key = (x: number, y: number, z: number) => `${x},${y},${z}`;

/** Occupancy index over all placements in a snapshot. */
export function occupancy(state: StateSnapshot): Map<string, number> {
  const occ = new Map<string, number>();
  state.placements.forEach((p, idx) => {
    for (const c of footprintCells(p)) occ.set(key(c.x, c.y, c.z), idx);
  });
  return occ;
}

export function inBounds(state: StateSnapshot, p: PlacementJson): boolean {
  const [X, Y, Z] = state.bounds;
  return footprintCells(p).every(
    (c) => c.x >= 1 && c.x <= X && c.y >= 1 && c.y <= Y && c.z >= 1 && c.z <= Z,
  );
}

export function collides(state: StateSnapshot, p: PlacementJson): boolean {
  const occ = occupancy(state);
  return footprintCells(p).some((c) => occ.has(key(c.x, c.y, c.z)));
}

/** Height the brick would land at if dropped on top of the current stack. */
export function dropHeight(state: StateSnapshot, p: PlacementJson): number {
  const { dx, dy } = brickExtent(p.brick, p.omega);
  const [x0, y0] = p.position;
  let top = 0;
  for (let i = 0; i < dx; i++) {
    for (let j = 0; j < dy; j++) {
      const col = state.top_depth[x0 + i - 1]?.[y0 + j - 1] ?? 0;
      top = Math.max(top, col);
    }
  }
  return top + 1;
}

export interface LayerCell {
  x: number;
  y: number;
  color: string;
  index: number;
}

/** All cells occupied at one z layer, ready for the painter. */
export function layerCells(state: StateSnapshot, z: number): LayerCell[] {
  const out: LayerCell[] = [];
  state.placements.forEach((p, idx) => {
    if (p.position[2] !== z) return;
    for (const c of footprintCells(p)) {
      out.push({ x: c.x, y: c.y, color: p.color, index: idx });
    }
  });
  return out;
}

/** Cells below the selected layer, for a dimmed underlay. */
export function underlayCells(state: StateSnapshot, z: number): LayerCell[] {
  const seen = new Map<string, LayerCell>();
  state.placements.forEach((p, idx) => {
    if (p.position[2] >= z) return;
    for (const c of footprintCells(p)) {
      const k = `${c.x},${c.y}`;
      const existing = seen.get(k);
      if (!existing || c.z > (state.placements[existing.index]?.position[2] ?? 0)) {
        seen.set(k, { x: c.x, y: c.y, color: p.color, index: idx });
      }
    }
  });
  return [...seen.values()];
}

export type GhostVerdict = { ok: true; placement: PlacementJson } | { ok: false; reason: string };

/** Client-side pre-screen of a pending placement (server remains authoritative). */
export function ghostPreview(
  state: StateSnapshot,
  brick: string,
  omega: 0 | 1,
  x: number,
  y: number,
  z: number,
  color: string,
): GhostVerdict {
  const placement: PlacementJson = { brick, omega, position: [x, y, z], color };
  if (!inBounds(state, placement)) return { ok: false, reason: "out of bounds" };
  if (collides(state, placement)) return { ok: false, reason: "collides with existing bricks" };
  return { ok: true, placement };
}
