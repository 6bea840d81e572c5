/** Brick shapes and palette colors, mirroring the server's catalog. */

export const BRICK_NAMES = ["1x2", "1x4", "1x6", "1x8", "2x2", "2x4", "2x6"] as const;

export type BrickName = (typeof BRICK_NAMES)[number];

export const PALETTE = [
  "red",
  "yellow",
  "blue",
  "green",
  "black",
  "white",
  "pink",
  "orange",
] as const;

export const SWATCHES: Record<string, string> = {
  red: "#d0342c",
  yellow: "#f5c518",
  blue: "#2c5fd0",
  green: "#2c9a44",
  black: "#20242a",
  white: "#f2f0e8",
  pink: "#e88bc4",
  orange: "#e8842c",
};

/** Stud dimensions of a brick name: "WxL" is width x length. */
export function brickDims(name: string): { width: number; length: number } {
  const m = /^(\d+)x(\d+)$/.exec(name);
  if (!m) throw new Error(`bad brick name: ${name}`);
  return { width: Number(m[1]), length: Number(m[2]) };
}

/** Grid extent (dx, dy) of a brick for an orientation (omega 0 = length along x). */
export function brickExtent(name: string, omega: 0 | 1): { dx: number; dy: number } {
  const { width, length } = brickDims(name);
  return omega === 0 ? { dx: length, dy: width } : { dx: width, dy: length };
}
