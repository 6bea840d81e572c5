/** Canvas painter for the layered board view. */

import { SWATCHES } from "./catalog.js";
import type { LayerCell } from "./board.js";

export interface GhostCells {
  cells: { x: number; y: number }[];
  valid: boolean;
}

export class BoardCanvas {
  private ctx: CanvasRenderingContext2D;

  constructor(
    private canvas: HTMLCanvasElement,
    private cols: number,
    private rows: number,
    private cellPx: number,
  ) {
    canvas.width = cols * cellPx;
    canvas.height = rows * cellPx;
    const ctx = canvas.getContext("2d");
    if (!ctx) throw new Error("canvas 2d context unavailable");
    this.ctx = ctx;
  }

  cellAt(clientX: number, clientY: number): { x: number; y: number } {
    const rect = this.canvas.getBoundingClientRect();
    const px = ((clientX - rect.left) / rect.width) * this.canvas.width;
    const py = ((clientY - rect.top) / rect.height) * this.canvas.height;
    return {
      x: Math.min(this.cols, Math.max(1, Math.floor(px / this.cellPx) + 1)),
      y: Math.min(this.rows, Math.max(1, Math.floor(py / this.cellPx) + 1)),
    };
  }

  draw(layer: LayerCell[], underlay: LayerCell[], ghost: GhostCells | null): void {
    const { ctx, cellPx } = this;
    ctx.clearRect(0, 0, this.canvas.width, this.canvas.height);

    ctx.fillStyle = "#2f6b33";
    ctx.fillRect(0, 0, this.canvas.width, this.canvas.height);

    ctx.globalAlpha = 0.35;
    for (const c of underlay) this.fillCell(c.x, c.y, SWATCHES[c.color] ?? "#888");
    ctx.globalAlpha = 1.0;
    for (const c of layer) this.fillCell(c.x, c.y, SWATCHES[c.color] ?? "#888", true);

    if (ghost) {
      ctx.globalAlpha = 0.55;
      for (const c of ghost.cells) this.fillCell(c.x, c.y, ghost.valid ? "#ffffff" : "#ff3030");
      ctx.globalAlpha = 1.0;
    }

    ctx.strokeStyle = "rgba(0, 0, 0, 0.25)";
    ctx.lineWidth = 1;
    ctx.beginPath();
    for (let i = 0; i <= this.cols; i++) {
      ctx.moveTo(i * cellPx, 0);
      ctx.lineTo(i * cellPx, this.canvas.height);
    }
    for (let j = 0; j <= this.rows; j++) {
      ctx.moveTo(0, j * cellPx);
      ctx.lineTo(this.canvas.width, j * cellPx);
    }
    ctx.stroke();
  }

  private fillCell(x: number, y: number, fill: string, stud = false): void {
    const { ctx, cellPx } = this;
    ctx.fillStyle = fill;
    ctx.fillRect((x - 1) * cellPx, (y - 1) * cellPx, cellPx, cellPx);
    if (stud) {
      ctx.beginPath();
      ctx.arc((x - 0.5) * cellPx, (y - 0.5) * cellPx, cellPx * 0.22, 0, Math.PI * 2);
      ctx.strokeStyle = "rgba(0, 0, 0, 0.35)";
      ctx.stroke();
    }
  }
}
