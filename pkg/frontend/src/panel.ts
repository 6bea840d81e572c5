/** Learning panel rows: one line per step, mirroring the server trace. */

import type { PlacementJson, StepOutcomeJson, TraceJson } from "./types.js";

export interface PanelRow {
  step: number;
  demonstrated: string;
  accepted: string;
  score: string;
  via: string;
  trialCount: number;
  divergent: boolean;
  error?: string;
}

export function describePlacement(p: PlacementJson | null | undefined): string {
  if (!p) return "(missed)";
  const [x, y, z] = p.position;
  const orient = p.omega === 0 ? "along x" : "along y";
  return `${p.color} ${p.brick} ${orient} @ (${x}, ${y}, ${z})`;
}

export function panelRows(trace: TraceJson): PanelRow[] {
  return trace.steps.map((s: StepOutcomeJson) => ({
    step: s.step,
    demonstrated: describePlacement(s.demonstrated),
    accepted: describePlacement(s.accepted),
    score: s.s === null ? "-" : s.s.toFixed(3),
    via: s.via,
    trialCount: s.trials.length,
    divergent: s.divergent,
    error: s.error,
  }));
}
