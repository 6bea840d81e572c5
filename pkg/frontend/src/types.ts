/** Wire formats of the session API. Field names mirror the server exactly. */

export interface PlacementJson {
  brick: string;
  omega: 0 | 1;
  position: [number, number, number];
  color: string;
}

export interface TrialJson {
  placement: PlacementJson;
  s: number;
}

export interface SkipJson {
  placement: PlacementJson;
  reason: string;
}

export interface StepOutcomeJson {
  step: number;
  demonstrated?: PlacementJson;
  accepted: PlacementJson | null;
  divergent: boolean;
  s: number | null;
  via: string;
  trials: TrialJson[];
  skips: SkipJson[];
  error?: string;
}

export interface TraceJson {
  steps: StepOutcomeJson[];
}

export interface StateSnapshot {
  bounds: [number, number, number];
  palette: string[];
  placements: PlacementJson[];
  top_depth: number[][];
  top_color: (string | null)[][];
}

export interface FeasibilityDetail {
  kind: string;
  cells?: number[][];
  message: string;
}

export interface SessionOptions {
  noise?: {
    sigma_d?: number;
    sigma_b?: number;
    p_dark?: number;
    p_flip?: number;
    seed?: number;
  };
  verification?: boolean;
  seed?: number;
}
