import { describe, expect, it } from "vitest";

import { describePlacement, panelRows } from "../src/panel.js";
import type { TraceJson } from "../src/types.js";

const trace: TraceJson = {
  steps: [
    {
      step: 1,
      demonstrated: { brick: "2x4", omega: 0, position: [10, 10, 1], color: "red" },
      accepted: { brick: "2x4", omega: 0, position: [10, 10, 1], color: "red" },
      divergent: false,
      s: 1.0,
      via: "threshold",
      trials: [{ placement: { brick: "2x4", omega: 0, position: [10, 10, 1], color: "red" }, s: 1.0 }],
      skips: [],
    },
    {
      step: 2,
      demonstrated: { brick: "1x4", omega: 1, position: [5, 5, 1], color: "blue" },
      accepted: { brick: "1x4", omega: 1, position: [5, 6, 1], color: "blue" },
      divergent: true,
      s: 0.87,
      via: "argmax-fallback",
      trials: [
        { placement: { brick: "1x4", omega: 1, position: [5, 6, 1], color: "blue" }, s: 0.87 },
        { placement: { brick: "1x4", omega: 1, position: [5, 5, 1], color: "blue" }, s: 0.81 },
      ],
      skips: [],
    },
    {
      step: 3,
      demonstrated: { brick: "1x2", omega: 0, position: [20, 20, 1], color: "green" },
      accepted: null,
      divergent: true,
      s: null,
      via: "failed",
      trials: [],
      skips: [],
      error: "no operation detected: empty change region",
    },
  ],
};

describe("panelRows", () => {
  it("produces one row per server step", () => {
    expect(panelRows(trace)).toHaveLength(trace.steps.length);
  });

  it("marks divergent rows and counts trials", () => {
    const rows = panelRows(trace);
    expect(rows[0].divergent).toBe(false);
    expect(rows[1].divergent).toBe(true);
    expect(rows[1].trialCount).toBe(2);
    expect(rows[1].score).toBe("0.870");
    expect(rows[1].via).toBe("argmax-fallback");
  });

  it("surfaces missed steps with their error", () => {
    const rows = panelRows(trace);
    expect(rows[2].accepted).toBe("(missed)");
    expect(rows[2].score).toBe("-");
    expect(rows[2].error).toMatch(/empty change region/);
  });
});

describe("describePlacement", () => {
  it("is human readable", () => {
    expect(describePlacement({ brick: "2x6", omega: 1, position: [3, 4, 2], color: "pink" })).toBe(
      "pink 2x6 along y @ (3, 4, 2)",
    );
  });
});
