/**
 * Cross-component parity: a scripted session drives the real backend through
 * the same client and export path the UI uses, placing the 5-brick spiral;
 * the exported plan must be byte-identical to what the CLI batch learner
 * writes for the equivalent trace at zero noise.
 */

import { spawn, spawnSync, type ChildProcess } from "node:child_process";
import { mkdtempSync, readFileSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { PlacementRejected, SessionClient } from "../src/api.js";
import { fetchPlanForExport } from "../src/exporter.js";
import type { PlacementJson } from "../src/types.js";

const PORT = 8931;
const BASE = `http://127.0.0.1:${PORT}`;
const REPO_ROOT = join(dirname(fileURLToPath(import.meta.url)), "..", "..");

// The spiral fixture: five 2x4 plates winding upward. Byte-level parity with
// the CLI output guards this list against drifting from the backend's.
const SPIRAL: PlacementJson[] = [
  { brick: "2x4", omega: 0, position: [20, 20, 1], color: "red" },
  { brick: "2x4", omega: 1, position: [22, 21, 2], color: "yellow" },
  { brick: "2x4", omega: 0, position: [19, 23, 3], color: "blue" },
  { brick: "2x4", omega: 1, position: [19, 20, 4], color: "green" },
  { brick: "2x4", omega: 0, position: [20, 21, 5], color: "white" },
];

let server: ChildProcess | null = null;
let workdir: string;

async function waitForServer(client: SessionClient, attempts = 60): Promise<void> {
  for (let i = 0; i < attempts; i++) {
    try {
      const id = await client.createSession({});
      await client.deleteSession(id);
      return;
    } catch {
      await new Promise((resolve) => setTimeout(resolve, 250));
    }
  }
  throw new Error("backend did not come up");
}

beforeAll(async () => {
  workdir = mkdtempSync(join(tmpdir(), "bricklearn-ui-"));
  server = spawn("python3", ["-m", "bricklearn.cli", "serve", "--port", String(PORT)], {
    cwd: REPO_ROOT,
    stdio: "ignore",
  });
  await waitForServer(new SessionClient(BASE));
}, 30_000);

afterAll(() => {
  server?.kill();
  rmSync(workdir, { recursive: true, force: true });
});

describe("scripted session parity with the CLI", () => {
  it(
    "exports a plan byte-identical to batch learning of the same trace",
    async () => {
      const client = new SessionClient(BASE);
      const sessionId = await client.createSession({});
      for (const placement of SPIRAL) {
        const outcome = await client.place(sessionId, placement);
        expect(outcome.divergent).toBe(false);
        expect(outcome.via).toBe("threshold");
      }
      const { bytes } = await fetchPlanForExport(client, sessionId, false);

      const planFile = join(workdir, "cli-plan.json");
      const cli = spawnSync(
        "python3",
        ["-m", "bricklearn.cli", "learn", "--trace", "spiral", "--out", planFile],
        { cwd: REPO_ROOT },
      );
      expect(cli.status).toBe(0);
      const cliBytes = new Uint8Array(readFileSync(planFile));
      expect(bytes.length).toBe(cliBytes.length);
      expect([...bytes]).toEqual([...cliBytes]);
    },
    60_000,
  );

  it(
    "surfaces feasibility violations without mutating the board",
    async () => {
      const client = new SessionClient(BASE);
      const sessionId = await client.createSession({});
      const floating: PlacementJson = { brick: "2x4", omega: 0, position: [10, 10, 7], color: "red" };
      await expect(client.place(sessionId, floating)).rejects.toThrowError(PlacementRejected);
      const state = await client.state(sessionId);
      expect(state.placements).toEqual([]);
      const trace = await client.trace(sessionId);
      expect(trace.steps).toEqual([]);
    },
    30_000,
  );

  it(
    "reversed export is the disassembly of the session plan",
    async () => {
      const client = new SessionClient(BASE);
      const sessionId = await client.createSession({});
      for (const placement of SPIRAL.slice(0, 3)) await client.place(sessionId, placement);
      const { bytes } = await fetchPlanForExport(client, sessionId, true);
      const doc = JSON.parse(new TextDecoder().decode(bytes)) as {
        tasks: { action: string; position: number[] }[];
      };
      expect(doc.tasks.map((t) => t.action)).toEqual(["disassemble", "disassemble", "disassemble"]);
      expect(doc.tasks[0].position).toEqual(SPIRAL[2].position);
      expect(doc.tasks[2].position).toEqual(SPIRAL[0].position);
    },
    30_000,
  );
});
