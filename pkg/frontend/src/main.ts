/** App wiring: palette controls, board interaction, learning panel, export. */

import { PlacementRejected, SessionClient } from "./api.js";
import { dropHeight, ghostPreview, layerCells, underlayCells } from "./board.js";
import { BRICK_NAMES, PALETTE, SWATCHES, brickExtent } from "./catalog.js";
import { fetchPlanForExport, triggerDownload } from "./exporter.js";
import { panelRows } from "./panel.js";
import { BoardCanvas } from "./render.js";
import type { StateSnapshot } from "./types.js";

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing #${id}`);
  return el as T;
};

const client = new SessionClient("");

let sessionId: string | null = null;
let state: StateSnapshot | null = null;
let board: BoardCanvas | null = null;
let layerZ = 1;
let hover: { x: number; y: number } | null = null;
let autoDrop = true;

const brickSelect = $<HTMLSelectElement>("brick");
const omegaButton = $<HTMLButtonElement>("omega");
const colorBox = $<HTMLDivElement>("colors");
const layerSlider = $<HTMLInputElement>("layer");
const layerLabel = $<HTMLSpanElement>("layer-label");
const statusLine = $<HTMLDivElement>("status");
const banner = $<HTMLDivElement>("banner");
const panelBody = $<HTMLTableSectionElement>("panel-body");
const exportBtn = $<HTMLButtonElement>("export");
const exportRevBtn = $<HTMLButtonElement>("export-reversed");
const noiseToggle = $<HTMLInputElement>("noise");
const newSessionBtn = $<HTMLButtonElement>("new-session");

let omega: 0 | 1 = 0;
let color: string = PALETTE[0];

function setBanner(text: string | null): void {
  banner.textContent = text ?? "";
  banner.style.display = text ? "block" : "none";
}

function setStatus(text: string): void {
  statusLine.textContent = text;
}

function refreshControls(): void {
  omegaButton.textContent = omega === 0 ? "length along x" : "length along y";
  const hasSteps = panelBody.childElementCount > 0;
  exportBtn.disabled = !hasSteps;
  exportRevBtn.disabled = !hasSteps;
  layerLabel.textContent = `z = ${layerZ}`;
}

function drawBoard(): void {
  if (!board || !state) return;
  let ghost = null;
  if (hover) {
    const z = autoDrop ? dropHeight(state, placementAt(hover.x, hover.y, 1)) : layerZ;
    const verdict = ghostPreview(state, brickSelect.value, omega, hover.x, hover.y, z, color);
    const { dx, dy } = brickExtent(brickSelect.value, omega);
    const cells = [];
    for (let i = 0; i < dx; i++) for (let j = 0; j < dy; j++) cells.push({ x: hover.x + i, y: hover.y + j });
    ghost = { cells, valid: verdict.ok };
  }
  board.draw(layerCells(state, layerZ), underlayCells(state, layerZ), ghost);
}

function placementAt(x: number, y: number, z: number) {
  return { brick: brickSelect.value, omega, position: [x, y, z] as [number, number, number], color };
}

async function refreshState(): Promise<void> {
  if (!sessionId) return;
  state = await client.state(sessionId);
  if (!board) {
    const canvas = $<HTMLCanvasElement>("board");
    board = new BoardCanvas(canvas, state.bounds[0], state.bounds[1], 14);
    canvas.addEventListener("mousemove", (ev) => {
      hover = board!.cellAt(ev.clientX, ev.clientY);
      drawBoard();
    });
    canvas.addEventListener("mouseleave", () => {
      hover = null;
      drawBoard();
    });
    canvas.addEventListener("click", (ev) => void onPlace(ev));
    layerSlider.max = String(state.bounds[2]);
  }
  drawBoard();
}

async function refreshPanel(): Promise<void> {
  if (!sessionId) return;
  const trace = await client.trace(sessionId);
  panelBody.replaceChildren(
    ...panelRows(trace).map((row) => {
      const tr = document.createElement("tr");
      if (row.divergent) tr.className = "divergent";
      const cells = [
        String(row.step),
        row.demonstrated,
        row.accepted,
        row.score,
        row.via,
        String(row.trialCount),
      ];
      for (const text of cells) {
        const td = document.createElement("td");
        td.textContent = text;
        tr.appendChild(td);
      }
      if (row.error) tr.title = row.error;
      return tr;
    }),
  );
  refreshControls();
}

async function onPlace(ev: MouseEvent): Promise<void> {
  if (!board || !state || !sessionId) return;
  const cell = board.cellAt(ev.clientX, ev.clientY);
  const z = autoDrop ? dropHeight(state, placementAt(cell.x, cell.y, 1)) : layerZ;
  const verdict = ghostPreview(state, brickSelect.value, omega, cell.x, cell.y, z, color);
  if (!verdict.ok) {
    setStatus(`rejected locally: ${verdict.reason}`);
    return;
  }
  try {
    const outcome = await client.place(sessionId, verdict.placement);
    layerZ = z;
    layerSlider.value = String(z);
    setStatus(
      outcome.via === "unverified"
        ? `step ${outcome.step} recorded (verification off)`
        : `step ${outcome.step}: s=${outcome.s?.toFixed(3)} via ${outcome.via}, ${outcome.trials.length} trial(s)`,
    );
    setBanner(null);
    await refreshState();
    await refreshPanel();
  } catch (err) {
    if (err instanceof PlacementRejected) {
      setStatus(`infeasible: ${err.detail.kind}: ${err.detail.message}`);
    } else if ((err as Error).message === "stale session") {
      setBanner("Session expired. Start a new session to continue.");
    } else {
      setBanner(`Network problem: ${(err as Error).message}. Click to retry.`);
    }
  }
}

async function newSession(): Promise<void> {
  try {
    const options = noiseToggle.checked
      ? { noise: { sigma_d: 0.12, sigma_b: 0.05, p_dark: 0.05, p_flip: 0.01 }, seed: Date.now() % 100000 }
      : {};
    sessionId = await client.createSession(options);
    state = null;
    layerZ = 1;
    layerSlider.value = "1";
    panelBody.replaceChildren();
    setBanner(null);
    setStatus(`session ${sessionId} started${noiseToggle.checked ? " (noisy sensor)" : ""}`);
    await refreshState();
    refreshControls();
  } catch (err) {
    setBanner(`Could not start a session: ${(err as Error).message}`);
  }
}

function wireControls(): void {
  for (const name of BRICK_NAMES) {
    const opt = document.createElement("option");
    opt.value = name;
    opt.textContent = name;
    brickSelect.appendChild(opt);
  }
  brickSelect.value = "2x4";

  for (const c of PALETTE) {
    const chip = document.createElement("button");
    chip.className = "chip";
    chip.style.background = SWATCHES[c];
    chip.title = c;
    chip.addEventListener("click", () => {
      color = c;
      [...colorBox.children].forEach((el) => el.classList.remove("selected"));
      chip.classList.add("selected");
      drawBoard();
    });
    colorBox.appendChild(chip);
  }
  (colorBox.firstElementChild as HTMLElement | null)?.classList.add("selected");

  omegaButton.addEventListener("click", () => {
    omega = omega === 0 ? 1 : 0;
    refreshControls();
    drawBoard();
  });
  layerSlider.addEventListener("input", () => {
    layerZ = Number(layerSlider.value);
    autoDrop = false;
    refreshControls();
    drawBoard();
  });
  $<HTMLInputElement>("autodrop").addEventListener("change", (ev) => {
    autoDrop = (ev.target as HTMLInputElement).checked;
  });
  exportBtn.addEventListener("click", () => void doExport(false));
  exportRevBtn.addEventListener("click", () => void doExport(true));
  newSessionBtn.addEventListener("click", () => void newSession());
}

async function doExport(reversed: boolean): Promise<void> {
  if (!sessionId) return;
  try {
    const { filename, bytes } = await fetchPlanForExport(client, sessionId, reversed);
    triggerDownload(filename, bytes);
  } catch (err) {
    setBanner(`Export failed: ${(err as Error).message}`);
  }
}

wireControls();
refreshControls();
void newSession();
