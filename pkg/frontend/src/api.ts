/** Session API client. All mutations funnel through these calls. */

import type {
  FeasibilityDetail,
  PlacementJson,
  SessionOptions,
  StateSnapshot,
  StepOutcomeJson,
  TraceJson,
} from "./types.js";

export class PlacementRejected extends Error {
  constructor(public detail: FeasibilityDetail) {
    super(detail.message);
  }
}

export class SessionClient {
  constructor(
    private base: string = "",
    private fetchFn: typeof fetch = fetch,
  ) {}

  private async request(path: string, init?: RequestInit): Promise<Response> {
    const response = await this.fetchFn(`${this.base}${path}`, init);
    if (response.status === 404) throw new Error("stale session");
    return response;
  }

  async createSession(options: SessionOptions = {}): Promise<string> {
    const response = await this.request("/sessions", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(options),
    });
    if (!response.ok) throw new Error(`session create failed: ${response.status}`);
    const body = (await response.json()) as { id: string };
    return body.id;
  }

  async place(sessionId: string, placement: PlacementJson): Promise<StepOutcomeJson> {
    const response = await this.request(`/sessions/${sessionId}/place`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(placement),
    });
    if (response.status === 422) {
      const body = (await response.json()) as { detail: FeasibilityDetail };
      throw new PlacementRejected(body.detail);
    }
    if (!response.ok) {
      const body = await response.json().catch(() => ({ detail: { message: "server error" } }));
      throw new Error((body as { detail?: { message?: string } }).detail?.message ?? "place failed");
    }
    return (await response.json()) as StepOutcomeJson;
  }

  async state(sessionId: string): Promise<StateSnapshot> {
    const response = await this.request(`/sessions/${sessionId}/state`);
    if (!response.ok) throw new Error(`state failed: ${response.status}`);
    return (await response.json()) as StateSnapshot;
  }

  async trace(sessionId: string): Promise<TraceJson> {
    const response = await this.request(`/sessions/${sessionId}/trace`);
    if (!response.ok) throw new Error(`trace failed: ${response.status}`);
    return (await response.json()) as TraceJson;
  }

  /** Raw plan document; bytes are preserved verbatim for export. */
  async planBytes(sessionId: string, reversed = false): Promise<Uint8Array> {
    const suffix = reversed ? "?reversed=true" : "";
    const response = await this.request(`/sessions/${sessionId}/plan${suffix}`);
    if (!response.ok) throw new Error(`plan failed: ${response.status}`);
    return new Uint8Array(await response.arrayBuffer());
  }

  async deleteSession(sessionId: string): Promise<void> {
    await this.request(`/sessions/${sessionId}`, { method: "DELETE" });
  }
}
