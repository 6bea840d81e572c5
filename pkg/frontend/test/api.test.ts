import { describe, expect, it } from "vitest";

import { PlacementRejected, SessionClient } from "../src/api.js";

type Handler = (url: string, init?: RequestInit) => Response;

function fakeFetch(handler: Handler): typeof fetch {
  return (async (input: RequestInfo | URL, init?: RequestInit) =>
    handler(String(input), init)) as typeof fetch;
}

const placement = { brick: "2x4", omega: 0 as const, position: [1, 1, 1] as [number, number, number], color: "red" };

describe("SessionClient", () => {
  it("creates sessions", async () => {
    const client = new SessionClient(
      "http://x",
      fakeFetch((url, init) => {
        expect(url).toBe("http://x/sessions");
        expect(init?.method).toBe("POST");
        return new Response(JSON.stringify({ id: "abc123" }), { status: 200 });
      }),
    );
    expect(await client.createSession()).toBe("abc123");
  });

  it("raises PlacementRejected with the feasibility verdict on 422", async () => {
    const client = new SessionClient(
      "",
      fakeFetch(() =>
        new Response(
          JSON.stringify({ detail: { kind: "unsupported", cells: [[1, 1, 5]], message: "unsupported at cells" } }),
          { status: 422 },
        ),
      ),
    );
    await expect(client.place("s", placement)).rejects.toThrowError(PlacementRejected);
    try {
      await client.place("s", placement);
    } catch (err) {
      expect((err as PlacementRejected).detail.kind).toBe("unsupported");
    }
  });

  it("flags stale sessions on 404", async () => {
    const client = new SessionClient("", fakeFetch(() => new Response("{}", { status: 404 })));
    await expect(client.state("gone")).rejects.toThrowError(/stale session/);
  });

  it("preserves plan bytes verbatim", async () => {
    const payload = new TextEncoder().encode('{"version": 1,\n  "tasks": []}\n');
    const client = new SessionClient(
      "",
      fakeFetch((url) => {
        expect(url).toBe("/sessions/s/plan?reversed=true");
        return new Response(payload, { status: 200 });
      }),
    );
    const bytes = await client.planBytes("s", true);
    expect([...bytes]).toEqual([...payload]);
  });
});
