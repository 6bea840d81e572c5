/** Plan export: download the server's plan document byte-for-byte. */

import type { SessionClient } from "./api.js";

export function exportFilename(reversed: boolean): string {
  return reversed ? "disassembly-plan.json" : "construction-plan.json";
}

export async function fetchPlanForExport(
  client: SessionClient,
  sessionId: string,
  reversed: boolean,
): Promise<{ filename: string; bytes: Uint8Array }> {
  const bytes = await client.planBytes(sessionId, reversed);
  return { filename: exportFilename(reversed), bytes };
}

/** Browser-side download trigger; kept apart from fetching for testability. */
export function triggerDownload(filename: string, bytes: Uint8Array): void {
  const blob = new Blob([bytes as unknown as BlobPart], { type: "application/json" });
  const url = URL.createObjectURL(blob);
  const a = document.createElement("a");
  a.href = url;
  a.download = filename;
  a.click();
  URL.revokeObjectURL(url);
}
