/** Pure rendering helpers: events in, transcript cards / HTML strings out.
 *
 * The transcript reads like a chat: the agent's thoughts and proposals are
 * agent messages, tool observations are system messages, and operator
 * decisions (approve / deny / answer) are operator messages. Keeping these
 * functions pure — no DOM access — lets the tests assert on exact output.
 */

import type { SessionEvent } from "./types.js";
import type { PendingGate } from "./store.js";

export type CardRole = "agent" | "system" | "operator" | "status";

export interface TranscriptCard {
  seq: number;
  role: CardRole;
  label: string;
  body: string;
}

/** Map the event log to transcript cards, preserving stream order. */
export function transcriptCards(events: readonly SessionEvent[]): TranscriptCard[] {
  return events.map((event) => toCard(event));
}

function toCard(event: SessionEvent): TranscriptCard {
  const p = event.payload;
  switch (event.kind) {
    case "thought":
      return card(event, "agent", "agent", text(p["text"]));
    case "action_proposed":
      // Show the full input: the operator reviews exactly what would run.
      return card(
        event,
        "agent",
        `proposes ${text(p["action"])}`,
        text(p["action_input"]),
      );
    case "action_approved":
      return card(event, "status", "approved", text(p["action"]));
    case "action_denied":
      return card(event, "operator", `denied ${text(p["action"])}`, text(p["text"]));
    case "observation":
      return card(event, "system", "observation", text(p["observation"]));
    case "human_request":
      return card(event, "agent", "asks a human", text(p["request"]));
    case "human_response":
      return card(event, "operator", "operator answer", text(p["text"]));
    case "final":
      return card(event, "agent", "final answer", finalBody(p));
    case "error":
      return card(event, "status", "error", text(p["message"]));
  }
}

function finalBody(payload: Record<string, unknown>): string {
  const prediction = payload["prediction"];
  if (prediction !== null && typeof prediction === "object") {
    const root = (prediction as Record<string, unknown>)["predicted_root_cause"];
    if (typeof root === "string" && root !== "") return root;
  }
  return "(no prediction)";
}

function card(
  event: SessionEvent,
  role: CardRole,
  label: string,
  body: string,
): TranscriptCard {
  return { seq: event.seq, role, label, body };
}

function text(value: unknown): string {
  if (typeof value === "string") return value;
  if (value === undefined || value === null) return "";
  return JSON.stringify(value);
}

/** One-line summary of a pending gate, for the gate panel heading. */
export function describeGate(gate: PendingGate): string {
  if (gate.kind === "approval") {
    return `step ${gate.index + 1}: approve ${gate.action}?`;
  }
  return "the agent asks a human";
}

export function escapeHtml(value: string): string {
  return value
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;")
    .replaceAll("'", "&#39;");
}

/** Render one card as an HTML block (chat-bubble layout). */
export function cardHtml(cardData: TranscriptCard): string {
  const cls = `card card-${cardData.role}`;
  return (
    `<div class="${cls}" data-seq="${cardData.seq}">` +
    `<div class="card-label">${escapeHtml(cardData.label)}</div>` +
    `<pre class="card-body">${escapeHtml(cardData.body)}</pre>` +
    `</div>`
  );
}

export function transcriptHtml(events: readonly SessionEvent[]): string {
  return transcriptCards(events).map(cardHtml).join("\n");
}
