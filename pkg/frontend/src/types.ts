/** Wire types for the session service. The console is a pure client: these
 * mirror the HTTP/SSE payloads exactly and add nothing of its own. */

export const EVENT_KINDS = [
  "thought",
  "action_proposed",
  "action_approved",
  "action_denied",
  "observation",
  "human_request",
  "human_response",
  "final",
  "error",
] as const;

export type EventKind = (typeof EVENT_KINDS)[number];

export const RESPOND_ACTIONS = [
  "approve",
  "deny",
  "human_answer",
  "interject",
  "abort",
] as const;

export type RespondAction = (typeof RESPOND_ACTIONS)[number];

export type SessionState =
  | "running"
  | "awaiting_approval"
  | "awaiting_human"
  | "finished"
  | "aborted";

export interface SessionEvent {
  seq: number;
  kind: EventKind;
  payload: Record<string, unknown>;
  at: string;
}

export interface SessionSnapshot {
  id: string;
  incident_id: string;
  mode: string;
  state: SessionState;
  event_count: number;
  created_at: string;
  approval_required: boolean;
  read_only: boolean;
}

export interface ServiceMeta {
  incidents: string[];
  modes: string[];
}

export interface EventsPage {
  events: SessionEvent[];
  state: SessionState;
  done: boolean;
}

export type RespondResult =
  | { ok: true; state: SessionState }
  | { ok: false; status: number; detail: string };

export function isSessionEvent(value: unknown): value is SessionEvent {
  if (typeof value !== "object" || value === null) return false;
  const v = value as Record<string, unknown>;
  return (
    typeof v.seq === "number" &&
    typeof v.kind === "string" &&
    (EVENT_KINDS as readonly string[]).includes(v.kind) &&
    typeof v.payload === "object" &&
    v.payload !== null &&
    typeof v.at === "string"
  );
}
