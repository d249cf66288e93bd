/** Client-side session state, derived entirely from the event stream.
 *
 * The store is the console's single source of truth: every state change
 * originates from an applied event. Events apply strictly in sequence
 * order; duplicates (possible only if a caller replays) are dropped and
 * counted, and a skipped sequence number is flagged — the service contract
 * makes gaps impossible, so the flag doubles as a client-bug detector.
 */

import type { SessionEvent, SessionState } from "./types.js";

export interface ApprovalGate {
  kind: "approval";
  /** Sequence number of the action_proposed event. */
  seq: number;
  index: number;
  action: string;
  actionInput: string;
}

export interface HumanGate {
  kind: "human";
  /** Sequence number of the human_request event. */
  seq: number;
  request: string;
  timeoutSeconds: number | null;
}

export type PendingGate = ApprovalGate | HumanGate;

export class SessionStore {
  readonly events: SessionEvent[] = [];
  lastSeq = 0;
  /** Sequence numbers of rejected duplicates, for diagnostics. */
  readonly droppedSeqs: number[] = [];
  gapDetected = false;
  done = false;
  endState: SessionState | null = null;
  /** True when the most recent offer was a duplicate — i.e. a stream is
   * replaying events we already hold, so the stored tail may be stale. */
  private replayingOldEvents = false;

  get duplicatesDropped(): number {
    return this.droppedSeqs.length;
  }

  /** Apply one event; returns false if it was a duplicate. */
  apply(event: SessionEvent): boolean {
    if (event.seq <= this.lastSeq) {
      this.droppedSeqs.push(event.seq);
      this.replayingOldEvents = true;
      return false;
    }
    if (event.seq > this.lastSeq + 1) {
      this.gapDetected = true;
    }
    this.lastSeq = event.seq;
    this.events.push(event);
    this.replayingOldEvents = false;
    return true;
  }

  /** Record the stream's terminal frame. */
  markEnd(state: SessionState): void {
    this.done = true;
    this.endState = state;
  }

  /** The gate awaiting an operator, if any.
   *
   * A gate is pending exactly when the newest event is an unanswered
   * action_proposed or human_request: the service parks the episode there
   * and emits nothing more until the operator responds, so there is never
   * more than one pending gate. While a stream is replaying events we
   * already hold, the stored tail may predate an answer the service has
   * since processed, so no gate is surfaced until fresh events flow again.
   */
  pendingGate(): PendingGate | null {
    if (this.done || this.replayingOldEvents) return null;
    const last = this.events[this.events.length - 1];
    if (last === undefined) return null;
    if (last.kind === "action_proposed") {
      return {
        kind: "approval",
        seq: last.seq,
        index: asNumber(last.payload["index"]),
        action: asString(last.payload["action"]),
        actionInput: asString(last.payload["action_input"]),
      };
    }
    if (last.kind === "human_request") {
      const timeout = last.payload["timeout"];
      return {
        kind: "human",
        seq: last.seq,
        request: asString(last.payload["request"]),
        timeoutSeconds: typeof timeout === "number" ? timeout : null,
      };
    }
    return null;
  }
}

function asString(value: unknown): string {
  if (typeof value === "string") return value;
  return JSON.stringify(value);
}

function asNumber(value: unknown): number {
  return typeof value === "number" ? value : -1;
}
