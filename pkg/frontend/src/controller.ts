/** Serializes operator responses: one respond call per gate, no doubles.
 *
 * The idempotency guard is per gate: once a response for a gate's sequence
 * number has been dispatched, further submissions for that gate are ignored
 * — a double-click sends a single respond call. A *newer* gate is never
 * blocked by an older gate's still-in-flight response: the service only
 * reveals a new gate after it has processed the previous answer, so the
 * next-gate events can race ahead of the previous POST's reply. A service
 * rejection surfaces as `lastError` and re-arms the gate so the operator
 * can retry.
 */

import type { ServiceClient } from "./client.js";
import type { RespondAction, RespondResult } from "./types.js";
import type { PendingGate } from "./store.js";

export class GateController {
  private readonly client: ServiceClient;
  private readonly sessionId: string;
  /** Gates with a response dispatched (in flight or acknowledged). */
  private readonly submittedSeqs = new Set<number>();
  lastError: string | null = null;

  constructor(client: ServiceClient, sessionId: string) {
    this.client = client;
    this.sessionId = sessionId;
  }

  /** Submit a response for a gate; returns null when the submission was
   * suppressed because this gate already has one dispatched. */
  async submit(
    gate: PendingGate,
    action: RespondAction,
    text = "",
  ): Promise<RespondResult | null> {
    if (this.submittedSeqs.has(gate.seq)) return null;
    this.submittedSeqs.add(gate.seq);
    let result: RespondResult;
    try {
      result = await this.client.respond(this.sessionId, action, text);
    } catch (error) {
      // Transport failure: nothing reached the service we know of; re-arm.
      this.submittedSeqs.delete(gate.seq);
      this.lastError = String(error);
      throw error;
    }
    if (result.ok) {
      this.lastError = null;
    } else {
      // The service refused (wrong state, bad action): keep the gate
      // answerable and surface the reason inline.
      this.submittedSeqs.delete(gate.seq);
      this.lastError = result.detail;
    }
    return result;
  }
}
