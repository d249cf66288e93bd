/** Thin typed wrapper over the session service's HTTP endpoints. */

import type {
  EventsPage,
  RespondAction,
  RespondResult,
  ServiceMeta,
  SessionSnapshot,
} from "./types.js";

export class ServiceClient {
  private readonly baseUrl: string;
  private readonly fetchImpl: typeof fetch;

  constructor(baseUrl: string, fetchImpl: typeof fetch = fetch) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
    this.fetchImpl = fetchImpl;
  }

  async meta(): Promise<ServiceMeta> {
    return this.getJson<ServiceMeta>("/meta");
  }

  async createSession(
    incidentId: string,
    mode: string,
    opts: { approvalRequired?: boolean; humanTimeout?: number } = {},
  ): Promise<SessionSnapshot> {
    const body: Record<string, unknown> = { incident_id: incidentId, mode };
    if (opts.approvalRequired !== undefined) {
      body["approval_required"] = opts.approvalRequired;
    }
    if (opts.humanTimeout !== undefined) {
      body["human_timeout"] = opts.humanTimeout;
    }
    const response = await this.fetchImpl(`${this.baseUrl}/sessions`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!response.ok) {
      throw new Error(`create session failed: HTTP ${response.status} ${await response.text()}`);
    }
    return (await response.json()) as SessionSnapshot;
  }

  async listSessions(): Promise<SessionSnapshot[]> {
    const page = await this.getJson<{ sessions: SessionSnapshot[] }>("/sessions");
    return page.sessions;
  }

  async getSession(id: string): Promise<SessionSnapshot> {
    return this.getJson<SessionSnapshot>(`/sessions/${id}`);
  }

  /** Snapshot of events after a sequence number (non-streaming). */
  async pollEvents(id: string, after = 0): Promise<EventsPage> {
    return this.getJson<EventsPage>(`/sessions/${id}/events.json?after=${after}`);
  }

  /** Answer a pending gate. Service rejections come back as a value, not a
   * throw, so callers can show the error inline and keep the gate. */
  async respond(id: string, action: RespondAction, text = ""): Promise<RespondResult> {
    const response = await this.fetchImpl(`${this.baseUrl}/sessions/${id}/respond`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ action, text }),
    });
    if (response.ok) {
      const body = (await response.json()) as { state: SessionSnapshot["state"] };
      return { ok: true, state: body.state };
    }
    let detail = `HTTP ${response.status}`;
    try {
      const body = (await response.json()) as { detail?: unknown };
      if (typeof body.detail === "string") detail = body.detail;
    } catch {
      // non-JSON error body: keep the status line
    }
    return { ok: false, status: response.status, detail };
  }

  /** Canonical trajectory JSON for a finished session (raw text). */
  async trajectory(id: string): Promise<string> {
    const response = await this.fetchImpl(`${this.baseUrl}/sessions/${id}/trajectory`);
    if (!response.ok) {
      throw new Error(`trajectory failed: HTTP ${response.status} ${await response.text()}`);
    }
    return response.text();
  }

  private async getJson<T>(path: string): Promise<T> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`);
    if (!response.ok) {
      throw new Error(`GET ${path} failed: HTTP ${response.status}`);
    }
    return (await response.json()) as T;
  }
}
