/** Live event stream for one session.
 *
 * Connects to the service's SSE endpoint with fetch + ReadableStream (works
 * in browsers and Node without an EventSource polyfill). On any drop it
 * reconnects automatically, sending `Last-Event-ID` so the service resumes
 * after the last sequence number we applied — the stream delivers every
 * event exactly once across reconnects.
 */

import { SseParser } from "./sse.js";
import type { SessionEvent, SessionState } from "./types.js";
import { isSessionEvent } from "./types.js";

export interface StreamHandlers {
  onEvent: (event: SessionEvent) => void;
  /** Called once when the service sends the terminal end frame. */
  onEnd: (state: SessionState) => void;
  /** Called on transport errors (before the automatic reconnect). */
  onError?: (error: unknown) => void;
}

export interface StreamOptions {
  /** Injectable for tests; defaults to the global fetch. */
  fetchImpl?: typeof fetch;
  /** Delay before reconnecting after a drop. */
  retryDelayMs?: number;
  /** Resume after this sequence number (0 = from the start). */
  after?: number;
}

export class EventStream {
  private readonly baseUrl: string;
  private readonly sessionId: string;
  private readonly handlers: StreamHandlers;
  private readonly fetchImpl: typeof fetch;
  private readonly retryDelayMs: number;
  private lastEventId: number;
  private closed = false;
  private ended = false;
  private controller: AbortController | null = null;
  /** Number of HTTP connections opened (observable in tests). */
  connections = 0;

  constructor(
    baseUrl: string,
    sessionId: string,
    handlers: StreamHandlers,
    opts: StreamOptions = {},
  ) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
    this.sessionId = sessionId;
    this.handlers = handlers;
    this.fetchImpl = opts.fetchImpl ?? fetch;
    this.retryDelayMs = opts.retryDelayMs ?? 1000;
    this.lastEventId = opts.after ?? 0;
    void this.run();
  }

  /** Stop streaming; no further handler calls are made. */
  close(): void {
    this.closed = true;
    this.controller?.abort();
  }

  private async run(): Promise<void> {
    while (!this.closed && !this.ended) {
      try {
        await this.connectOnce();
      } catch (error) {
        if (this.closed || this.ended) return;
        this.handlers.onError?.(error);
      }
      if (this.closed || this.ended) return;
      // The service never closes the stream before the end frame, so a
      // clean close without one is also a drop: resume from the last seq.
      await delay(this.retryDelayMs);
    }
  }

  private async connectOnce(): Promise<void> {
    const controller = new AbortController();
    this.controller = controller;
    this.connections += 1;
    const headers: Record<string, string> = { Accept: "text/event-stream" };
    if (this.lastEventId > 0) {
      headers["Last-Event-ID"] = String(this.lastEventId);
    }
    const response = await this.fetchImpl(
      `${this.baseUrl}/sessions/${this.sessionId}/events`,
      { headers, signal: controller.signal },
    );
    if (!response.ok) {
      throw new Error(`event stream returned HTTP ${response.status}`);
    }
    if (response.body === null) {
      throw new Error("event stream response had no body");
    }
    const reader = response.body.getReader();
    const decoder = new TextDecoder();
    const parser = new SseParser();
    for (;;) {
      const { done, value } = await reader.read();
      if (done) break;
      const text = decoder.decode(value, { stream: true });
      for (const frame of parser.push(text)) {
        if (this.closed) return;
        if (frame.event === "end") {
          this.ended = true;
          const payload = JSON.parse(frame.data) as { state: SessionState };
          this.handlers.onEnd(payload.state);
          controller.abort();
          return;
        }
        const parsed: unknown = JSON.parse(frame.data);
        if (!isSessionEvent(parsed)) continue;
        this.lastEventId = parsed.seq;
        this.handlers.onEvent(parsed);
      }
    }
  }
}

function delay(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}
