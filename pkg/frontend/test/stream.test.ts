import { describe, expect, it } from "vitest";
import { EventStream } from "../src/stream.js";
import type { SessionEvent, SessionState } from "../src/types.js";

function frame(seq: number, kind: string, payload: Record<string, unknown>): string {
  const data = JSON.stringify({ seq, kind, payload, at: "2026-01-01T00:00:00+00:00" });
  return `id: ${seq}\nevent: ${kind}\ndata: ${data}\n\n`;
}

function endFrame(lastSeq: number, state: string): string {
  return `id: ${lastSeq}\nevent: end\ndata: ${JSON.stringify({ state })}\n\n`;
}

/** ReadableStream that emits the given text chunks, then closes or errors. */
function chunkStream(chunks: string[], opts: { error?: boolean } = {}): ReadableStream<Uint8Array> {
  const encoder = new TextEncoder();
  let i = 0;
  return new ReadableStream<Uint8Array>({
    pull(controller) {
      const chunk = chunks[i];
      if (chunk !== undefined) {
        controller.enqueue(encoder.encode(chunk));
        i += 1;
      } else if (opts.error === true) {
        controller.error(new Error("connection dropped"));
      } else {
        controller.close();
      }
    },
  });
}

interface FetchCall {
  url: string;
  headers: Record<string, string>;
}

/** fetch stub: the nth connection gets the nth body factory (last repeats). */
function makeFetch(bodies: Array<() => ReadableStream<Uint8Array>>) {
  const calls: FetchCall[] = [];
  const fetchImpl = (async (input: unknown, init?: RequestInit) => {
    const headers = { ...((init?.headers ?? {}) as Record<string, string>) };
    calls.push({ url: String(input), headers });
    const make = bodies[Math.min(calls.length - 1, bodies.length - 1)];
    if (make === undefined) throw new Error("no body configured");
    return new Response(make(), {
      status: 200,
      headers: { "content-type": "text/event-stream" },
    });
  }) as typeof fetch;
  return { fetchImpl, calls };
}

interface Collected {
  events: SessionEvent[];
  errors: unknown[];
  end: Promise<SessionState>;
  onEvent?: (event: SessionEvent) => void;
}

function collector(): Collected & { handlers: ConstructorParameters<typeof EventStream>[2] } {
  const events: SessionEvent[] = [];
  const errors: unknown[] = [];
  let resolveEnd!: (state: SessionState) => void;
  const end = new Promise<SessionState>((resolve) => {
    resolveEnd = resolve;
  });
  const collected: Collected = { events, errors, end };
  const handlers = {
    onEvent: (event: SessionEvent) => {
      events.push(event);
      collected.onEvent?.(event);
    },
    onEnd: (state: SessionState) => resolveEnd(state),
    onError: (error: unknown) => errors.push(error),
  };
  return Object.assign(collected, { handlers });
}

describe("EventStream", () => {
  it("delivers events and the end state over one connection", async () => {
    const wire =
      frame(1, "thought", { text: "a" }) +
      frame(2, "observation", { observation: "b" }) +
      frame(3, "final", { prediction: null }) +
      endFrame(3, "finished");
    // Random-looking chunk boundaries exercise frame reassembly.
    const chunks = [wire.slice(0, 13), wire.slice(13, 57), wire.slice(57)];
    const { fetchImpl, calls } = makeFetch([() => chunkStream(chunks)]);
    const collected = collector();
    const stream = new EventStream("http://svc", "s1", collected.handlers, {
      fetchImpl,
      retryDelayMs: 1,
    });
    const state = await collected.end;
    expect(state).toBe("finished");
    expect(collected.events.map((e) => e.seq)).toEqual([1, 2, 3]);
    expect(collected.errors).toEqual([]);
    expect(stream.connections).toBe(1);
    expect(calls[0]?.url).toBe("http://svc/sessions/s1/events");
    expect(calls[0]?.headers["Last-Event-ID"]).toBeUndefined();
    stream.close();
  });

  it("ignores keepalive comments between frames", async () => {
    const wire =
      ": keepalive\n\n" +
      frame(1, "thought", { text: "a" }) +
      ": keepalive\n\n" +
      endFrame(1, "finished");
    const { fetchImpl } = makeFetch([() => chunkStream([wire])]);
    const collected = collector();
    const stream = new EventStream("http://svc", "s1", collected.handlers, { fetchImpl });
    await collected.end;
    expect(collected.events.map((e) => e.seq)).toEqual([1]);
    stream.close();
  });

  it("resumes after a mid-stream drop without duplicating events", async () => {
    const first = frame(1, "thought", { text: "a" }) + frame(2, "observation", { observation: "b" });
    const second = frame(3, "final", { prediction: null }) + endFrame(3, "finished");
    const { fetchImpl, calls } = makeFetch([
      () => chunkStream([first], { error: true }),
      () => chunkStream([second]),
    ]);
    const collected = collector();
    const stream = new EventStream("http://svc", "s1", collected.handlers, {
      fetchImpl,
      retryDelayMs: 1,
    });
    const state = await collected.end;
    expect(state).toBe("finished");
    expect(collected.events.map((e) => e.seq)).toEqual([1, 2, 3]);
    expect(stream.connections).toBe(2);
    expect(collected.errors).toHaveLength(1);
    expect(calls[1]?.headers["Last-Event-ID"]).toBe("2");
    stream.close();
  });

  it("treats a clean close without an end frame as a drop", async () => {
    const { fetchImpl, calls } = makeFetch([
      () => chunkStream([frame(1, "thought", { text: "a" })]),
      () => chunkStream([frame(2, "final", { prediction: null }) + endFrame(2, "finished")]),
    ]);
    const collected = collector();
    const stream = new EventStream("http://svc", "s1", collected.handlers, {
      fetchImpl,
      retryDelayMs: 1,
    });
    await collected.end;
    expect(collected.events.map((e) => e.seq)).toEqual([1, 2]);
    expect(collected.errors).toEqual([]);
    expect(stream.connections).toBe(2);
    expect(calls[1]?.headers["Last-Event-ID"]).toBe("1");
    stream.close();
  });

  it("sends Last-Event-ID on the first connection when resuming", async () => {
    const { fetchImpl, calls } = makeFetch([
      () => chunkStream([frame(6, "final", { prediction: null }) + endFrame(6, "finished")]),
    ]);
    const collected = collector();
    const stream = new EventStream("http://svc", "s1", collected.handlers, {
      fetchImpl,
      after: 5,
    });
    await collected.end;
    expect(calls[0]?.headers["Last-Event-ID"]).toBe("5");
    expect(collected.events.map((e) => e.seq)).toEqual([6]);
    stream.close();
  });

  it("stops for good once closed", async () => {
    const { fetchImpl, calls } = makeFetch([
      () => chunkStream([frame(1, "thought", { text: "a" })], { error: true }),
    ]);
    const collected = collector();
    let stream: EventStream | null = null;
    collected.onEvent = () => stream?.close();
    stream = new EventStream("http://svc", "s1", collected.handlers, {
      fetchImpl,
      retryDelayMs: 1,
    });
    await new Promise((resolve) => setTimeout(resolve, 40));
    expect(collected.events.map((e) => e.seq)).toEqual([1]);
    expect(calls).toHaveLength(1);
    expect(collected.errors).toEqual([]);
  });
});
