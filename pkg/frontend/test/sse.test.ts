import { describe, expect, it } from "vitest";
import { SseParser } from "../src/sse.js";

function pushAll(parser: SseParser, chunks: string[]) {
  return chunks.flatMap((chunk) => parser.push(chunk));
}

describe("SseParser", () => {
  it("parses complete frames with id, event, and data", () => {
    const parser = new SseParser();
    const frames = parser.push('id: 3\nevent: thought\ndata: {"seq": 3}\n\n');
    expect(frames).toEqual([{ id: "3", event: "thought", data: '{"seq": 3}' }]);
  });

  it("reassembles frames split across arbitrary chunks", () => {
    const wire =
      'id: 1\nevent: thought\ndata: {"a": 1}\n\n' +
      'id: 2\nevent: observation\ndata: {"b": 2}\n\n';
    for (const cut of [1, 5, 17, 30, wire.length - 1]) {
      const parser = new SseParser();
      const frames = pushAll(parser, [wire.slice(0, cut), wire.slice(cut)]);
      expect(frames.map((f) => f.id)).toEqual(["1", "2"]);
      expect(frames.map((f) => f.event)).toEqual(["thought", "observation"]);
    }
  });

  it("returns multiple frames from one chunk", () => {
    const parser = new SseParser();
    const frames = parser.push("data: one\n\ndata: two\n\ndata: three\n\n");
    expect(frames.map((f) => f.data)).toEqual(["one", "two", "three"]);
  });

  it("defaults the event name to message and the id to null", () => {
    const parser = new SseParser();
    const frames = parser.push("data: hello\n\n");
    expect(frames).toEqual([{ id: null, event: "message", data: "hello" }]);
  });

  it("joins multiple data lines with newlines", () => {
    const parser = new SseParser();
    const frames = parser.push("data: line one\ndata: line two\n\n");
    expect(frames[0]?.data).toBe("line one\nline two");
  });

  it("counts comment keepalives without emitting frames", () => {
    const parser = new SseParser();
    expect(parser.push(": keepalive\n\n")).toEqual([]);
    expect(parser.push(": keepalive\n\ndata: x\n\n")).toEqual([
      { id: null, event: "message", data: "x" },
    ]);
    expect(parser.commentCount).toBe(2);
  });

  it("ignores comments inside a frame but keeps its fields", () => {
    const parser = new SseParser();
    const frames = parser.push("id: 7\n: ping\ndata: y\n\n");
    expect(frames).toEqual([{ id: "7", event: "message", data: "y" }]);
    expect(parser.commentCount).toBe(1);
  });

  it("tolerates CRLF line endings", () => {
    const parser = new SseParser();
    const frames = parser.push("id: 4\r\nevent: final\r\ndata: z\r\n\r\n");
    expect(frames).toEqual([{ id: "4", event: "final", data: "z" }]);
  });

  it("strips exactly one leading space from field values", () => {
    const parser = new SseParser();
    const frames = parser.push("data:  two spaces\ndata:none\n\n");
    expect(frames[0]?.data).toBe(" two spaces\nnone");
  });

  it("holds incomplete frames until the blank line arrives", () => {
    const parser = new SseParser();
    expect(parser.push("data: partial")).toEqual([]);
    expect(parser.push(" still going\n")).toEqual([]);
    expect(parser.push("\n")).toEqual([
      { id: null, event: "message", data: "partial still going" },
    ]);
  });
});
