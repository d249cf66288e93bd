import { describe, expect, it } from "vitest";
import {
  cardHtml,
  describeGate,
  escapeHtml,
  transcriptCards,
  transcriptHtml,
} from "../src/view.js";
import type { EventKind, SessionEvent } from "../src/types.js";

function ev(
  seq: number,
  kind: EventKind,
  payload: Record<string, unknown> = {},
): SessionEvent {
  return { seq, kind, payload, at: "2026-01-01T00:00:00+00:00" };
}

describe("transcriptCards", () => {
  it("renders every event kind with the right role and body", () => {
    const events: SessionEvent[] = [
      ev(1, "thought", { text: "check the settings table" }),
      ev(2, "action_proposed", {
        index: 0,
        action: "db_query",
        action_input: "SELECT * FROM fleet_settings",
      }),
      ev(3, "action_approved", { index: 0, action: "db_query" }),
      ev(4, "observation", { observation: "3 rows" }),
      ev(5, "action_proposed", { index: 1, action: "table_qa", action_input: "t1?" }),
      ev(6, "action_denied", { action: "table_qa", text: "not needed" }),
      ev(7, "observation", { observation: "not needed" }),
      ev(8, "human_request", { request: "which cluster?", timeout: 30 }),
      ev(9, "human_response", { text: "cl-west-7" }),
      ev(10, "error", { message: "boom" }),
      ev(11, "final", {
        incident_id: "INC-1",
        terminal: "final_answer",
        prediction: { predicted_root_cause: "drifted setting", summary: "s" },
      }),
    ];
    const cards = transcriptCards(events);
    expect(cards.map((c) => c.seq)).toEqual(events.map((e) => e.seq));
    expect(cards.map((c) => c.role)).toEqual([
      "agent",
      "agent",
      "status",
      "system",
      "agent",
      "operator",
      "system",
      "agent",
      "operator",
      "status",
      "agent",
    ]);
    expect(cards[0]?.body).toBe("check the settings table");
    expect(cards[1]?.label).toBe("proposes db_query");
    expect(cards[1]?.body).toBe("SELECT * FROM fleet_settings");
    expect(cards[5]?.label).toBe("denied table_qa");
    expect(cards[5]?.body).toBe("not needed");
    expect(cards[8]?.body).toBe("cl-west-7");
    expect(cards[10]?.label).toBe("final answer");
    expect(cards[10]?.body).toBe("drifted setting");
  });

  it("shows the full proposed input for review, not a truncation", () => {
    const longInput = "x".repeat(5000);
    const cards = transcriptCards([
      ev(1, "action_proposed", { index: 0, action: "db_query", action_input: longInput }),
    ]);
    expect(cards[0]?.body).toBe(longInput);
  });

  it("falls back when the final event carries no prediction", () => {
    const cards = transcriptCards([
      ev(1, "final", { incident_id: "INC-1", terminal: "iteration_cap", prediction: null }),
    ]);
    expect(cards[0]?.body).toBe("(no prediction)");
  });

  it("stringifies structured payload values instead of dropping them", () => {
    const cards = transcriptCards([
      ev(1, "action_proposed", { index: 0, action: "tool", action_input: { q: 1 } }),
    ]);
    expect(cards[0]?.body).toBe('{"q":1}');
  });
});

describe("describeGate", () => {
  it("labels approval gates with the 1-based step and tool name", () => {
    expect(
      describeGate({ kind: "approval", seq: 2, index: 0, action: "db_query", actionInput: "q" }),
    ).toBe("step 1: approve db_query?");
  });

  it("labels human gates", () => {
    expect(
      describeGate({ kind: "human", seq: 5, request: "which?", timeoutSeconds: null }),
    ).toBe("the agent asks a human");
  });
});

describe("html rendering", () => {
  it("escapes markup-significant characters", () => {
    expect(escapeHtml(`<b>&"'`)).toBe("&lt;b&gt;&amp;&quot;&#39;");
  });

  it("escapes event content inside cards", () => {
    const html = cardHtml({
      seq: 3,
      role: "system",
      label: "observation",
      body: '<script>alert("x")</script>',
    });
    expect(html).toContain('data-seq="3"');
    expect(html).not.toContain("<script>");
    expect(html).toContain("&lt;script&gt;");
  });

  it("renders the whole transcript in order", () => {
    const html = transcriptHtml([
      ev(1, "thought", { text: "first" }),
      ev(2, "observation", { observation: "second" }),
    ]);
    expect(html.indexOf("first")).toBeGreaterThan(-1);
    expect(html.indexOf("first")).toBeLessThan(html.indexOf("second"));
  });
});
