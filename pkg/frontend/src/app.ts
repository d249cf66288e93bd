/** Browser glue: wires the store, stream, and controller to the DOM.
 *
 * Everything rendered here derives from service state — the session list
 * from polling, the transcript and gate panel from the event stream.
 * Nothing is persisted client-side; reloading the page rebuilds the view
 * from the stream and never changes session state.
 */

import { ServiceClient } from "./client.js";
import { EventStream } from "./stream.js";
import { SessionStore } from "./store.js";
import { GateController } from "./controller.js";
import { transcriptHtml, describeGate, escapeHtml } from "./view.js";
import type { PendingGate } from "./store.js";
import type { RespondAction, SessionSnapshot } from "./types.js";

const SESSION_LIST_POLL_MS = 2000;
const DEFAULT_SERVICE_URL = "http://127.0.0.1:8765";

/** Where the session service lives: an explicit `?service=` query parameter
 * wins; a console served over http(s) assumes same-origin; anything else
 * (file://, etc.) falls back to the default local service address. */
function serviceBaseUrl(): string {
  const override = new URLSearchParams(window.location.search).get("service");
  if (override !== null && override !== "") return override;
  if (window.location.protocol === "http:" || window.location.protocol === "https:") {
    return window.location.origin;
  }
  return DEFAULT_SERVICE_URL;
}

interface ActiveSession {
  id: string;
  store: SessionStore;
  stream: EventStream;
  controller: GateController;
}

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) throw new Error(`missing element #${id}`);
  return node as T;
}

function main(): void {
  const serviceUrl = serviceBaseUrl();
  const client = new ServiceClient(serviceUrl);
  let active: ActiveSession | null = null;

  const sessionList = el<HTMLUListElement>("session-list");
  const transcript = el<HTMLDivElement>("transcript");
  const gatePanel = el<HTMLDivElement>("gate-panel");
  const statusLine = el<HTMLDivElement>("status-line");
  const createForm = el<HTMLFormElement>("create-form");
  const incidentSelect = el<HTMLSelectElement>("incident-select");
  const modeSelect = el<HTMLSelectElement>("mode-select");
  const approvalCheck = el<HTMLInputElement>("approval-check");

  function renderTranscript(): void {
    if (active === null) return;
    transcript.innerHTML = transcriptHtml(active.store.events);
    transcript.scrollTop = transcript.scrollHeight;
    const state = active.store.done
      ? `session ${active.id} — ${active.store.endState ?? "done"}`
      : `session ${active.id} — live`;
    statusLine.textContent = state;
    renderGate(active.store.pendingGate());
  }

  function renderGate(gate: PendingGate | null): void {
    if (active === null || gate === null) {
      gatePanel.innerHTML = "";
      gatePanel.classList.add("hidden");
      return;
    }
    gatePanel.classList.remove("hidden");
    const error = active.controller.lastError;
    const errorHtml =
      error === null ? "" : `<div class="gate-error">${escapeHtml(error)}</div>`;
    if (gate.kind === "approval") {
      gatePanel.innerHTML =
        `<div class="gate-title">${escapeHtml(describeGate(gate))}</div>` +
        `<pre class="gate-input">${escapeHtml(gate.actionInput)}</pre>` +
        errorHtml +
        `<div class="gate-actions">` +
        `<button id="gate-approve">approve</button>` +
        `<input id="gate-text" placeholder="reason / advice" />` +
        `<button id="gate-deny">deny</button>` +
        `<button id="gate-interject">interject</button>` +
        `<button id="gate-abort">abort</button>` +
        `</div>`;
      wireGateButton("gate-approve", gate, "approve");
      wireGateButton("gate-deny", gate, "deny", true);
      wireGateButton("gate-interject", gate, "interject", true);
      wireGateButton("gate-abort", gate, "abort");
    } else {
      gatePanel.innerHTML =
        `<div class="gate-title">${escapeHtml(describeGate(gate))}</div>` +
        `<pre class="gate-input">${escapeHtml(gate.request)}</pre>` +
        errorHtml +
        `<div class="gate-actions">` +
        `<input id="gate-text" placeholder="answer" />` +
        `<button id="gate-answer">answer</button>` +
        `<button id="gate-abort">abort</button>` +
        `</div>`;
      wireGateButton("gate-answer", gate, "human_answer", true);
      wireGateButton("gate-abort", gate, "abort");
    }
  }

  function wireGateButton(
    buttonId: string,
    gate: PendingGate,
    action: RespondAction,
    withText = false,
  ): void {
    el<HTMLButtonElement>(buttonId).addEventListener("click", () => {
      const text = withText ? el<HTMLInputElement>("gate-text").value : "";
      if (active === null) return;
      void active.controller.submit(gate, action, text).then((result) => {
        if (result !== null && !result.ok) renderGate(gate);
      });
    });
  }

  function openSession(id: string): void {
    active?.stream.close();
    const store = new SessionStore();
    const controller = new GateController(client, id);
    const stream = new EventStream(serviceUrl, id, {
      onEvent: (event) => {
        store.apply(event);
        renderTranscript();
      },
      onEnd: (state) => {
        store.markEnd(state);
        renderTranscript();
      },
      onError: () => {
        statusLine.textContent = `session ${id} — reconnecting…`;
      },
    });
    active = { id, store, stream, controller };
    transcript.innerHTML = "";
    renderTranscript();
  }

  function renderSessionList(sessions: SessionSnapshot[]): void {
    sessionList.innerHTML = sessions
      .map((s) => {
        const current = active !== null && active.id === s.id ? " current" : "";
        return (
          `<li class="session-row${current}" data-id="${escapeHtml(s.id)}">` +
          `<span class="session-id">${escapeHtml(s.id)}</span>` +
          `<span class="session-mode">${escapeHtml(s.mode)}</span>` +
          `<span class="session-state">${escapeHtml(s.state)}</span>` +
          `</li>`
        );
      })
      .join("");
    for (const row of sessionList.querySelectorAll<HTMLLIElement>(".session-row")) {
      row.addEventListener("click", () => {
        const id = row.dataset["id"];
        if (id !== undefined && (active === null || active.id !== id)) {
          openSession(id);
        }
      });
    }
  }

  async function pollSessions(): Promise<void> {
    try {
      renderSessionList(await client.listSessions());
    } catch {
      // Service briefly unreachable; keep the last list.
    }
  }

  async function loadMeta(): Promise<void> {
    const meta = await client.meta();
    incidentSelect.innerHTML = meta.incidents
      .map((i) => `<option value="${escapeHtml(i)}">${escapeHtml(i)}</option>`)
      .join("");
    modeSelect.innerHTML = meta.modes
      .map((m) => `<option value="${escapeHtml(m)}">${escapeHtml(m)}</option>`)
      .join("");
  }

  createForm.addEventListener("submit", (ev) => {
    ev.preventDefault();
    void client
      .createSession(incidentSelect.value, modeSelect.value, {
        approvalRequired: approvalCheck.checked,
      })
      .then((snapshot) => {
        openSession(snapshot.id);
        return pollSessions();
      })
      .catch((error: unknown) => {
        statusLine.textContent = `create failed: ${String(error)}`;
      });
  });

  void loadMeta();
  void pollSessions();
  setInterval(() => void pollSessions(), SESSION_LIST_POLL_MS);
}

main();
