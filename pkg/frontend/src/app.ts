// DOM glue: wires the input box, transcript pane, and schema panel to the
// controller. Everything rendered here comes from /chat and /schema.

import { ApiClient, newSessionId } from "./api.js";
import { ChatController } from "./controller.js";
import { renderSchemaPanel, renderTranscript } from "./render.js";
import { createSession } from "./transcript.js";
import type { SchemaDoc } from "./types.js";

function apiBaseUrl(): string {
  const override = new URLSearchParams(window.location.search).get("api");
  return (override ?? "http://127.0.0.1:8000").replace(/\/$/, "");
}

export function startApp(root: Document = document): void {
  const transcriptEl = root.getElementById("transcript")!;
  const schemaEl = root.getElementById("schema-panel")!;
  const inputEl = root.getElementById("utterance") as HTMLInputElement;
  const sendEl = root.getElementById("send") as HTMLButtonElement;

  const api = new ApiClient(apiBaseUrl());
  const controller = new ChatController(createSession(newSessionId()), api);
  let schema: SchemaDoc | null = null;
  let columnOrder: string[] = [];

  const redraw = () => {
    transcriptEl.innerHTML = renderTranscript(controller.session.transcript, columnOrder);
    transcriptEl.scrollTop = transcriptEl.scrollHeight;
    const empty = inputEl.value.trim().length === 0;
    sendEl.disabled = controller.busy || empty;
    inputEl.disabled = controller.busy;
  };

  const submit = async (text: string) => {
    const outcome = await controller.send(text);
    redraw();
    if (outcome.status === "ok" && outcome.focusInput) {
      inputEl.focus();
    }
  };

  sendEl.addEventListener("click", () => {
    const text = inputEl.value;
    inputEl.value = "";
    redraw();
    void submit(text);
  });
  inputEl.addEventListener("keydown", (event) => {
    if (event.key === "Enter" && !sendEl.disabled) {
      sendEl.click();
    }
  });
  inputEl.addEventListener("input", redraw);
  transcriptEl.addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    const retry = target.getAttribute("data-retry");
    if (retry !== null) {
      void submit(retry);
    }
  });

  api
    .getSchema()
    .then((doc) => {
      schema = doc;
      columnOrder = doc.fields.map((f) => f.name);
    })
    .catch(() => {
      schema = null;
    })
    .finally(() => {
      schemaEl.innerHTML = renderSchemaPanel(schema);
      redraw();
    });

  redraw();
}

if (typeof document !== "undefined" && document.getElementById("transcript")) {
  startApp();
}
