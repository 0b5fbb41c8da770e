// UI-contract acceptance against an HTTP-level fake of the bot service:
// the rendered bot bubble must equal the /chat response text, and the
// schema panel must list every field in source order.

import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { ChatController } from "../src/controller.js";
import { renderSchemaPanel, renderTranscript } from "../src/render.js";
import { createSession } from "../src/transcript.js";
import type { ChatResponse, SchemaDoc } from "../src/types.js";

const schemaFixture: SchemaDoc = {
  name: "city_sites",
  row_count: 50,
  fields: [
    { name: "site", display_name: "site", datatype: "Textual", diversity: 50, categorical: false, category_values: [], synonyms: [] },
    { name: "city", display_name: "city", datatype: "Textual", diversity: 6, categorical: true, category_values: ["Lille", "Lyon", "Metz", "Nancy", "Paris", "Strasbourg"], synonyms: [] },
    { name: "kind", display_name: "kind", datatype: "Textual", diversity: 6, categorical: true, category_values: ["concert hall", "gallery", "market", "museum", "park", "theatre"], synonyms: [] },
    { name: "visitors", display_name: "visitors", datatype: "Numeric", diversity: 48, categorical: false, category_values: [], synonyms: [] },
    { name: "rating", display_name: "rating", datatype: "Numeric", diversity: 15, categorical: false, category_values: [], synonyms: [] },
    { name: "opened", display_name: "opened", datatype: "DateTime", diversity: 49, categorical: false, category_values: [], synonyms: [] },
  ],
};

const chatFixture: ChatResponse = {
  reply_kind: "Rows",
  text: "Found 2 matching rows.",
  rows: [
    { site: "Hidden Botanic Park", city: "Paris", kind: "museum", visitors: "29067", rating: "3.5", opened: "1981-09-12" },
    { site: "Garden Aquarium", city: "Paris", kind: "museum", visitors: "36014", rating: "4.6", opened: "1961-05-18" },
  ],
  scalar: null,
  matched_intent: "filter_by_city",
  score: 1.0,
};

function fakeService(input: string, init?: RequestInit): Promise<Response> {
  const json = (body: unknown, status = 200) =>
    new Response(JSON.stringify(body), { status, headers: { "content-type": "application/json" } });
  if (input.endsWith("/schema")) {
    return Promise.resolve(json(schemaFixture));
  }
  if (input.endsWith("/chat") && init?.method === "POST") {
    const body = JSON.parse(String(init.body));
    if (!body.utterance || !body.utterance.trim()) {
      return Promise.resolve(json({ detail: "utterance must not be empty" }, 400));
    }
    return Promise.resolve(json(chatFixture));
  }
  return Promise.resolve(json({ detail: "not found" }, 404));
}

describe("UI contract against the service", () => {
  it("renders the bot reply text exactly as returned by /chat", async () => {
    const api = new ApiClient("http://service", fakeService);
    const controller = new ChatController(createSession("ui-1"), api);
    const schema = await api.getSchema();
    const columnOrder = schema.fields.map((f) => f.name);

    const outcome = await controller.send("show rows where city is Paris");
    expect(outcome.status).toBe("ok");

    const html = renderTranscript(controller.session.transcript, columnOrder);
    expect(html).toContain(chatFixture.text);
    const botBubble = controller.session.transcript.at(-1)!;
    expect(botBubble.author).toBe("bot");
    expect(botBubble.text).toBe(chatFixture.text);
    // rows rendered as a table, with headers drawn from /schema order
    expect(html).toContain("<table");
    const headerCells = [...html.matchAll(/<th>([^<]+)<\/th>/g)].map((m) => m[1]);
    expect(headerCells).toEqual(columnOrder);
    expect(html).toContain("Hidden Botanic Park");
  });

  it("lists every schema field in source order in the panel", async () => {
    const api = new ApiClient("http://service", fakeService);
    const schema = await api.getSchema();
    const html = renderSchemaPanel(schema);
    const names = schemaFixture.fields.map((f) => f.display_name);
    const positions = names.map((n) => html.indexOf(`<span class="field-name">${n}</span>`));
    expect(positions.every((p) => p >= 0)).toBe(true);
    for (let i = 1; i < positions.length; i += 1) {
      expect(positions[i - 1]).toBeLessThan(positions[i]);
    }
  });

  it("keeps transcript order equal to request order over several turns", async () => {
    const api = new ApiClient("http://service", fakeService);
    const controller = new ChatController(createSession("ui-2"), api);
    await controller.send("first question");
    await controller.send("second question");
    const texts = controller.session.transcript.map((m) => `${m.author}:${m.text}`);
    expect(texts[0]).toBe("user:first question");
    expect(texts[2]).toBe("user:second question");
    expect(texts[1]).toBe(`bot:${chatFixture.text}`);
  });
});
