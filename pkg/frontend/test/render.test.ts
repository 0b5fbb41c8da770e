import { describe, expect, it } from "vitest";

import { escapeHtml, renderMessage, renderRowsTable, renderSchemaPanel, renderTranscript } from "../src/render.js";
import type { SchemaDoc, UiMessage } from "../src/types.js";

const schema: SchemaDoc = {
  name: "city_sites",
  row_count: 50,
  fields: [
    {
      name: "site",
      display_name: "site",
      datatype: "Textual",
      diversity: 50,
      categorical: false,
      category_values: [],
      synonyms: [],
    },
    {
      name: "city",
      display_name: "city",
      datatype: "Textual",
      diversity: 6,
      categorical: true,
      category_values: ["Lille", "Lyon", "Metz", "Nancy", "Paris", "Strasbourg"],
      synonyms: ["town"],
    },
  ],
};

describe("escapeHtml", () => {
  it("escapes markup", () => {
    expect(escapeHtml("<b>&\"'</b>")).toBe("&lt;b&gt;&amp;&quot;&#39;&lt;/b&gt;");
  });
});

describe("renderRowsTable", () => {
  it("orders columns by the schema order, not object key order", () => {
    const rows = [{ city: "Paris", site: "Grand Archive" }];
    const html = renderRowsTable(rows, ["site", "city"]);
    expect(html.indexOf("<th>site</th>")).toBeLessThan(html.indexOf("<th>city</th>"));
    expect(html).toContain("<td>Grand Archive</td>");
  });

  it("escapes cell content", () => {
    const html = renderRowsTable([{ a: "<script>" }], ["a"]);
    expect(html).toContain("&lt;script&gt;");
    expect(html).not.toContain("<script>");
  });
});

describe("renderMessage", () => {
  it("renders a rows table only for messages that carry rows", () => {
    const plain: UiMessage = { author: "bot", text: "hi", timestamp: 0 };
    expect(renderMessage(plain, [])).not.toContain("<table");
    const withRows: UiMessage = {
      author: "bot",
      text: "Found 1 matching row.",
      rows: [{ city: "Paris" }],
      timestamp: 0,
    };
    expect(renderMessage(withRows, ["city"])).toContain("<table");
  });

  it("adds a retry button for network errors", () => {
    const failed: UiMessage = {
      author: "bot",
      text: "Could not reach the bot service.",
      timestamp: 0,
      error: "network",
      retryText: "how many rows",
    };
    const html = renderMessage(failed, []);
    expect(html).toContain('data-retry="how many rows"');
  });
});

describe("renderTranscript", () => {
  it("keeps message order", () => {
    const messages: UiMessage[] = [
      { author: "user", text: "first", timestamp: 1 },
      { author: "bot", text: "second", timestamp: 2 },
    ];
    const html = renderTranscript(messages, []);
    expect(html.indexOf("first")).toBeLessThan(html.indexOf("second"));
  });

  it("shows a placeholder when empty", () => {
    expect(renderTranscript([], [])).toContain("Ask something");
  });
});

describe("renderSchemaPanel", () => {
  it("lists fields in source order with badges and sample values", () => {
    const html = renderSchemaPanel(schema);
    expect(html.indexOf('<span class="field-name">site</span>')).toBeLessThan(
      html.indexOf('<span class="field-name">city</span>'),
    );
    expect(html).toContain('<span class="badge">categorical</span>');
    expect(html).toContain("Lille, Lyon, Metz, Nancy, Paris");
    expect(html).not.toContain("Strasbourg"); // only the first 5 values
    expect(html).toContain("50 rows");
  });

  it("reports unavailability", () => {
    expect(renderSchemaPanel(null)).toContain("schema unavailable");
  });
});
