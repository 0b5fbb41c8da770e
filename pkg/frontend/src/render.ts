// HTML-string rendering, kept free of DOM access so it is testable headless.

import type { SchemaDoc, UiMessage } from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

export function renderRowsTable(
  rows: Record<string, string>[],
  columnOrder: string[],
): string {
  if (!rows.length) return "";
  const headers = columnOrder.filter((h) => h in rows[0]);
  const head = headers.map((h) => `<th>${escapeHtml(h)}</th>`).join("");
  const body = rows
    .map(
      (row) =>
        `<tr>${headers.map((h) => `<td>${escapeHtml(row[h] ?? "")}</td>`).join("")}</tr>`,
    )
    .join("");
  return `<table class="rows"><thead><tr>${head}</tr></thead><tbody>${body}</tbody></table>`;
}

export function renderMessage(message: UiMessage, columnOrder: string[]): string {
  const classes = ["message", message.author];
  if (message.error) classes.push("error");
  let body = `<div class="text">${escapeHtml(message.text)}</div>`;
  if (message.rows && message.rows.length) {
    body += renderRowsTable(message.rows, columnOrder);
  }
  if (message.error === "network" && message.retryText !== undefined) {
    body += `<button class="retry" data-retry="${escapeHtml(message.retryText)}">Retry</button>`;
  }
  return `<div class="${classes.join(" ")}">${body}</div>`;
}

export function renderTranscript(messages: UiMessage[], columnOrder: string[]): string {
  if (!messages.length) {
    return '<div class="empty">Ask something about the data.</div>';
  }
  return messages.map((m) => renderMessage(m, columnOrder)).join("");
}

export function renderSchemaPanel(schema: SchemaDoc | null): string {
  if (!schema) {
    return '<div class="schema-unavailable">schema unavailable</div>';
  }
  const items = schema.fields
    .map((field) => {
      const badge = field.categorical ? '<span class="badge">categorical</span>' : "";
      const values = field.categorical
        ? `<div class="values">${field.category_values
            .slice(0, 5)
            .map((v) => escapeHtml(v))
            .join(", ")}</div>`
        : "";
      return (
        `<li><span class="field-name">${escapeHtml(field.display_name)}</span>` +
        `<span class="field-type">${escapeHtml(field.datatype)}</span>${badge}${values}</li>`
      );
    })
    .join("");
  return (
    `<h2>${escapeHtml(schema.name)}</h2>` +
    `<div class="row-count">${schema.row_count} rows</div>` +
    `<ul class="fields">${items}</ul>`
  );
}
