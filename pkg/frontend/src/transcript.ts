// Append-only transcript state; the UI never reorders or mutates replies.

import type { ChatResponse, UiMessage, UiSession } from "./types.js";

export function createSession(sessionId: string): UiSession {
  return { sessionId, transcript: [] };
}

export function appendUser(session: UiSession, text: string, now: number = Date.now()): UiMessage {
  const message: UiMessage = { author: "user", text, timestamp: now };
  session.transcript.push(message);
  return message;
}

export function appendBot(
  session: UiSession,
  reply: ChatResponse,
  now: number = Date.now(),
): UiMessage {
  const message: UiMessage = { author: "bot", text: reply.text, timestamp: now };
  if (reply.reply_kind === "Rows" && reply.rows) {
    message.rows = reply.rows;
  }
  session.transcript.push(message);
  return message;
}

export function appendError(
  session: UiSession,
  kind: "network" | "rejected",
  text: string,
  retryText: string | undefined,
  now: number = Date.now(),
): UiMessage {
  const message: UiMessage = { author: "bot", text, timestamp: now, error: kind };
  if (retryText !== undefined) message.retryText = retryText;
  session.transcript.push(message);
  return message;
}
