// Chat flow: one in-flight request per session, transcript in request
// order, server replies rendered exactly as received.

import { ApiClient, ApiError } from "./api.js";
import { appendBot, appendError, appendUser } from "./transcript.js";
import type { ChatResponse, UiSession } from "./types.js";

export type SendOutcome =
  | { status: "ok"; reply: ChatResponse; focusInput: boolean }
  | { status: "rejected"; message: string }
  | { status: "network-error"; message: string }
  | { status: "ignored" };

export class ChatController {
  private inFlight = false;

  constructor(
    readonly session: UiSession,
    private readonly api: ApiClient,
  ) {}

  get busy(): boolean {
    return this.inFlight;
  }

  async send(rawText: string): Promise<SendOutcome> {
    const text = rawText.trim();
    if (!text || this.inFlight) {
      return { status: "ignored" };
    }
    this.inFlight = true;
    appendUser(this.session, text);
    try {
      const reply = await this.api.postChat(this.session.sessionId, text);
      appendBot(this.session, reply);
      return { status: "ok", reply, focusInput: reply.reply_kind === "Prompt" };
    } catch (err) {
      if (err instanceof ApiError) {
        appendError(this.session, "rejected", err.message, undefined);
        return { status: "rejected", message: err.message };
      }
      const message = "Could not reach the bot service.";
      appendError(this.session, "network", message, text);
      return { status: "network-error", message };
    } finally {
      this.inFlight = false;
    }
  }
}
