// Thin client for the chat service. The fetch function is injectable so
// tests can fake the HTTP layer.

import type { ChatResponse, SchemaDoc } from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
  }
}

export class ApiClient {
  constructor(
    readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  async postChat(sessionId: string, utterance: string): Promise<ChatResponse> {
    const response = await this.fetchImpl(`${this.baseUrl}/chat`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ session_id: sessionId, utterance }),
    });
    if (!response.ok) {
      let detail = `chat request failed (${response.status})`;
      try {
        const body = await response.json();
        if (body && typeof body.detail === "string") detail = body.detail;
      } catch {
        // keep the generic message
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as ChatResponse;
  }

  async getSchema(): Promise<SchemaDoc> {
    const response = await this.fetchImpl(`${this.baseUrl}/schema`);
    if (!response.ok) {
      throw new ApiError(response.status, `schema request failed (${response.status})`);
    }
    return (await response.json()) as SchemaDoc;
  }
}

export function newSessionId(): string {
  const bytes = new Uint8Array(12);
  crypto.getRandomValues(bytes);
  return Array.from(bytes, (b) => b.toString(16).padStart(2, "0")).join("");
}
