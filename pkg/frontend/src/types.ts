// Wire types, mirroring the service's documented JSON shapes.

export type ReplyKind = "Rows" | "Scalar" | "Prompt" | "Help" | "Fallback";

export interface ChatResponse {
  reply_kind: ReplyKind;
  text: string;
  rows: Record<string, string>[] | null;
  scalar: number | string | null;
  matched_intent: string;
  score: number;
}

export interface SchemaField {
  name: string;
  display_name: string;
  datatype: string;
  diversity: number;
  categorical: boolean;
  category_values: string[];
  synonyms: string[];
}

export interface SchemaDoc {
  name: string;
  row_count: number;
  fields: SchemaField[];
}

// Client-side transcript types.

export interface UiMessage {
  author: "user" | "bot";
  text: string;
  rows?: Record<string, string>[];
  timestamp: number;
  // error affordance: set when a send failed and can be retried verbatim
  error?: "network" | "rejected";
  retryText?: string;
}

export interface UiSession {
  sessionId: string;
  transcript: UiMessage[];
}
