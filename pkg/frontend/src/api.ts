/** Typed client for the dialogue service JSON API.
 *
 * Mirrors the wire shapes exactly; nothing here interprets them. Errors
 * arrive as {"error": {"code", "message"}} envelopes and are rethrown
 * as ApiError so callers can tell a domain refusal from a dead network.
 */

export type PhaseName = "collecting" | "clarifying" | "concluded";
export type PanelStateName = "active" | "excluded" | "unknown";
export type OutcomeKindName =
  | "greeting"
  | "ask_question"
  | "ask_clarification"
  | "final_reply"
  | "acknowledged";

export interface PanelEntry {
  argument_id: string;
  description: string;
  state: PanelStateName;
}

export interface Neutralization {
  attacker: string;
  defender: string;
}

export interface WhyNot {
  reply: string;
  reason: string;
  argument: string | null;
}

export interface Explanation {
  reply: string;
  endorsers: string[];
  neutralizations: Neutralization[];
  why_nots: WhyNot[];
}

export interface TurnOutcome {
  kind: OutcomeKindName;
  text: string;
  phase: PhaseName;
  question_id: string | null;
  reply_id: string | null;
  explanation: Explanation | null;
  status_panel: PanelEntry[];
}

export interface TranscriptRow {
  ordinal: number;
  role: "user" | "system";
  text: string;
  matched: unknown;
  outcome_kind: OutcomeKindName | null;
}

export interface Snapshot {
  session_id: string;
  phase: PhaseName;
  status_panel: PanelEntry[];
  pending_question: string | null;
  transcript: TranscriptRow[];
  final_reply: string | null;
  explanation: Explanation | null;
}

export interface Health {
  status: string;
  kb: { status_args: number; replies: number };
}

export class ApiError extends Error {
  constructor(
    public readonly code: string,
    message: string,
    public readonly status: number,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  private readonly fetchFn: FetchLike;

  constructor(
    private readonly baseUrl = "",
    fetchFn?: FetchLike,
  ) {
    this.fetchFn = fetchFn ?? ((input, init) => fetch(input, init));
  }

  createSession(): Promise<{ session_id: string; outcome: TurnOutcome }> {
    return this.request("POST", "/api/sessions");
  }

  postMessage(token: string, text: string): Promise<{ outcome: TurnOutcome }> {
    return this.request("POST", `/api/sessions/${token}/messages`, { text });
  }

  postClarification(token: string, text: string): Promise<{ outcome: TurnOutcome }> {
    return this.request("POST", `/api/sessions/${token}/clarification`, { text });
  }

  getSnapshot(token: string): Promise<Snapshot> {
    return this.request("GET", `/api/sessions/${token}`);
  }

  health(): Promise<Health> {
    return this.request("GET", "/api/health");
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchFn(this.baseUrl + path, init);
    const payload = (await response.json().catch(() => null)) as
      | { error?: { code?: string; message?: string } }
      | null;
    if (!response.ok) {
      const envelope = payload?.error;
      throw new ApiError(
        envelope?.code ?? `Http${response.status}`,
        envelope?.message ?? response.statusText,
        response.status,
      );
    }
    return payload as T;
  }
}
