/** The page state as a pure projection of API payloads.
 *
 * A view built turn by turn with applyOutcome and a view rebuilt from
 * the snapshot endpoint must be identical; that is what makes a hard
 * refresh safe. Nothing in here owns state or touches the DOM.
 */

import type {
  Explanation,
  OutcomeKindName,
  PanelEntry,
  PhaseName,
  Snapshot,
  TurnOutcome,
} from "./api.js";

export interface ChatMessage {
  role: "user" | "system";
  text: string;
  kind: OutcomeKindName | null;
}

export interface SessionView {
  token: string;
  phase: PhaseName;
  messages: ChatMessage[];
  panel: PanelEntry[];
  finalReply: string | null;
  explanation: Explanation | null;
}

export function emptyView(token: string): SessionView {
  return {
    token,
    phase: "collecting",
    messages: [],
    panel: [],
    finalReply: null,
    explanation: null,
  };
}

/** Fold one turn into the view. Pass userText=null for system-initiated
 * turns (the greeting), where the user said nothing. */
export function applyOutcome(
  view: SessionView,
  userText: string | null,
  outcome: TurnOutcome,
): SessionView {
  const messages = [...view.messages];
  if (userText !== null) {
    messages.push({ role: "user", text: userText, kind: null });
  }
  messages.push({ role: "system", text: outcome.text, kind: outcome.kind });
  return {
    token: view.token,
    phase: outcome.phase,
    messages,
    panel: outcome.status_panel,
    finalReply: outcome.kind === "final_reply" ? outcome.reply_id : view.finalReply,
    explanation: outcome.explanation ?? view.explanation,
  };
}

export function viewFromSnapshot(snapshot: Snapshot): SessionView {
  return {
    token: snapshot.session_id,
    phase: snapshot.phase,
    messages: snapshot.transcript.map((row) => ({
      role: row.role,
      text: row.text,
      kind: row.outcome_kind,
    })),
    panel: snapshot.status_panel,
    finalReply: snapshot.final_reply,
    explanation: snapshot.explanation,
  };
}
