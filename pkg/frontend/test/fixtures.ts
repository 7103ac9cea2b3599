/** Hand-built payloads shaped like the service's JSON responses. */

import type {
  Explanation,
  PanelEntry,
  PanelStateName,
  TurnOutcome,
} from "../src/api.js";

const DESCRIPTIONS: Record<string, string> = {
  woman: "the applicant is a woman",
  man: "the applicant is a man",
  Nigeria: "the applicant comes from Nigeria",
  others: "the applicant comes from a country other than Nigeria",
};

export function panel(states: Record<string, PanelStateName>): PanelEntry[] {
  return Object.keys(DESCRIPTIONS).map((id) => ({
    argument_id: id,
    description: DESCRIPTIONS[id],
    state: states[id] ?? "unknown",
  }));
}

export function outcome(overrides: Partial<TurnOutcome> = {}): TurnOutcome {
  return {
    kind: "ask_question",
    text: "Do you come from Nigeria?",
    phase: "collecting",
    question_id: null,
    reply_id: null,
    explanation: null,
    status_panel: panel({}),
    ...overrides,
  };
}

export const GREETING = outcome({
  kind: "greeting",
  text: "Hello! Tell me about your situation.",
});

export const EXPLANATION_P1: Explanation = {
  reply: "P1",
  endorsers: ["woman"],
  neutralizations: [{ attacker: "others", defender: "Nigeria" }],
  why_nots: [
    { reply: "P2", reason: "attacked_by", argument: "woman" },
    { reply: "NONE", reason: "lower_priority", argument: null },
  ],
};

export const FINAL_P1 = outcome({
  kind: "final_reply",
  text: "protection P1, intended for women",
  phase: "concluded",
  reply_id: "P1",
  explanation: EXPLANATION_P1,
  status_panel: panel({ woman: "active", man: "excluded", Nigeria: "active", others: "excluded" }),
});
