/** DOM rendering. Every pane is a function of one SessionView; calling
 * render twice with the same view must produce the same markup. Colors
 * are carried by state-* classes and doubled as text labels so the
 * panel stays readable without color vision.
 */

import type { Explanation, PanelEntry, WhyNot } from "./api.js";
import type { SessionView } from "./state.js";

const KIND_CLASS: Record<string, string> = {
  greeting: "msg-greeting",
  ask_question: "msg-question",
  ask_clarification: "msg-clarify",
  final_reply: "msg-final",
  acknowledged: "msg-ack",
};

const STATE_LABEL: Record<string, string> = {
  active: "confirmed",
  excluded: "ruled out",
  unknown: "unknown",
};

export function mountSkeleton(root: HTMLElement): void {
  root.innerHTML = `
<div id="banner" class="banner hidden"></div>
<div class="layout">
  <section class="chat-pane">
    <h1>Protection assistant</h1>
    <div id="chat" class="chat"></div>
    <form id="composer" class="composer">
      <input id="input" type="text" autocomplete="off"
             placeholder="Tell me about your situation...">
      <button id="send" type="submit">Send</button>
    </form>
  </section>
  <aside class="status-pane">
    <h2>What I know so far</h2>
    <ul id="status" class="status-list"></ul>
  </aside>
</div>
<section id="explanation-wrap" class="explanation hidden">
  <h2>Why this reply</h2>
  <div id="explanation"></div>
</section>`;
}

function make(doc: Document, tag: string, className: string, text?: string): HTMLElement {
  const node = doc.createElement(tag);
  node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function renderChat(view: SessionView, container: HTMLElement): void {
  const doc = container.ownerDocument;
  container.textContent = "";
  for (const message of view.messages) {
    const kindClass = message.kind ? ` ${KIND_CLASS[message.kind] ?? ""}` : "";
    const bubble = make(doc, "div", `msg msg-${message.role}${kindClass}`.trimEnd());
    if (message.kind === "final_reply" && view.finalReply) {
      bubble.dataset.replyId = view.finalReply;
      bubble.append(make(doc, "span", "reply-id", view.finalReply));
    }
    bubble.append(make(doc, "span", "msg-text", message.text));
    if (message.kind === "final_reply") {
      const link = make(doc, "a", "view-explanation", "view explanation");
      (link as HTMLAnchorElement).href = "#explanation-wrap";
      bubble.append(link);
    }
    container.append(bubble);
  }
}

export function renderStatus(view: SessionView, container: HTMLElement): void {
  const doc = container.ownerDocument;
  container.textContent = "";
  for (const entry of view.panel) {
    const item = make(doc, "li", `status state-${entry.state}`);
    item.dataset.argumentId = entry.argument_id;
    item.append(make(doc, "span", "fact", entry.description));
    item.append(make(doc, "span", "state-label", STATE_LABEL[entry.state] ?? entry.state));
    container.append(item);
  }
}

function whyNotText(why: WhyNot, describe: (id: string) => string): string {
  switch (why.reason) {
    case "attacked_by":
      return `Not ${why.reply}: contradicted by your statement that ${describe(why.argument ?? "")}`;
    case "no_endorser_in_s":
      return `Not ${why.reply}: nothing you told me supports it`;
    case "undefended_attack":
      return `Not ${why.reply}: the counter-argument "${describe(why.argument ?? "")}" stands unanswered`;
    case "lower_priority":
      return `Not ${why.reply}: a stronger reply already applies`;
    default:
      return `Not ${why.reply}: ${why.reason}`;
  }
}

export function renderExplanation(view: SessionView, container: HTMLElement): void {
  const doc = container.ownerDocument;
  container.textContent = "";
  const explanation: Explanation | null = view.explanation;
  if (!explanation) return;

  // The panel carries every status argument's description; replies and
  // anything else fall back to their raw id.
  const names = new Map(view.panel.map((e: PanelEntry) => [e.argument_id, e.description]));
  const describe = (id: string): string => names.get(id) ?? id;

  const list = make(doc, "ul", "explanation-list");
  for (const endorser of explanation.endorsers) {
    const item = make(doc, "li", "endorsement", `Supported because: ${describe(endorser)}`);
    item.dataset.argumentId = endorser;
    list.append(item);
  }
  for (const pair of explanation.neutralizations) {
    const item = make(
      doc,
      "li",
      "neutralization",
      `Attack from ${describe(pair.attacker)} neutralized by ${describe(pair.defender)}`,
    );
    item.dataset.attacker = pair.attacker;
    item.dataset.defender = pair.defender;
    list.append(item);
  }
  for (const why of explanation.why_nots) {
    const item = make(doc, "li", "why-not", whyNotText(why, describe));
    item.dataset.reply = why.reply;
    list.append(item);
  }
  container.append(list);
}

/** Repaint every pane under `root` (which must hold the skeleton). */
export function render(view: SessionView, root: HTMLElement): void {
  const pane = (selector: string): HTMLElement => {
    const node = root.querySelector<HTMLElement>(selector);
    if (!node) throw new Error(`missing pane ${selector}`);
    return node;
  };
  renderChat(view, pane("#chat"));
  renderStatus(view, pane("#status"));
  renderExplanation(view, pane("#explanation"));
  pane("#explanation-wrap").classList.toggle("hidden", !view.explanation);

  const concluded = view.phase === "concluded";
  const input = pane("#input") as HTMLInputElement;
  const send = pane("#send") as HTMLButtonElement;
  input.disabled = concluded;
  send.disabled = concluded;
  input.placeholder = concluded
    ? "The session has concluded."
    : "Tell me about your situation...";
}
