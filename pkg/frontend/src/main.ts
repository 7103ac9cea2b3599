/** Page controller: boots a session, posts turns, polls the snapshot.
 *
 * The session token lives in the URL fragment, so a reload (or a shared
 * link on the same machine) reconstructs the view from the snapshot
 * endpoint instead of starting over. At most one message post is in
 * flight at a time; the 1 s snapshot poll pauses while posting and
 * stops for good once the session concludes.
 */

import { ApiClient, ApiError, type FetchLike } from "./api.js";
import { applyOutcome, emptyView, viewFromSnapshot, type SessionView } from "./state.js";
import { mountSkeleton, render } from "./render.js";

export interface AppOptions {
  baseUrl?: string;
  fetchFn?: FetchLike;
  /** Snapshot poll interval in ms; 0 disables polling and boot retries. */
  pollMs?: number;
}

export interface App {
  ready: Promise<void>;
  view(): SessionView;
  send(text: string): Promise<void>;
  stop(): void;
}

export const CONNECTION_LOST = "Connection lost - retrying...";

export function initApp(root: HTMLElement, options: AppOptions = {}): App {
  const doc = root.ownerDocument;
  const win = doc.defaultView;
  if (!win) throw new Error("document has no window");
  const api = new ApiClient(options.baseUrl ?? "", options.fetchFn);
  const pollMs = options.pollMs ?? 1000;

  mountSkeleton(root);
  const banner = root.querySelector<HTMLElement>("#banner")!;
  const input = root.querySelector<HTMLInputElement>("#input")!;
  const sendButton = root.querySelector<HTMLButtonElement>("#send")!;
  const composer = root.querySelector<HTMLFormElement>("#composer")!;

  let view = emptyView("");
  let posting = false;
  let timer: number | null = null;
  let stopped = false;

  const paint = (): void => render(view, root);

  function showBanner(text: string): void {
    banner.textContent = text;
    banner.classList.remove("hidden");
  }

  function hideBanner(): void {
    banner.textContent = "";
    banner.classList.add("hidden");
  }

  function stopPolling(): void {
    if (timer !== null) {
      win!.clearInterval(timer);
      timer = null;
    }
  }

  function schedulePolling(): void {
    if (pollMs <= 0 || timer !== null || stopped || view.phase === "concluded") return;
    timer = win!.setInterval(() => {
      void poll();
    }, pollMs);
  }

  async function poll(): Promise<void> {
    if (posting || stopped || !view.token) return;
    if (view.phase === "concluded") {
      stopPolling();
      return;
    }
    try {
      view = viewFromSnapshot(await api.getSnapshot(view.token));
      hideBanner();
      paint();
      if (view.phase === "concluded") stopPolling();
    } catch {
      showBanner(CONNECTION_LOST);
    }
  }

  async function boot(): Promise<void> {
    const token = win!.location.hash.replace(/^#/, "");
    try {
      if (token) {
        view = viewFromSnapshot(await api.getSnapshot(token));
      } else {
        const created = await api.createSession();
        win!.location.hash = created.session_id;
        view = applyOutcome(emptyView(created.session_id), null, created.outcome);
      }
      hideBanner();
      paint();
      schedulePolling();
    } catch {
      showBanner(CONNECTION_LOST);
      if (pollMs > 0 && !stopped) {
        win!.setTimeout(() => {
          void boot();
        }, pollMs);
      }
    }
  }

  async function send(text: string): Promise<void> {
    const trimmed = text.trim();
    if (!trimmed || posting || stopped || !view.token || view.phase === "concluded") return;
    posting = true;
    input.disabled = true;
    sendButton.disabled = true;
    try {
      const { outcome } =
        view.phase === "clarifying"
          ? await api.postClarification(view.token, trimmed)
          : await api.postMessage(view.token, trimmed);
      view = applyOutcome(view, trimmed, outcome);
      input.value = "";
      hideBanner();
    } catch (err) {
      showBanner(err instanceof ApiError ? `${err.code}: ${err.message}` : CONNECTION_LOST);
    } finally {
      posting = false;
      paint();
      if (view.phase === "concluded") stopPolling();
    }
  }

  composer.addEventListener("submit", (event) => {
    event.preventDefault();
    void send(input.value);
  });

  return {
    ready: boot(),
    view: () => view,
    send,
    stop: () => {
      stopped = true;
      stopPolling();
    },
  };
}
