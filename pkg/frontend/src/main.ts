import { ApiClient, ServiceError, startHistoryPolling, type Poller } from "./api.js";
import { clearAvatar, renderAvatar } from "./avatar.js";
import { renderBars } from "./bars.js";
import { parseBml } from "./bml.js";
import { esc, renderTranscript, Transcript } from "./transcript.js";
import type { HistoryItem } from "./types.js";

export interface ConsoleElements {
  input: HTMLInputElement;
  send: HTMLButtonElement;
  transcript: HTMLElement;
  avatar: HTMLElement;
  bars: HTMLElement;
  history: HTMLElement;
  status: HTMLElement;
}

export function grab(doc: Document): ConsoleElements {
  const get = (id: string) => {
    const el = doc.getElementById(id);
    if (!el) throw new Error(`missing #${id}`);
    return el;
  };
  return {
    input: get("utterance") as HTMLInputElement,
    send: get("send") as HTMLButtonElement,
    transcript: get("transcript"),
    avatar: get("avatar"),
    bars: get("bars"),
    history: get("history"),
    status: get("status"),
  };
}

export class ConsoleApp {
  readonly transcript = new Transcript();
  private historyItems: HistoryItem[] = [];
  private selectedRecord: number | null = null;
  private pending = false;
  private poller: Poller | null = null;

  constructor(
    private api: ApiClient,
    private el: ConsoleElements,
  ) {
    el.send.addEventListener("click", () => void this.submit());
    el.input.addEventListener("keydown", (e: KeyboardEvent) => {
      if (e.key === "Enter") void this.submit();
    });
    el.history.addEventListener("click", (e: Event) => {
      const row = (e.target as HTMLElement).closest("[data-record-id]");
      if (row) this.selectHistory(Number(row.getAttribute("data-record-id")));
    });
    clearAvatar(el.avatar);
  }

  get inFlight(): boolean {
    return this.pending;
  }

  setStatus(text: string, kind: "ok" | "error" = "ok"): void {
    this.el.status.textContent = text;
    this.el.status.dataset.kind = kind;
  }

  async submit(): Promise<void> {
    const text = this.el.input.value.trim();
    if (!text || this.pending) return;
    this.pending = true;
    this.el.input.disabled = true;
    this.el.send.disabled = true;
    try {
      const response = await this.api.interact(text);
      this.transcript.add(response);
      renderTranscript(this.el.transcript, this.transcript);
      renderBars(this.el.bars, response.distribution);
      renderAvatar(this.el.avatar, parseBml(response.bml));
      this.el.input.value = ""; // consumed; errors below leave it for retry
      this.setStatus(`#${response.record_id} ${response.dominant} (${response.valence})`);
    } catch (e: any) {
      const message =
        e instanceof ServiceError ? `${e.code}: ${e.message}` : String(e?.message ?? e);
      this.setStatus(message, "error");
    } finally {
      this.pending = false;
      this.el.input.disabled = false;
      this.el.send.disabled = false;
    }
  }

  async refreshHistory(): Promise<void> {
    this.historyItems = await this.api.history(10);
    this.renderHistory();
  }

  selectHistory(recordId: number): void {
    const item = this.historyItems.find((h) => h.record_id === recordId);
    if (!item) return;
    this.selectedRecord = recordId;
    renderBars(this.el.bars, item.distribution);
    this.renderHistory();
  }

  private renderHistory(): void {
    this.el.history.innerHTML = this.historyItems
      .map((h) => {
        const cls = h.record_id === this.selectedRecord ? "hist selected" : "hist";
        return `
        <div class="${cls}" data-record-id="${h.record_id}">
          <span>#${h.record_id}</span> ${esc(h.dominant)}
          <small>${esc(h.text.slice(0, 40))}</small>
        </div>`;
      })
      .join("");
  }

  startPolling(intervalMs = 2000): Poller {
    this.poller = startHistoryPolling(() => this.refreshHistory(), intervalMs);
    return this.poller;
  }

  stop(): void {
    this.poller?.stop();
    this.poller = null;
  }
}

export function boot(doc: Document, api = new ApiClient("")): ConsoleApp {
  const app = new ConsoleApp(api, grab(doc));
  api
    .modelInfo()
    .then((info) => {
      app.setStatus(
        `model ${info.checkpoint_sha256.slice(0, 12)} · vocab ${info.vocab_size}`,
      );
    })
    .catch((e) => app.setStatus(`${e.code ?? "Error"}: ${e.message}`, "error"));
  app.startPolling();
  return app;
}

// Browser entry point; tests build their own page and call boot themselves.
if (typeof document !== "undefined" && document.getElementById("utterance")) {
  boot(document);
}
