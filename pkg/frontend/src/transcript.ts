import type { InteractResponse } from "./types.js";

export function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;");
}

// Conversation so far, ordered the way the server numbered it.
export class Transcript {
  private items: InteractResponse[] = [];

  add(item: InteractResponse): void {
    if (this.items.some((x) => x.record_id === item.record_id)) return;
    this.items.push(item);
    this.items.sort((a, b) => a.record_id - b.record_id);
  }

  all(): readonly InteractResponse[] {
    return this.items;
  }

  get length(): number {
    return this.items.length;
  }

  latest(): InteractResponse | undefined {
    return this.items[this.items.length - 1];
  }
}

export function renderTranscript(root: HTMLElement, transcript: Transcript): void {
  root.innerHTML = transcript
    .all()
    .map(
      (item) => `
      <div class="entry" data-record-id="${item.record_id}">
        <div class="you">you: ${esc(item.text)}</div>
        <div class="agent">
          <b>${item.dominant}</b> (${item.intensity.toFixed(3)}, ${item.valence})
          · self: ${esc(item.behaviors.self)} | other: ${esc(item.behaviors.other)}
        </div>
      </div>`,
    )
    .join("");
  root.scrollTop = root.scrollHeight;
}
