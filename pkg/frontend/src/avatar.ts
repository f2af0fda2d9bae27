import type { BmlDoc, FaceLexeme } from "./bml.js";

// Simple 2D sprite set: one glyph per expression, consistent across the app.
export const SPRITES: Record<FaceLexeme, string> = {
  ANTICIPATION: "🤔",
  JOY: "😊",
  TRUST: "🤝",
  FEAR: "😨",
  SURPRISE: "😲",
  SADNESS: "😢",
  DISGUST: "🤢",
  ANGER: "😠",
};

const OPACITY_STEPS = [0.25, 0.5, 0.75, 1.0] as const;

// Quantized expression strength; anything faint still lands on a visible step.
export function opacityStep(amount: number): number {
  for (const step of OPACITY_STEPS) {
    if (amount <= step) return step;
  }
  return 1.0;
}

function badge(g: BmlDoc["self"]): string {
  const label = g.lexeme.replace(/_/g, " ");
  return `
    <span class="badge" data-mode="${g.mode}" data-lexeme="${g.lexeme}"
          title="${g.description}">
      <b>${g.mode}</b> ${label}
      <small>${g.start.toFixed(1)}s–${g.end.toFixed(1)}s</small>
    </span>`;
}

export function renderAvatar(root: HTMLElement, doc: BmlDoc): void {
  const sprite = SPRITES[doc.face.lexeme];
  const opacity = opacityStep(doc.face.amount);
  root.innerHTML = `
    <div class="sprite" data-emotion="${doc.face.lexeme}"
         style="font-size:72px;opacity:${opacity};text-align:center">${sprite}</div>
    <div class="badges" style="display:flex;gap:8px;justify-content:center">
      ${badge(doc.self)}${badge(doc.other)}
    </div>`;
}

export function clearAvatar(root: HTMLElement): void {
  root.innerHTML = `<div class="sprite" data-emotion="" style="opacity:.3;text-align:center;font-size:72px">…</div>`;
}
