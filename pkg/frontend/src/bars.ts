import { EMOTION_ORDER } from "./types.js";

// Displayed to 3 decimals, so eight rounded values may drift from 1 by
// at most 8 * 0.0005.
const SUM_TOLERANCE = 0.004;

export function distributionValid(dist: Record<string, number>): boolean {
  let sum = 0;
  for (const name of EMOTION_ORDER) {
    const v = dist[name];
    if (typeof v !== "number" || !Number.isFinite(v) || v < 0 || v > 1) return false;
    sum += v;
  }
  return Math.abs(sum - 1) <= SUM_TOLERANCE;
}

export function renderBars(root: HTMLElement, dist: Record<string, number>): void {
  if (!distributionValid(dist)) {
    root.innerHTML = `<div class="bars-error">invalid distribution payload</div>`;
    return;
  }
  let top: string = EMOTION_ORDER[0];
  for (const name of EMOTION_ORDER) {
    if ((dist[name] ?? 0) > (dist[top] ?? 0)) top = name;
  }
  root.innerHTML = EMOTION_ORDER.map((name) => {
    const v = dist[name] ?? 0;
    const pct = Math.round(v * 100);
    const cls = name === top ? "bar-row dominant" : "bar-row";
    return `
      <div class="${cls}" data-emotion="${name}"
           style="display:flex;gap:8px;align-items:center;margin:3px 0">
        <span style="width:92px">${name}</span>
        <div style="flex:1;height:9px;background:#2a2a2e;border-radius:5px;overflow:hidden">
          <div style="width:${pct}%;height:100%;background:${name === top ? "#f6c34c" : "#8a8f98"}"></div>
        </div>
        <span class="bar-value" style="width:48px;text-align:right">${v.toFixed(3)}</span>
      </div>`;
  }).join("");
}
