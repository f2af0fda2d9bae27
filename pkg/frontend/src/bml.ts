// Canonical behavior-markup reader. Accepts exactly the schema the service
// emits: one <bml> root, one face directive, one SELF and one OTHER gesture.

export const FACE_LEXEMES = [
  "ANTICIPATION",
  "JOY",
  "TRUST",
  "FEAR",
  "SURPRISE",
  "SADNESS",
  "DISGUST",
  "ANGER",
] as const;

export const GESTURE_LEXEMES = [
  "ENTHUSIASTIC",
  "SEEK",
  "RETAIN",
  "AFFILIATE",
  "ACCEPT",
  "HELP",
  "DEFEND",
  "ESCAPE",
  "STARTLE",
  "EXAMINE",
  "REGRET",
  "IGNORE",
  "DEPART",
  "AVOID",
  "HATE",
  "APPROACH_AND_ATTACK",
] as const;

export type FaceLexeme = (typeof FACE_LEXEMES)[number];

export interface BmlFace {
  id: string;
  lexeme: FaceLexeme;
  amount: number;
  start: number;
  end: number;
}

export interface BmlGesture {
  id: string;
  lexeme: string;
  mode: "SELF" | "OTHER";
  description: string;
  start: number;
  end: number;
}

export interface BmlDoc {
  id: string;
  character: string;
  face: BmlFace;
  self: BmlGesture;
  other: BmlGesture;
}

export class BmlError extends Error {
  readonly issues: string[];

  constructor(issues: string[]) {
    super(issues.join("; "));
    this.issues = issues;
  }
}

function num(el: Element, name: string, issues: string[]): number {
  const raw = el.getAttribute(name);
  if (raw === null) {
    issues.push(`${el.tagName} missing ${name}`);
    return NaN;
  }
  const value = Number(raw);
  if (!Number.isFinite(value)) issues.push(`${el.tagName} ${name}=${raw}`);
  return value;
}

export function parseBml(xml: string): BmlDoc {
  const issues: string[] = [];
  const doc = new DOMParser().parseFromString(xml, "text/xml");
  if (doc.getElementsByTagName("parsererror").length > 0) {
    throw new BmlError(["malformed xml"]);
  }
  const root = doc.documentElement;
  if (root.tagName !== "bml") throw new BmlError([`root element ${root.tagName}`]);

  const faces = Array.from(root.children).filter((c) => c.tagName === "face");
  const gestures = Array.from(root.children).filter((c) => c.tagName === "gesture");
  for (const child of Array.from(root.children)) {
    if (child.tagName !== "face" && child.tagName !== "gesture") {
      issues.push(`unexpected element ${child.tagName}`);
    }
  }
  if (faces.length !== 1) issues.push(`expected 1 face, found ${faces.length}`);
  if (gestures.length !== 2) issues.push(`expected 2 gestures, found ${gestures.length}`);

  let face: BmlFace | null = null;
  if (faces.length === 1) {
    const el = faces[0]!;
    const lexeme = el.getAttribute("lexeme") ?? "";
    if (!(FACE_LEXEMES as readonly string[]).includes(lexeme)) {
      issues.push(`unknown face lexeme ${lexeme}`);
    }
    const amount = num(el, "amount", issues);
    const start = num(el, "start", issues);
    const end = num(el, "end", issues);
    if (Number.isFinite(amount) && !(amount > 0 && amount <= 1)) {
      issues.push(`amount ${amount} outside (0, 1]`);
    }
    if (Number.isFinite(start) && Number.isFinite(end) && !(start >= 0 && start < end)) {
      issues.push(`face timing [${start}, ${end}]`);
    }
    face = {
      id: el.getAttribute("id") ?? "",
      lexeme: lexeme as FaceLexeme,
      amount,
      start,
      end,
    };
  }

  const byMode: Partial<Record<"SELF" | "OTHER", BmlGesture>> = {};
  for (const el of gestures) {
    const mode = el.getAttribute("mode") ?? "";
    const lexeme = el.getAttribute("lexeme") ?? "";
    if (mode !== "SELF" && mode !== "OTHER") {
      issues.push(`gesture mode ${mode}`);
      continue;
    }
    if (!(GESTURE_LEXEMES as readonly string[]).includes(lexeme)) {
      issues.push(`unknown gesture lexeme ${lexeme}`);
    }
    const start = num(el, "start", issues);
    const end = num(el, "end", issues);
    if (Number.isFinite(start) && Number.isFinite(end) && !(start >= 0 && start < end)) {
      issues.push(`gesture timing [${start}, ${end}]`);
    }
    if (byMode[mode]) issues.push(`duplicate ${mode} gesture`);
    byMode[mode] = {
      id: el.getAttribute("id") ?? "",
      lexeme,
      mode,
      description: el.getAttribute("description") ?? "",
      start,
      end,
    };
  }
  if (gestures.length === 2 && (!byMode.SELF || !byMode.OTHER)) {
    issues.push("need exactly one SELF and one OTHER gesture");
  }

  if (issues.length > 0 || !face || !byMode.SELF || !byMode.OTHER) {
    throw new BmlError(issues.length ? issues : ["incomplete document"]);
  }
  return {
    id: root.getAttribute("id") ?? "",
    character: root.getAttribute("character") ?? "agent",
    face,
    self: byMode.SELF,
    other: byMode.OTHER,
  };
}
