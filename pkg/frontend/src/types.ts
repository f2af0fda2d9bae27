// Shapes of the HTTP interface. The console knows nothing else about the server.

export const EMOTION_ORDER = [
  "Anticipation",
  "Joy",
  "Trust",
  "Fear",
  "Surprise",
  "Sadness",
  "Disgust",
  "Anger",
] as const;

export type Emotion = (typeof EMOTION_ORDER)[number];

export interface Behaviors {
  goal: string;
  self: string;
  other: string;
}

export interface InteractResponse {
  text: string;
  distribution: Record<string, number>;
  dominant: string;
  intensity: number;
  valence: string;
  agent_emotion: string;
  event_goal: string;
  behaviors: Behaviors;
  bml: string;
  record_id: number;
  timestamp: string;
}

export interface HistoryItem {
  record_id: number;
  timestamp: string;
  text: string;
  dominant: string;
  intensity: number;
  valence: string;
  bml_id: string;
  distribution: Record<string, number>;
}

export interface ModelInfo {
  checkpoint_sha256: string;
  hyperparameters: Record<string, unknown>;
  emotion_order: string[];
  vocab_size: number;
  seed: number | null;
}
