import type { HistoryItem, InteractResponse, ModelInfo } from "./types.js";

export class ServiceError extends Error {
  readonly code: string;
  readonly status: number;

  constructor(code: string, message: string, status = 0) {
    super(message);
    this.code = code;
    this.status = status;
  }
}

async function errorFrom(res: Response): Promise<ServiceError> {
  try {
    const body = await res.json();
    const detail = body?.detail;
    if (detail && typeof detail.code === "string") {
      return new ServiceError(detail.code, detail.message ?? "", res.status);
    }
  } catch {
    // non-JSON error body; fall through to the generic shape
  }
  return new ServiceError("HttpError", `request failed with ${res.status}`, res.status);
}

export class ApiClient {
  constructor(private baseUrl = "") {}

  private async request(path: string, init?: RequestInit): Promise<Response> {
    let res: Response;
    try {
      res = await fetch(this.baseUrl + path, init);
    } catch (e: any) {
      throw new ServiceError("Unreachable", e?.message ?? "server unreachable");
    }
    if (!res.ok) throw await errorFrom(res);
    return res;
  }

  async interact(text: string): Promise<InteractResponse> {
    const res = await this.request("/api/interact", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ text }),
    });
    return (await res.json()) as InteractResponse;
  }

  async history(n = 10): Promise<HistoryItem[]> {
    const res = await this.request(`/api/history?n=${n}`);
    return (await res.json()) as HistoryItem[];
  }

  async modelInfo(): Promise<ModelInfo> {
    const res = await this.request("/api/model/info");
    return (await res.json()) as ModelInfo;
  }
}

export interface Poller {
  stop(): void;
}

// History refresh: records created by other clients appear within one tick.
export function startHistoryPolling(
  tick: () => Promise<void>,
  intervalMs = 2000,
): Poller {
  let inFlight = false;
  const id = setInterval(() => {
    if (inFlight) return; // never stack requests on a slow server
    inFlight = true;
    tick()
      .catch(() => {})
      .finally(() => {
        inFlight = false;
      });
  }, intervalMs);
  return { stop: () => clearInterval(id) };
}
