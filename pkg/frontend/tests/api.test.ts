import { afterEach, describe, expect, it, vi } from "vitest";

import { ApiClient, ServiceError, startHistoryPolling } from "../src/api.js";

function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

const INTERACT_BODY = {
  text: "hi",
  distribution: {},
  dominant: "Joy",
  intensity: 1,
  valence: "Positive",
  agent_emotion: "Joy",
  event_goal: "Safe, Sustain",
  behaviors: { goal: "Jump up, Celebrate", self: "Retain", other: "Affiliate" },
  bml: "<bml/>",
  record_id: 1,
  timestamp: "t",
};

afterEach(() => {
  vi.restoreAllMocks();
  vi.useRealTimers();
});

describe("ApiClient", () => {
  it("posts the utterance as JSON and parses the reply", async () => {
    const fetchMock = vi
      .spyOn(globalThis, "fetch")
      .mockResolvedValue(jsonResponse(200, INTERACT_BODY));
    const api = new ApiClient("http://test");
    const out = await api.interact("hi");
    expect(out.record_id).toBe(1);
    const [url, init] = fetchMock.mock.calls[0]!;
    expect(String(url)).toBe("http://test/api/interact");
    expect(init?.method).toBe("POST");
    expect(init?.headers).toMatchObject({ "content-type": "application/json" });
    expect(JSON.parse(String(init?.body))).toEqual({ text: "hi" });
  });

  it("surfaces the server error envelope as a ServiceError", async () => {
    vi.spyOn(globalThis, "fetch").mockResolvedValue(
      jsonResponse(400, { detail: { code: "EmptyText", message: "utterance is empty" } }),
    );
    const api = new ApiClient("http://test");
    const err = await api.interact("").catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ServiceError);
    expect((err as ServiceError).code).toBe("EmptyText");
    expect((err as ServiceError).status).toBe(400);
    expect((err as ServiceError).message).toContain("utterance is empty");
  });

  it("maps a network failure to an Unreachable error", async () => {
    vi.spyOn(globalThis, "fetch").mockRejectedValue(new TypeError("connect refused"));
    const api = new ApiClient("http://test");
    const err = await api.history().catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ServiceError);
    expect((err as ServiceError).code).toBe("Unreachable");
  });

  it("passes the history limit as a query parameter", async () => {
    const fetchMock = vi
      .spyOn(globalThis, "fetch")
      .mockResolvedValue(jsonResponse(200, []));
    const api = new ApiClient("http://test");
    await api.history(5);
    expect(String(fetchMock.mock.calls[0]![0])).toBe("http://test/api/history?n=5");
  });

  it("tolerates an error body that is not the expected envelope", async () => {
    vi.spyOn(globalThis, "fetch").mockResolvedValue(
      new Response("gateway timeout", { status: 502 }),
    );
    const api = new ApiClient("http://test");
    const err = await api.modelInfo().catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ServiceError);
    expect((err as ServiceError).status).toBe(502);
  });
});

describe("startHistoryPolling", () => {
  it("ticks on the configured interval until stopped", async () => {
    vi.useFakeTimers();
    const seen: number[] = [];
    let calls = 0;
    const poller = startHistoryPolling(async () => {
      calls += 1;
      seen.push(calls);
    }, 2000);

    await vi.advanceTimersByTimeAsync(1999);
    expect(calls).toBe(0);
    await vi.advanceTimersByTimeAsync(1);
    expect(calls).toBe(1);
    await vi.advanceTimersByTimeAsync(4000);
    expect(calls).toBe(3);

    poller.stop();
    await vi.advanceTimersByTimeAsync(10000);
    expect(calls).toBe(3);
    expect(seen).toEqual([1, 2, 3]);
  });

  it("skips a tick while the previous one is still in flight", async () => {
    vi.useFakeTimers();
    let started = 0;
    let release: () => void = () => {};
    const gate = new Promise<void>((resolve) => {
      release = resolve;
    });
    const poller = startHistoryPolling(async () => {
      started += 1;
      if (started === 1) await gate;
    }, 2000);

    await vi.advanceTimersByTimeAsync(2000);
    expect(started).toBe(1);
    // first tick still pending; the next two intervals must not stack
    await vi.advanceTimersByTimeAsync(4000);
    expect(started).toBe(1);

    release();
    await vi.advanceTimersByTimeAsync(2000);
    expect(started).toBe(2);
    poller.stop();
  });
});
