import { describe, expect, it } from "vitest";

import { ApiError } from "../src/api";
import type { FetchLike, RankReport, RankRequest } from "../src/api";
import { RankClient } from "../src/requests";

function reportFor(alpha: number): RankReport {
  return { preference: "comfort", alpha, routes: [] };
}

const REQUEST: RankRequest = {
  origin: { lat: 1, lng: 2 },
  destination: { lat: 3, lng: 4 },
  preference: "comfort",
  alpha: 10,
};

interface PendingCall {
  body: RankRequest;
  aborted: boolean;
  respond(payload: unknown, status?: number): void;
  fail(err: Error): void;
}

/**
 * A fetch stand-in whose responses are released by hand. Tracks how many
 * requests are live at once; honorAbort=false simulates a transport that
 * keeps going after the caller gave up.
 */
function fetchHarness(opts: { honorAbort?: boolean } = {}) {
  const calls: PendingCall[] = [];
  let active = 0;
  let maxActive = 0;

  const impl: FetchLike = (_input, init) => {
    active += 1;
    maxActive = Math.max(maxActive, active);
    return new Promise<Response>((resolve, reject) => {
      const call: PendingCall = {
        body: JSON.parse(String(init?.body)) as RankRequest,
        aborted: false,
        respond: (payload, status = 200) => {
          if (call.aborted) return;
          active -= 1;
          resolve(
            new Response(JSON.stringify(payload), {
              status,
              headers: { "Content-Type": "application/json" },
            }),
          );
        },
        fail: (err) => {
          if (call.aborted) return;
          active -= 1;
          reject(err);
        },
      };
      if (opts.honorAbort !== false) {
        init?.signal?.addEventListener("abort", () => {
          if (call.aborted) return;
          call.aborted = true;
          active -= 1;
          reject(new DOMException("aborted", "AbortError"));
        });
      }
      calls.push(call);
    });
  };

  return {
    impl,
    calls,
    stats: () => ({ active, maxActive }),
  };
}

describe("RankClient", () => {
  it("keeps at most one request in flight during a burst and applies the last", async () => {
    const harness = fetchHarness();
    const client = new RankClient("http://api.test", harness.impl);

    const outcomes = [1, 2, 3, 4, 5].map((alpha) => client.rank({ ...REQUEST, alpha }));
    expect(harness.stats().maxActive).toBe(1);
    expect(harness.calls.slice(0, 4).every((call) => call.aborted)).toBe(true);

    harness.calls[4].respond(reportFor(5));
    const settled = await Promise.all(outcomes);
    expect(settled.slice(0, 4)).toEqual([null, null, null, null]);
    expect(settled[4]?.alpha).toBe(5);
    expect(client.inFlight).toBe(0);
  });

  it("discards a stale response by sequence even when abort is ignored", async () => {
    const harness = fetchHarness({ honorAbort: false });
    const client = new RankClient("http://api.test", harness.impl);

    const first = client.rank({ ...REQUEST, alpha: 1 });
    const second = client.rank({ ...REQUEST, alpha: 2 });

    harness.calls[1].respond(reportFor(2));
    expect((await second)?.alpha).toBe(2);

    // the older response arrives afterwards and must not surface
    harness.calls[0].respond(reportFor(1));
    expect(await first).toBeNull();
  });

  it("swallows errors from a superseded request", async () => {
    const harness = fetchHarness({ honorAbort: false });
    const client = new RankClient("http://api.test", harness.impl);

    const first = client.rank({ ...REQUEST, alpha: 1 });
    const second = client.rank({ ...REQUEST, alpha: 2 });

    harness.calls[0].fail(new TypeError("connection reset"));
    harness.calls[1].respond(reportFor(2));

    expect(await first).toBeNull();
    expect((await second)?.alpha).toBe(2);
  });

  it("propagates a transport error from the current request", async () => {
    const harness = fetchHarness();
    const client = new RankClient("http://api.test", harness.impl);

    const outcome = client.rank(REQUEST);
    harness.calls[0].fail(new TypeError("connection refused"));
    await expect(outcome).rejects.toThrow("connection refused");
    expect(client.inFlight).toBe(0);
  });

  it("turns an error envelope into an ApiError with the server's code", async () => {
    const harness = fetchHarness();
    const client = new RankClient("http://api.test", harness.impl);

    const outcome = client.rank(REQUEST);
    harness.calls[0].respond({ error: { code: "no_route", message: "no route exists" } }, 404);

    const err = await outcome.catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect((err as ApiError).code).toBe("no_route");
    expect((err as ApiError).status).toBe(404);
  });

  it("sends the request body unchanged", async () => {
    const harness = fetchHarness();
    const client = new RankClient("http://api.test", harness.impl);

    const outcome = client.rank(REQUEST);
    expect(harness.calls[0].body).toEqual(REQUEST);
    harness.calls[0].respond(reportFor(10));
    await outcome;
  });
});
