import { spawn } from "node:child_process";
import type { ChildProcess } from "node:child_process";
import { join } from "node:path";

import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { fetchHealth } from "../src/api";
import type { FetchLike } from "../src/api";
import { initApp } from "../src/controller";
import { byId, clickPreference, mountApp, repoRoot, rowById, rowIds, setInput, waitFor } from "./helpers";

// exercises the UI against a live ranking server running on the repo fixtures

const PORT = 9700 + Math.floor(Math.random() * 2000);
const BASE = `http://127.0.0.1:${PORT}`;
const ORIGIN_TEXT = "34.861989,135.675334";
const DESTINATION_TEXT = "34.853106,135.693976";

let server: ChildProcess | null = null;
let serverLog = "";

const realFetch: FetchLike = (input, init) => fetch(input, init);

async function healthy(): Promise<boolean> {
  try {
    const res = await fetch(`${BASE}/v1/health`);
    return res.ok;
  } catch {
    return false;
  }
}

beforeAll(async () => {
  const config = join(repoRoot, "tests", "fixtures", "config.json");
  server = spawn(
    "python3",
    ["-m", "terrarank", "serve", "--config", config, "--host", "127.0.0.1", "--port", String(PORT)],
    { cwd: repoRoot, stdio: ["ignore", "ignore", "pipe"] },
  );
  server.stderr?.on("data", (chunk: Buffer) => {
    serverLog += chunk.toString();
  });
  try {
    const deadline = Date.now() + 45000;
    while (!(await healthy())) {
      if (Date.now() > deadline) {
        throw new Error(`ranking server never became healthy\n${serverLog}`);
      }
      await new Promise((resolve) => setTimeout(resolve, 200));
    }
  } catch (err) {
    server.kill();
    throw err;
  }
}, 60000);

afterAll(() => {
  server?.kill();
});

describe("fixture backend", () => {
  it("reports its sources on the health endpoint", async () => {
    const health = await fetchHealth(BASE, realFetch);
    expect(health.status).toBe("ok");
    expect(health.sources).toEqual({ elevation: "dem", routes: "file" });
  });

  it("ranks, flips preference, survives slider spam, and shows server distances", async () => {
    let rankCalls = 0;
    let inFlight = 0;
    let maxInFlight = 0;
    const countingFetch: FetchLike = async (input, init) => {
      const isRank = String(input).includes("/v1/rank");
      if (isRank) {
        rankCalls += 1;
        inFlight += 1;
        maxInFlight = Math.max(maxInFlight, inFlight);
      }
      try {
        return await fetch(input, init);
      } finally {
        if (isRank) inFlight -= 1;
      }
    };

    const dom = mountApp();
    const app = initApp(dom.window.document, { apiBase: BASE, fetchImpl: countingFetch });

    // first query: comfort is the default preference
    setInput(dom, "origin", ORIGIN_TEXT);
    setInput(dom, "destination", DESTINATION_TEXT);
    byId<HTMLButtonElement>(dom, "submit").click();
    await waitFor(() => app.store.get().lastReport !== null, 10000, "first report");

    expect(rowIds(dom)).toEqual(["route1", "route0", "route2"]);
    expect(rowById(dom, "route0").querySelector("td.od")?.textContent).toBe("1563");

    // flipping to challenge puts the steep route on top
    clickPreference(dom, "challenge");
    await waitFor(() => app.store.get().lastReport?.preference === "challenge", 10000, "challenge report");
    const first = app.store.get().lastReport?.routes[0];
    expect(first?.id).toBe("route2");
    expect(first?.rank).toBe(0);
    expect(rowIds(dom)[0]).toBe("route2");

    // hammering the slider must collapse to one trailing request
    const callsBefore = rankCalls;
    for (let value = 11; value <= 40; value++) {
      setInput(dom, "alpha", String(value));
    }
    await waitFor(() => app.store.get().lastReport?.alpha === 40, 10000, "debounced alpha report");
    expect(rankCalls).toBe(callsBefore + 1);
    expect(maxInFlight).toBeLessThanOrEqual(1);

    // selection shows the server's numbers and survives a re-query
    rowById(dom, "route0").click();
    expect(byId(dom, "detail").textContent).toContain("1563 m");
    clickPreference(dom, "comfort");
    await waitFor(() => app.store.get().lastReport?.preference === "comfort", 10000, "comfort report");
    expect(app.store.get().selectedRouteId).toBe("route0");

    // with a zero slope weight, comfort order collapses to shortest order
    setInput(dom, "alpha", "0");
    await waitFor(() => app.store.get().lastReport?.alpha === 0, 10000, "alpha zero report");
    expect(rowIds(dom)).toEqual(["route0", "route1", "route2"]);
    const routes = app.store.get().lastReport?.routes ?? [];
    for (const route of routes) {
      expect(route.wd_m).toBeCloseTo(route.od_m, 6);
    }

    expect(maxInFlight).toBeLessThanOrEqual(1);
  }, 60000);

  it("shows the no-route banner when origin equals destination", async () => {
    const dom = mountApp();
    const app = initApp(dom.window.document, { apiBase: BASE, fetchImpl: realFetch });

    setInput(dom, "origin", ORIGIN_TEXT);
    setInput(dom, "destination", ORIGIN_TEXT);
    byId<HTMLButtonElement>(dom, "submit").click();
    await waitFor(() => app.store.get().status === "error", 10000, "error state");

    const banner = byId(dom, "banner");
    expect(banner.hidden).toBe(false);
    expect(banner.textContent).toBe("No route found");
  }, 30000);
});
