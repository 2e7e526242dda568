import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { JSDOM } from "jsdom";

import type { RankReport } from "../src/api";

const here = dirname(fileURLToPath(import.meta.url));

export const repoRoot = join(here, "..", "..");

/** Load one of the checked-in report fixtures from the backend test suite. */
export function loadGolden(name: string): RankReport {
  const path = join(repoRoot, "tests", "fixtures", name);
  return JSON.parse(readFileSync(path, "utf8")) as RankReport;
}

/**
 * Build a DOM from the real page markup, minus the bootstrap script so
 * tests wire the app themselves. Canvas 2d contexts are stubbed out: the
 * test DOM has no raster backend and the app is expected to cope.
 */
export function mountApp(): JSDOM {
  const html = readFileSync(join(here, "..", "index.html"), "utf8");
  const withoutBootstrap = html.replace(/<script type="module"[^>]*><\/script>/, "");
  const dom = new JSDOM(withoutBootstrap, { url: "http://localhost/" });
  const proto = dom.window.HTMLCanvasElement.prototype as unknown as { getContext: () => null };
  proto.getContext = () => null;
  return dom;
}

export function byId<T extends HTMLElement>(dom: JSDOM, id: string): T {
  const el = dom.window.document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
}

export function setInput(dom: JSDOM, id: string, value: string): void {
  const input = byId<HTMLInputElement>(dom, id);
  input.value = value;
  input.dispatchEvent(new dom.window.Event("input"));
}

export function clickPreference(dom: JSDOM, preference: string): void {
  const button = dom.window.document.querySelector<HTMLButtonElement>(
    `button[data-preference="${preference}"]`,
  );
  if (!button) throw new Error(`no preference button for ${preference}`);
  button.click();
}

export function rowIds(dom: JSDOM): string[] {
  const rows = dom.window.document.querySelectorAll<HTMLTableRowElement>("#routes-body tr");
  return Array.from(rows).map((row) => row.dataset.routeId ?? "");
}

export function rowById(dom: JSDOM, id: string): HTMLTableRowElement {
  const row = dom.window.document.querySelector<HTMLTableRowElement>(`#routes-body tr[data-route-id="${id}"]`);
  if (!row) throw new Error(`no table row for ${id}`);
  return row;
}

export async function waitFor(check: () => boolean, timeoutMs = 5000, what = "condition"): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (!check()) {
    if (Date.now() > deadline) throw new Error(`timed out after ${timeoutMs}ms waiting for ${what}`);
    await new Promise((resolve) => setTimeout(resolve, 20));
  }
}

export function jsonResponse(payload: unknown, status = 200): Response {
  return new Response(JSON.stringify(payload), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}
