import { ApiError } from "./api";
import type { FetchLike, Preference, RankRequest, RankedRouteEntry } from "./api";
import { drawElevationCurves } from "./chart";
import { debounce } from "./debounce";
import { DEFAULT_VIEWPORT, canvasToLatLng, drawMap, routeColor } from "./map";
import type { Viewport } from "./map";
import { parseLatLng } from "./polyline";
import { RankClient } from "./requests";
import { Store, routeInReport } from "./state";
import type { ViewState } from "./state";

export const DEBOUNCE_MS = 250;

export interface AppOptions {
  apiBase: string;
  fetchImpl?: FetchLike;
  debounceMs?: number;
}

export interface App {
  store: Store;
  client: RankClient;
  submit(): void;
  selectRoute(id: string): void;
}

interface Elements {
  origin: HTMLInputElement;
  destination: HTMLInputElement;
  submit: HTMLButtonElement;
  preferenceButtons: HTMLButtonElement[];
  alpha: HTMLInputElement;
  alphaValue: HTMLElement;
  banner: HTMLElement;
  statusLine: HTMLElement;
  routesBody: HTMLElement;
  detail: HTMLElement;
  map: HTMLCanvasElement;
  chart: HTMLCanvasElement;
}

function grab(doc: Document): Elements {
  const byId = <T extends HTMLElement>(id: string): T => {
    const el = doc.getElementById(id);
    if (!el) throw new Error(`missing element #${id}`);
    return el as T;
  };
  return {
    origin: byId<HTMLInputElement>("origin"),
    destination: byId<HTMLInputElement>("destination"),
    submit: byId<HTMLButtonElement>("submit"),
    preferenceButtons: Array.from(doc.querySelectorAll<HTMLButtonElement>("button[data-preference]")),
    alpha: byId<HTMLInputElement>("alpha"),
    alphaValue: byId("alpha-value"),
    banner: byId("banner"),
    statusLine: byId("status-line"),
    routesBody: byId("routes-body"),
    detail: byId("detail"),
    map: byId<HTMLCanvasElement>("map"),
    chart: byId<HTMLCanvasElement>("chart"),
  };
}

// exhaustive over Status; a new status will not compile without a line here
function statusText(state: ViewState): string {
  switch (state.status) {
    case "idle":
      return state.lastReport
        ? `${state.lastReport.routes.length} routes ranked by ${state.lastReport.preference}`
        : "Enter an origin and a destination, then rank routes.";
    case "loading":
      return "Ranking routes...";
    case "error":
      return "Request failed.";
  }
}

function bannerText(err: unknown): string {
  if (err instanceof ApiError && err.code === "no_route") return "No route found";
  if (err instanceof Error) return err.message;
  return String(err);
}

export function initApp(doc: Document, options: AppOptions): App {
  const els = grab(doc);
  const store = new Store();
  const client = new RankClient(options.apiBase, options.fetchImpl);
  let viewport: Viewport = DEFAULT_VIEWPORT;

  const routeRow = (route: RankedRouteEntry, selectedId: string | null): HTMLTableRowElement => {
    const row = doc.createElement("tr");
    row.dataset.routeId = route.id;
    if (route.id === selectedId) row.classList.add("selected");
    const chip = `<span class="chip" style="background:${routeColor(route.rank, route.id === selectedId)}"></span>`;
    row.innerHTML =
      `<td>${route.rank}</td>` +
      `<td>${chip}${route.id}</td>` +
      `<td class="num od">${Math.round(route.od_m)}</td>` +
      `<td class="num wd">${Math.round(route.wd_m)}</td>` +
      `<td class="num">${route.points}</td>`;
    row.addEventListener("click", () => selectRoute(route.id));
    return row;
  };

  const render = (state: ViewState): void => {
    els.submit.disabled = state.origin === null || state.destination === null || state.status === "loading";

    for (const button of els.preferenceButtons) {
      const active = button.dataset.preference === state.preference;
      button.classList.toggle("active", active);
      button.setAttribute("aria-pressed", String(active));
    }
    els.alpha.value = String(state.alpha);
    els.alphaValue.textContent = String(state.alpha);

    els.statusLine.textContent = statusText(state);
    els.statusLine.dataset.status = state.status;
    if (state.status === "error") {
      els.banner.hidden = false;
      els.banner.textContent = state.errorMessage ?? "Request failed";
    } else {
      els.banner.hidden = true;
      els.banner.textContent = "";
    }

    const routes = state.lastReport?.routes ?? [];
    els.routesBody.textContent = "";
    // report order only; ordering is the server's call
    for (const route of routes) {
      els.routesBody.appendChild(routeRow(route, state.selectedRouteId));
    }

    const selected = routes.find((route) => route.id === state.selectedRouteId);
    if (selected) {
      els.detail.innerHTML =
        `<h3>${selected.id}</h3>` +
        `<dl>` +
        `<dt>od</dt><dd>${Math.round(selected.od_m)} m</dd>` +
        `<dt>wd</dt><dd>${Math.round(selected.wd_m)} m</dd>` +
        `<dt>points</dt><dd>${selected.points}</dd>` +
        `</dl>`;
    } else {
      els.detail.textContent = routes.length > 0 ? "Click a route to inspect it." : "";
    }

    viewport = drawMap(els.map, {
      routes,
      selectedRouteId: state.selectedRouteId,
      origin: state.origin,
      destination: state.destination,
    });
    drawElevationCurves(els.chart, routes, state.selectedRouteId);
  };

  const runQuery = (): void => {
    const state = store.get();
    if (state.origin === null || state.destination === null) return;
    const request: RankRequest = {
      origin: state.origin,
      destination: state.destination,
      preference: state.preference,
      alpha: state.alpha,
    };
    store.update({ status: "loading" });
    void client.rank(request).then(
      (report) => {
        if (report === null) return; // superseded by a newer query
        store.update({ lastReport: report, status: "idle", errorMessage: null });
      },
      (err) => {
        store.update({ status: "error", errorMessage: bannerText(err) });
      },
    );
  };

  // preference and alpha tweaks refresh an existing result set only;
  // the first query always goes through the submit button
  const requery = (): void => {
    const state = store.get();
    if (state.lastReport === null && state.status !== "loading") return;
    runQuery();
  };
  const debouncedRequery = debounce(requery, options.debounceMs ?? DEBOUNCE_MS);

  const selectRoute = (id: string): void => {
    const state = store.get();
    if (state.selectedRouteId === id) return;
    if (!routeInReport(state.lastReport, id)) {
      console.warn(`ignoring selection of unknown route id ${JSON.stringify(id)}`);
      return;
    }
    store.update({ selectedRouteId: id });
  };

  const readEndpoint = (input: HTMLInputElement, key: "origin" | "destination"): void => {
    const text = input.value.trim();
    const point = text === "" ? null : parseLatLng(text);
    input.classList.toggle("invalid", text !== "" && point === null);
    store.update({ [key]: point });
  };

  els.origin.addEventListener("input", () => readEndpoint(els.origin, "origin"));
  els.destination.addEventListener("input", () => readEndpoint(els.destination, "destination"));
  els.submit.addEventListener("click", () => runQuery());

  for (const button of els.preferenceButtons) {
    button.addEventListener("click", () => {
      const preference = button.dataset.preference as Preference;
      if (preference === store.get().preference) return;
      store.update({ preference });
      requery();
    });
  }

  els.alpha.addEventListener("input", () => {
    const value = Number(els.alpha.value);
    if (!(value >= 0)) return;
    store.update({ alpha: value });
    debouncedRequery();
  });

  els.map.addEventListener("click", (ev) => {
    const rect = els.map.getBoundingClientRect();
    const scaleX = rect.width > 0 ? els.map.width / rect.width : 1;
    const scaleY = rect.height > 0 ? els.map.height / rect.height : 1;
    const x = (ev.clientX - rect.left) * scaleX;
    const y = (ev.clientY - rect.top) * scaleY;
    const point = canvasToLatLng(viewport, els.map.width, els.map.height, x, y);
    const rounded = { lat: Number(point.lat.toFixed(6)), lng: Number(point.lng.toFixed(6)) };
    const text = `${rounded.lat},${rounded.lng}`;
    const state = store.get();
    if (state.origin === null) {
      els.origin.value = text;
      els.origin.classList.remove("invalid");
      store.update({ origin: rounded });
    } else if (state.destination === null) {
      els.destination.value = text;
      els.destination.classList.remove("invalid");
      store.update({ destination: rounded });
    } else {
      els.origin.value = text;
      els.destination.value = "";
      store.update({ origin: rounded, destination: null });
    }
  });

  store.subscribe(render);
  render(store.get());

  return { store, client, submit: runQuery, selectRoute };
}
