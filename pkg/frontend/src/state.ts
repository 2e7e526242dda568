import type { Preference, RankReport } from "./api";
import type { LatLng } from "./polyline";

export type Status = "idle" | "loading" | "error";

export interface ViewState {
  origin: LatLng | null;
  destination: LatLng | null;
  preference: Preference;
  alpha: number;
  lastReport: RankReport | null;
  selectedRouteId: string | null;
  status: Status;
  errorMessage: string | null;
}

export const initialState: ViewState = {
  origin: null,
  destination: null,
  preference: "comfort",
  alpha: 10,
  lastReport: null,
  selectedRouteId: null,
  status: "idle",
  errorMessage: null,
};

type Listener = (state: ViewState) => void;

/**
 * Holds the single view state and enforces its invariants on every write:
 * alpha is never negative, and a selected route id always refers to a
 * route present in the last report (otherwise the selection is dropped).
 */
export class Store {
  private state: ViewState;
  private listeners: Listener[] = [];

  constructor(start: ViewState = initialState) {
    this.state = enforce({ ...start });
  }

  get(): ViewState {
    return this.state;
  }

  subscribe(fn: Listener): () => void {
    this.listeners.push(fn);
    return () => {
      this.listeners = this.listeners.filter((each) => each !== fn);
    };
  }

  update(patch: Partial<ViewState>): ViewState {
    this.state = enforce({ ...this.state, ...patch });
    for (const fn of [...this.listeners]) {
      fn(this.state);
    }
    return this.state;
  }
}

export function routeInReport(report: RankReport | null, id: string | null): boolean {
  if (report === null || id === null) return false;
  return report.routes.some((route) => route.id === id);
}

function enforce(state: ViewState): ViewState {
  if (!(state.alpha >= 0)) {
    throw new Error(`alpha must be >= 0, got ${state.alpha}`);
  }
  if (state.selectedRouteId !== null && !routeInReport(state.lastReport, state.selectedRouteId)) {
    state.selectedRouteId = null;
  }
  return state;
}
