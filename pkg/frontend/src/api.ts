import type { LatLng } from "./polyline";

export type Preference = "shortest" | "comfort" | "challenge";

export const PREFERENCES: Preference[] = ["shortest", "comfort", "challenge"];

export interface RouteProfile {
  d: number[];
  e: number[];
}

export interface RankedRouteEntry {
  id: string;
  points: number;
  od_m: number;
  wd_m: number;
  rank: number;
  profile: RouteProfile;
  polyline: string;
}

export interface RankReport {
  preference: Preference;
  alpha: number;
  routes: RankedRouteEntry[];
}

export interface RankRequest {
  origin: LatLng;
  destination: LatLng;
  preference: Preference;
  alpha?: number;
  k?: number;
}

export interface HealthDocument {
  status: string;
  sources: { elevation: string; routes: string };
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/** Error envelope raised for non-2xx responses. `code` is the server's stable slug. */
export class ApiError extends Error {
  readonly code: string;
  readonly status: number;

  constructor(message: string, code: string, status: number) {
    super(message);
    this.name = "ApiError";
    this.code = code;
    this.status = status;
  }
}

// fetch must stay bound to the global object or browsers reject the call
const defaultFetch: FetchLike = (input, init) => fetch(input, init);

async function parseBody(res: Response): Promise<unknown> {
  try {
    return await res.json();
  } catch {
    return null;
  }
}

function envelopeOf(body: unknown): { code: string; message: string } | null {
  if (typeof body !== "object" || body === null) return null;
  const err = (body as { error?: unknown }).error;
  if (typeof err !== "object" || err === null) return null;
  const { code, message } = err as { code?: unknown; message?: unknown };
  if (typeof code !== "string" || typeof message !== "string") return null;
  return { code, message };
}

export async function rankRoutes(
  base: string,
  request: RankRequest,
  fetchImpl: FetchLike = defaultFetch,
  signal?: AbortSignal,
): Promise<RankReport> {
  const res = await fetchImpl(`${base}/v1/rank`, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(request),
    signal,
  });
  const body = await parseBody(res);
  if (!res.ok) {
    const envelope = envelopeOf(body);
    if (envelope) {
      throw new ApiError(envelope.message, envelope.code, res.status);
    }
    throw new ApiError(`rank request failed with status ${res.status}`, "http_error", res.status);
  }
  return body as RankReport;
}

export async function fetchHealth(
  base: string,
  fetchImpl: FetchLike = defaultFetch,
): Promise<HealthDocument> {
  const res = await fetchImpl(`${base}/v1/health`);
  if (!res.ok) {
    throw new ApiError(`health check failed with status ${res.status}`, "http_error", res.status);
  }
  return (await res.json()) as HealthDocument;
}
