import type { RankedRouteEntry } from "./api";
import { decodePolyline } from "./polyline";
import type { LatLng } from "./polyline";

export interface Viewport {
  minLat: number;
  maxLat: number;
  minLng: number;
  maxLng: number;
}

// shown before any query returns geometry to frame
export const DEFAULT_VIEWPORT: Viewport = { minLat: -60, maxLat: 60, minLng: -180, maxLng: 180 };

const PAD_FRACTION = 0.12;

export function routeColor(rank: number, selected: boolean): string {
  if (selected) return "#d97706";
  return rank === 0 ? "#2563eb" : "#94a3b8";
}

function pad(viewport: Viewport): Viewport {
  const latSpan = Math.max(viewport.maxLat - viewport.minLat, 1e-4);
  const lngSpan = Math.max(viewport.maxLng - viewport.minLng, 1e-4);
  return {
    minLat: viewport.minLat - latSpan * PAD_FRACTION,
    maxLat: viewport.maxLat + latSpan * PAD_FRACTION,
    minLng: viewport.minLng - lngSpan * PAD_FRACTION,
    maxLng: viewport.maxLng + lngSpan * PAD_FRACTION,
  };
}

/** Bounding box over every route's geometry, or null when there is none. */
export function routeBounds(routes: RankedRouteEntry[]): Viewport | null {
  let box: Viewport | null = null;
  for (const route of routes) {
    for (const point of decodePolyline(route.polyline)) {
      if (box === null) {
        box = { minLat: point.lat, maxLat: point.lat, minLng: point.lng, maxLng: point.lng };
      } else {
        box.minLat = Math.min(box.minLat, point.lat);
        box.maxLat = Math.max(box.maxLat, point.lat);
        box.minLng = Math.min(box.minLng, point.lng);
        box.maxLng = Math.max(box.maxLng, point.lng);
      }
    }
  }
  return box === null ? null : pad(box);
}

function toCanvas(viewport: Viewport, width: number, height: number, point: LatLng): [number, number] {
  const x = ((point.lng - viewport.minLng) / (viewport.maxLng - viewport.minLng)) * width;
  const y = (1 - (point.lat - viewport.minLat) / (viewport.maxLat - viewport.minLat)) * height;
  return [x, y];
}

/** Inverse of the drawing transform, for click-to-set-endpoint entry. */
export function canvasToLatLng(viewport: Viewport, width: number, height: number, x: number, y: number): LatLng {
  const lng = viewport.minLng + (x / width) * (viewport.maxLng - viewport.minLng);
  const lat = viewport.minLat + (1 - y / height) * (viewport.maxLat - viewport.minLat);
  return { lat, lng };
}

function context2d(canvas: HTMLCanvasElement): CanvasRenderingContext2D | null {
  try {
    return canvas.getContext("2d");
  } catch {
    // test DOMs have no canvas backend
    return null;
  }
}

function drawMarker(ctx: CanvasRenderingContext2D, x: number, y: number, fill: string, label: string): void {
  ctx.beginPath();
  ctx.arc(x, y, 6, 0, Math.PI * 2);
  ctx.fillStyle = fill;
  ctx.fill();
  ctx.strokeStyle = "#ffffff";
  ctx.lineWidth = 2;
  ctx.stroke();
  ctx.fillStyle = "#1f2937";
  ctx.font = "11px sans-serif";
  ctx.fillText(label, x + 9, y + 4);
}

export interface MapScene {
  routes: RankedRouteEntry[];
  selectedRouteId: string | null;
  origin: LatLng | null;
  destination: LatLng | null;
}

/**
 * Paint the scene and return the viewport used, which callers keep for
 * translating later clicks. Rank 0 is drawn last and emphasized; other
 * routes are muted. A selected route is restroked in a highlight color.
 */
export function drawMap(canvas: HTMLCanvasElement, scene: MapScene): Viewport {
  const viewport = routeBounds(scene.routes) ?? DEFAULT_VIEWPORT;
  const ctx = context2d(canvas);
  if (!ctx) return viewport;

  const { width, height } = canvas;
  ctx.clearRect(0, 0, width, height);
  ctx.fillStyle = "#f1f5f9";
  ctx.fillRect(0, 0, width, height);

  const byRankDescending = [...scene.routes].sort((a, b) => b.rank - a.rank);
  for (const route of byRankDescending) {
    const selected = route.id === scene.selectedRouteId;
    const path = decodePolyline(route.polyline);
    if (path.length < 2) continue;
    ctx.beginPath();
    path.forEach((point, i) => {
      const [x, y] = toCanvas(viewport, width, height, point);
      if (i === 0) ctx.moveTo(x, y);
      else ctx.lineTo(x, y);
    });
    ctx.strokeStyle = routeColor(route.rank, selected);
    ctx.lineWidth = selected ? 5 : route.rank === 0 ? 4 : 2;
    ctx.lineJoin = "round";
    ctx.lineCap = "round";
    ctx.stroke();
  }

  if (scene.origin) {
    const [x, y] = toCanvas(viewport, width, height, scene.origin);
    drawMarker(ctx, x, y, "#16a34a", "start");
  }
  if (scene.destination) {
    const [x, y] = toCanvas(viewport, width, height, scene.destination);
    drawMarker(ctx, x, y, "#dc2626", "end");
  }
  return viewport;
}
