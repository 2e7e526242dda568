import type { RankedRouteEntry } from "./api";
import { routeColor } from "./map";

const MARGIN = { top: 10, right: 12, bottom: 22, left: 44 };

function context2d(canvas: HTMLCanvasElement): CanvasRenderingContext2D | null {
  try {
    return canvas.getContext("2d");
  } catch {
    return null;
  }
}

/**
 * Draw every route's elevation curve on one pair of axes: x is distance
 * from the route start in meters, y is elevation in meters. The selected
 * route (or rank 0 when nothing is selected) gets the heavy stroke.
 */
export function drawElevationCurves(
  canvas: HTMLCanvasElement,
  routes: RankedRouteEntry[],
  selectedRouteId: string | null,
): void {
  const ctx = context2d(canvas);
  if (!ctx) return;

  const { width, height } = canvas;
  ctx.clearRect(0, 0, width, height);
  ctx.fillStyle = "#ffffff";
  ctx.fillRect(0, 0, width, height);
  if (routes.length === 0) return;

  let maxD = 0;
  let minE = Infinity;
  let maxE = -Infinity;
  for (const route of routes) {
    const { d, e } = route.profile;
    if (d.length > 0) maxD = Math.max(maxD, d[d.length - 1]!);
    for (const value of e) {
      minE = Math.min(minE, value);
      maxE = Math.max(maxE, value);
    }
  }
  if (!(maxD > 0) || !Number.isFinite(minE)) return;
  if (maxE - minE < 1) {
    maxE += 0.5;
    minE -= 0.5;
  }

  const plotW = width - MARGIN.left - MARGIN.right;
  const plotH = height - MARGIN.top - MARGIN.bottom;
  const xOf = (d: number): number => MARGIN.left + (d / maxD) * plotW;
  const yOf = (e: number): number => MARGIN.top + (1 - (e - minE) / (maxE - minE)) * plotH;

  ctx.strokeStyle = "#e2e8f0";
  ctx.lineWidth = 1;
  ctx.strokeRect(MARGIN.left, MARGIN.top, plotW, plotH);

  const byRankDescending = [...routes].sort((a, b) => b.rank - a.rank);
  for (const route of byRankDescending) {
    const { d, e } = route.profile;
    if (d.length < 2) continue;
    const selected = route.id === selectedRouteId;
    const emphasized = selected || (selectedRouteId === null && route.rank === 0);
    ctx.beginPath();
    for (let i = 0; i < d.length; i++) {
      const x = xOf(d[i]!);
      const y = yOf(e[i]!);
      if (i === 0) ctx.moveTo(x, y);
      else ctx.lineTo(x, y);
    }
    ctx.strokeStyle = routeColor(route.rank, selected);
    ctx.lineWidth = emphasized ? 3 : 1.5;
    ctx.globalAlpha = emphasized ? 1 : 0.7;
    ctx.stroke();
    ctx.globalAlpha = 1;
  }

  ctx.fillStyle = "#475569";
  ctx.font = "11px sans-serif";
  ctx.textAlign = "right";
  ctx.fillText(`${Math.round(maxE)} m`, MARGIN.left - 6, MARGIN.top + 10);
  ctx.fillText(`${Math.round(minE)} m`, MARGIN.left - 6, MARGIN.top + plotH);
  ctx.textAlign = "center";
  ctx.fillText("0", MARGIN.left, height - 6);
  ctx.fillText(`${Math.round(maxD)} m`, MARGIN.left + plotW, height - 6);
}
