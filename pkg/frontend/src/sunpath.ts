import type { DiagramDoc } from "./types";

export interface Point2 {
  x: number;
  y: number;
}

export interface Polyline2 {
  color: string;
  label?: string;
  points: Point2[];
}

/**
 * Azimuthal equidistant projection for the 2D mini-map: zenith at the
 * origin, horizon at radius 1, north up, east to the right.
 */
export function projectEquidistant(altitudeDeg: number, azimuthDeg: number): Point2 {
  const r = (90 - altitudeDeg) / 90;
  const az = (azimuthDeg * Math.PI) / 180;
  return { x: r * Math.sin(az), y: r * Math.cos(az) };
}

const cssColor = (rgb: [number, number, number]) => `rgb(${rgb[0]},${rgb[1]},${rgb[2]})`;

/** Above-horizon arc segments for the mini-map, in arc (seasonal) colors. */
export function arcPolylines(diagram: DiagramDoc): Polyline2[] {
  return diagram.arcs
    .map((arc) => ({
      color: cssColor(arc.color),
      label: `m${arc.month}`,
      points: arc.samples
        .filter((s) => s.altitude >= 0)
        .map((s) => projectEquidistant(s.altitude, s.azimuth)),
    }))
    .filter((line) => line.points.length >= 2);
}

export function analemmaPolylines(diagram: DiagramDoc): Polyline2[] {
  return diagram.analemmas
    .map((an) => ({
      color: "#999999",
      label: `${String(an.hour).padStart(2, "0")}h`,
      points: an.samples
        .filter((s) => s.altitude >= 0)
        .map((s) => projectEquidistant(s.altitude, s.azimuth)),
    }))
    .filter((line) => line.points.length >= 2);
}

export function drawMiniMap(canvas: HTMLCanvasElement, diagram: DiagramDoc): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  const size = Math.min(canvas.width, canvas.height);
  const scale = size / 2.3;
  const cx = canvas.width / 2;
  const cy = canvas.height / 2;
  const toCanvas = (p: Point2) => ({ x: cx + p.x * scale, y: cy - p.y * scale });

  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.strokeStyle = "#cccccc";
  ctx.fillStyle = "#666666";
  ctx.font = "10px sans-serif";
  for (const ring of [1, 2 / 3, 1 / 3]) {
    ctx.beginPath();
    ctx.arc(cx, cy, ring * scale, 0, 2 * Math.PI);
    ctx.stroke();
  }
  ctx.fillText("N", cx - 3, cy - scale - 4);
  ctx.fillText("S", cx - 3, cy + scale + 12);

  const drawLines = (lines: Polyline2[], width: number, dash: number[]) => {
    ctx.lineWidth = width;
    ctx.setLineDash(dash);
    for (const line of lines) {
      ctx.strokeStyle = line.color;
      ctx.beginPath();
      line.points.forEach((p, i) => {
        const c = toCanvas(p);
        if (i === 0) ctx.moveTo(c.x, c.y);
        else ctx.lineTo(c.x, c.y);
      });
      ctx.stroke();
    }
  };
  drawLines(arcPolylines(diagram), 1.6, []);
  drawLines(analemmaPolylines(diagram), 0.8, [3, 3]);
  ctx.setLineDash([]);
}
