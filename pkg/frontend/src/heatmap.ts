import type { ApiClient } from "./api";
import type { Store } from "./state";
import type { ResultDoc } from "./types";

/** One colored tile on the simulation plane. Color bytes come from the server. */
export interface HeatmapCell {
  x: number;
  y: number;
  z: number;
  width: number;
  depth: number;
  color: [number, number, number];
  value: number;
}

/**
 * Zip server positions, values and colors into renderable cells.
 * Colors are passed through untouched: the client never recomputes them.
 */
export function buildCells(doc: ResultDoc): HeatmapCell[] {
  const { positions, spacing } = doc.grid;
  if (doc.colors.length !== positions.length || doc.values.length !== positions.length) {
    throw new Error(
      `result arrays disagree: ${positions.length} sensors, ` +
        `${doc.values.length} values, ${doc.colors.length} colors`,
    );
  }
  return positions.map((pos, i) => {
    const [x, y, z] = pos as [number, number, number];
    const color = doc.colors[i] as [number, number, number];
    return {
      x,
      y,
      z,
      width: spacing[0],
      depth: spacing[1],
      color: [color[0], color[1], color[2]],
      value: doc.values[i] as number,
    };
  });
}

export function recolorCells(cells: HeatmapCell[], colors: number[][]): HeatmapCell[] {
  if (colors.length !== cells.length) {
    throw new Error(`got ${colors.length} colors for ${cells.length} cells`);
  }
  return cells.map((cell, i) => {
    const color = colors[i] as [number, number, number];
    return { ...cell, color: [color[0], color[1], color[2]] };
  });
}

/**
 * Range-slider handler: ask the server to re-colorize the active result and
 * swap the cell colors in place. Never triggers a new simulation.
 */
export async function applyHeatmapRange(
  api: ApiClient,
  store: Store,
  min: number,
  max: number,
): Promise<void> {
  const response = await api.setHeatmapRange(min, max);
  const patch: Parameters<Store["update"]>[0] = { heatmapSpec: response.spec };
  if (response.colors) {
    patch.cells = recolorCells(store.get().cells, response.colors);
  }
  store.update(patch);
}
