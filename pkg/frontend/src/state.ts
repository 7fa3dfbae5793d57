import type {
  GridResponse,
  HeatmapSpecDoc,
  Instant,
  JobStatus,
  SceneDoc,
  SunResponse,
} from "./types";
import type { HeatmapCell } from "./heatmap";

export interface Banner {
  kind: "info" | "error";
  text: string;
}

/** Everything the view renders. Sun and colors are verbatim server output. */
export interface ViewState {
  sceneHash: string | null;
  scene: SceneDoc | null;
  instant: Instant | null;
  sun: SunResponse | null;
  grid: GridResponse | null;
  cells: HeatmapCell[];
  heatmapSpec: HeatmapSpecDoc | null;
  resultId: string | null;
  metric: string | null;
  jobStatus: JobStatus | "idle";
  banner: Banner | null;
  snapMode: "off" | "hour" | "day" | "both";
  transparent: boolean;
}

export function initialState(): ViewState {
  return {
    sceneHash: null,
    scene: null,
    instant: null,
    sun: null,
    grid: null,
    cells: [],
    heatmapSpec: null,
    resultId: null,
    metric: null,
    jobStatus: "idle",
    banner: null,
    snapMode: "off",
    transparent: false,
  };
}

export type Listener = (state: ViewState, changed: ReadonlySet<keyof ViewState>) => void;

export class Store {
  private state: ViewState = initialState();
  private listeners: Listener[] = [];

  get(): ViewState {
    return this.state;
  }

  update(patch: Partial<ViewState>): void {
    const changed = new Set<keyof ViewState>();
    for (const key of Object.keys(patch) as (keyof ViewState)[]) {
      if (this.state[key] !== patch[key]) {
        changed.add(key);
      }
    }
    this.state = { ...this.state, ...patch };
    // synchronous notification: render happens before update() returns
    for (const listener of this.listeners) {
      listener(this.state, changed);
    }
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }
}
