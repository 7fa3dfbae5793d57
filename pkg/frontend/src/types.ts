// Wire types for the /api/v1 service. The client treats every photometric
// number and color as opaque server output; nothing here is recomputed.

export interface Instant {
  year: number;
  month: number;
  day: number;
  hour: number;
  minute: number;
}

export interface SunResponse {
  instant: Instant;
  altitude: number;
  azimuth: number;
  zenith: number;
  declination: number;
  equation_of_time_min: number;
  direction: [number, number, number];
  above_horizon: boolean;
}

export interface SiteDoc {
  lat: number;
  lon: number;
  tz: number;
  north_offset: number;
}

export interface MeshDoc {
  material: string;
  vertices: number[][];
  triangles: number[][];
}

export interface MaterialDoc {
  name: string;
  kind: "plastic" | "glass" | "trans";
  params: Record<string, unknown>;
}

export interface SceneDoc {
  schema_version: number;
  site: SiteDoc;
  materials: MaterialDoc[];
  meshes: MeshDoc[];
}

export interface SceneResponse {
  hash: string;
  scene: SceneDoc;
}

export interface GridResponse {
  center: [number, number];
  height: number;
  width: number;
  depth: number;
  spacing: [number, number];
  count_x: number;
  count_y: number;
  count: number;
  positions: number[][];
}

export interface GridRequest {
  center: [number, number];
  height: number;
  width: number;
  depth: number;
  spacing: [number, number];
}

export type JobStatus = "pending" | "running" | "done" | "failed";

export interface SimulateRequest {
  metric: "df" | "illuminance";
  backend?: "oracle" | "radiance";
  ambient_bounces?: number;
}

export interface SimulateResponse {
  job_id: string;
  status: JobStatus;
}

export interface JobResponse {
  id: string;
  status: JobStatus;
  history: { status: JobStatus; at: number }[];
  params: Record<string, unknown>;
  error?: string;
  result_url?: string;
}

export interface HeatmapSpecDoc {
  min: number;
  mid: number;
  max: number;
}

export interface ResultDoc {
  metric: string;
  backend: string;
  sky: string;
  instant: Instant | null;
  grid: GridResponse;
  values: number[];
  spec: HeatmapSpecDoc;
  colors: number[][];
  job_id?: string;
}

export interface RangeResponse {
  spec: HeatmapSpecDoc;
  result_id?: string;
  colors?: number[][];
}

export type Visibility = "visible" | "blocked" | "below_horizon";

export interface DiagramSample {
  time: Instant;
  altitude: number;
  azimuth: number;
  direction: [number, number, number];
  point: [number, number, number];
  visibility: Visibility;
}

export interface DiagramArc {
  month: number;
  day: number;
  color: [number, number, number];
  samples: DiagramSample[];
}

export interface DiagramAnalemma {
  hour: number;
  samples: DiagramSample[];
}

export interface DiagramDoc {
  observer: [number, number, number];
  radius: number;
  year: number;
  strict_days: boolean;
  arcs: DiagramArc[];
  analemmas: DiagramAnalemma[];
}

export interface ApiErrorBody {
  code: string;
  field?: string | null;
  message: string;
}
