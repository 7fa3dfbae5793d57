import type {
  ApiErrorBody,
  DiagramDoc,
  GridRequest,
  GridResponse,
  Instant,
  JobResponse,
  RangeResponse,
  ResultDoc,
  SceneResponse,
  SimulateRequest,
  SimulateResponse,
  SunResponse,
} from "./types";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    message: string,
    public readonly field?: string | null,
  ) {
    super(message);
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/** Thin typed wrapper over the /api/v1 endpoints. No photometric math here. */
export class ApiClient {
  constructor(
    private readonly base = "",
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: {} };
    if (body !== undefined) {
      init.headers = { "Content-Type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchFn(`${this.base}/api/v1${path}`, init);
    if (!response.ok) {
      let detail: ApiErrorBody = { code: "error", message: response.statusText };
      try {
        detail = (await response.json()) as ApiErrorBody;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, detail.code, detail.message, detail.field);
    }
    return (await response.json()) as T;
  }

  getScene(): Promise<SceneResponse> {
    return this.request("GET", "/scene");
  }

  getSun(): Promise<SunResponse> {
    return this.request("GET", "/sun");
  }

  setTime(instant: Instant): Promise<{ instant: Instant }> {
    return this.request("POST", "/time", instant);
  }

  stepTime(axis: "hour" | "day", delta: number): Promise<{ instant: Instant }> {
    return this.request("POST", "/time/step", { axis, delta });
  }

  setSnapMode(mode: "off" | "hour" | "day" | "both"): Promise<{ mode: string }> {
    return this.request("POST", "/time/snap-mode", { mode });
  }

  setNinePoint(index: number): Promise<{ instant: Instant; index: number }> {
    return this.request("POST", "/time/nine-point", { index });
  }

  getSunpath(observer: [number, number, number], radius: number): Promise<DiagramDoc> {
    const obs = observer.join(",");
    return this.request("GET", `/sunpath?observer=${obs}&radius=${radius}`);
  }

  postGrid(spec: GridRequest): Promise<GridResponse> {
    return this.request("POST", "/grid", spec);
  }

  simulate(body: SimulateRequest): Promise<SimulateResponse> {
    return this.request("POST", "/simulate", body);
  }

  getJob(id: string): Promise<JobResponse> {
    return this.request("GET", `/jobs/${id}`);
  }

  getResult(id: string): Promise<ResultDoc> {
    return this.request("GET", `/results/${id}`);
  }

  setHeatmapRange(min: number, max: number, mid?: number): Promise<RangeResponse> {
    return this.request("POST", "/heatmap-range", { min, max, mid: mid ?? null });
  }

  setTransparent(enabled: boolean): Promise<{ transparent: boolean }> {
    return this.request("POST", "/display/transparent", { enabled });
  }
}
