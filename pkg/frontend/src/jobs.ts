import type { ApiClient } from "./api";
import { buildCells } from "./heatmap";
import type { Store } from "./state";
import type { ResultDoc, SimulateRequest } from "./types";

const sleep = (ms: number) => new Promise<void>((resolve) => setTimeout(resolve, ms));

/**
 * Submit a simulation, poll the job to completion, fetch and display the
 * result. At most one flow is in flight; a second run while polling is a
 * client-side error surfaced as a banner.
 */
export class SimulationFlow {
  private running = false;

  constructor(
    private readonly api: ApiClient,
    private readonly store: Store,
    private readonly pollIntervalMs = 150,
  ) {}

  get busy(): boolean {
    return this.running;
  }

  async run(request: SimulateRequest): Promise<ResultDoc | null> {
    if (this.running) {
      this.store.update({ banner: { kind: "error", text: "a simulation is already running" } });
      return null;
    }
    this.running = true;
    try {
      const submitted = await this.api.simulate(request);
      this.store.update({ jobStatus: submitted.status, banner: null });

      let status = submitted.status;
      let error: string | undefined;
      while (status === "pending" || status === "running") {
        await sleep(this.pollIntervalMs);
        const job = await this.api.getJob(submitted.job_id);
        status = job.status;
        error = job.error;
        this.store.update({ jobStatus: status });
      }

      if (status !== "done") {
        this.store.update({
          banner: { kind: "error", text: `simulation failed: ${error ?? "unknown error"}` },
        });
        return null;
      }

      const result = await this.api.getResult(submitted.job_id);
      this.store.update({
        cells: buildCells(result),
        heatmapSpec: result.spec,
        metric: result.metric,
        resultId: submitted.job_id,
        banner: { kind: "info", text: `${result.metric} finished (${result.values.length} sensors)` },
      });
      return result;
    } finally {
      this.running = false;
    }
  }
}
