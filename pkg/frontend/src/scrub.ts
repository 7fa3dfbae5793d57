import type { ApiClient } from "./api";
import type { Store } from "./state";

/**
 * Joystick-style time scrubbing. Each notch issues exactly one step call,
 * then refreshes the sun; notches queue so rapid input never coalesces or
 * duplicates requests. The store notifies synchronously, so the view is
 * re-rendered before the latency stamp is taken.
 */
export class TimeScrub {
  private chain: Promise<void> = Promise.resolve();
  stepCalls = 0;
  lastRenderLatencyMs: number | null = null;

  constructor(
    private readonly api: ApiClient,
    private readonly store: Store,
    private readonly clock: () => number = () =>
      typeof performance !== "undefined" ? performance.now() : Date.now(),
  ) {}

  /** One scrub notch: +1/-1 hour (drag right/left) or day (drag up/down). */
  notch(axis: "hour" | "day", delta: 1 | -1): Promise<void> {
    this.chain = this.chain.then(() => this.execute(axis, delta));
    return this.chain;
  }

  private async execute(axis: "hour" | "day", delta: 1 | -1): Promise<void> {
    this.stepCalls += 1;
    const stepped = await this.api.stepTime(axis, delta);
    const sun = await this.api.getSun();
    const responseAt = this.clock();
    this.store.update({ instant: stepped.instant, sun });
    this.lastRenderLatencyMs = this.clock() - responseAt;
  }
}
