import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api";
import { TimeScrub } from "../src/scrub";
import { Store } from "../src/state";
import type { SunResponse } from "../src/types";
import { FakeServer, instant, sunResponse } from "./fake";

function setup() {
  const server = new FakeServer();
  let hour = 12;
  server.on("POST", "/time/step", (body) => {
    const request = body as { axis: string; delta: number };
    if (request.axis === "hour") hour += request.delta;
    return [200, { instant: instant(6, 21, hour) }];
  });
  server.on("GET", "/sun", () => [200, sunResponse({ instant: instant(6, 21, hour) })]);
  const api = new ApiClient("", server.fetch);
  const store = new Store();
  return { server, api, store };
}

describe("time scrubbing", () => {
  it("issues exactly one step call per notch", async () => {
    const { server, api, store } = setup();
    const scrub = new TimeScrub(api, store);
    await Promise.all([
      scrub.notch("hour", 1),
      scrub.notch("hour", 1),
      scrub.notch("hour", -1),
      scrub.notch("day", 1),
      scrub.notch("hour", 1),
    ]);
    expect(server.callsTo("POST", "/time/step")).toHaveLength(5);
    expect(scrub.stepCalls).toBe(5);
  });

  it("notches run in order and refresh the sun after each step", async () => {
    const { server, api, store } = setup();
    const scrub = new TimeScrub(api, store);
    await scrub.notch("hour", 1);
    await scrub.notch("hour", 1);
    const steps = server.callsTo("POST", "/time/step");
    expect(steps.map((c) => (c.body as { delta: number }).delta)).toEqual([1, 1]);
    expect(server.callsTo("GET", "/sun")).toHaveLength(2);
    expect(store.get().instant?.hour).toBe(14);
  });

  it("re-renders the sun within 200 ms of the response", async () => {
    const { api, store } = setup();
    const scrub = new TimeScrub(api, store);
    let rendered: SunResponse | null = null;
    store.subscribe((state, changed) => {
      if (changed.has("sun")) rendered = state.sun;
    });
    await scrub.notch("hour", 1);
    expect(rendered).not.toBeNull();
    expect(scrub.lastRenderLatencyMs).not.toBeNull();
    expect(scrub.lastRenderLatencyMs!).toBeLessThan(200);
  });

  it("displays the sun exactly as the server sent it", async () => {
    const { api, store } = setup();
    const scrub = new TimeScrub(api, store);
    await scrub.notch("hour", 1);
    const sun = store.get().sun!;
    // verbatim payload fields, no client-side recomputation
    expect(sun.altitude).toBe(75.5);
    expect(sun.azimuth).toBe(180.0);
    expect(sun.direction).toEqual([0.0, -0.25, 0.97]);
  });
});
