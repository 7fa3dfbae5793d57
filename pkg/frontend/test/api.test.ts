import { describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api";
import { setTransparentMode } from "../src/display";
import { Store } from "../src/state";
import { projectEquidistant } from "../src/sunpath";
import type { SceneDoc } from "../src/types";
import { FakeServer } from "./fake";

describe("api client", () => {
  it("maps service errors to typed exceptions", async () => {
    const server = new FakeServer();
    server.onJson("POST", "/time", 422, {
      code: "validation_error",
      field: "month",
      message: "month out of range",
    });
    const api = new ApiClient("", server.fetch);
    const error = await api
      .setTime({ year: 2021, month: 13, day: 1, hour: 0, minute: 0 })
      .catch((e) => e);
    expect(error).toBeInstanceOf(ApiError);
    expect(error.status).toBe(422);
    expect(error.code).toBe("validation_error");
    expect(error.field).toBe("month");
  });

  it("targets versioned endpoints", async () => {
    const server = new FakeServer();
    server.onJson("GET", "/sun", 200, {});
    const api = new ApiClient("", server.fetch);
    await api.getSun();
    const url = server.calls[0];
    expect(url?.path).toBe("/sun");
  });

  it("passes nine-point index through", async () => {
    const server = new FakeServer();
    server.onJson("POST", "/time/nine-point", 200, { instant: {}, index: 8 });
    const api = new ApiClient("", server.fetch);
    await api.setNinePoint(8);
    expect(server.callsTo("POST", "/time/nine-point")[0]?.body).toEqual({ index: 8 });
  });
});

describe("transparent-model toggle", () => {
  it("stores the flag without touching scene data", async () => {
    const server = new FakeServer();
    server.onJson("POST", "/display/transparent", 200, { transparent: true });
    const api = new ApiClient("", server.fetch);
    const store = new Store();
    const scene: SceneDoc = {
      schema_version: 1,
      site: { lat: 0, lon: 0, tz: 0, north_offset: 0 },
      materials: [],
      meshes: [],
    };
    store.update({ scene, sceneHash: "abc123" });

    await setTransparentMode(api, store, true);

    expect(store.get().transparent).toBe(true);
    expect(store.get().scene).toBe(scene); // same object, never cloned or edited
    expect(store.get().sceneHash).toBe("abc123");
    expect(server.callsTo("POST", "/display/transparent")).toHaveLength(1);
    expect(server.callsTo("POST", "/scene")).toHaveLength(0);
  });
});

describe("sun-path projection", () => {
  it("puts the zenith at the origin and the horizon on the unit circle", () => {
    const zenith = projectEquidistant(90, 123);
    expect(zenith.x).toBeCloseTo(0, 12);
    expect(zenith.y).toBeCloseTo(0, 12);
    const north = projectEquidistant(0, 0);
    expect(north.x).toBeCloseTo(0, 12);
    expect(north.y).toBeCloseTo(1, 12);
    const east = projectEquidistant(0, 90);
    expect(east.x).toBeCloseTo(1, 12);
    expect(east.y).toBeCloseTo(0, 12);
  });
});
