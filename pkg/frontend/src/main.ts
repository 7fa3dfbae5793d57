import { ApiClient, ApiError } from "./api";
import { setTransparentMode } from "./display";
import { applyHeatmapRange } from "./heatmap";
import { SimulationFlow } from "./jobs";
import { TimeScrub } from "./scrub";
import { Store } from "./state";
import { drawMiniMap } from "./sunpath";
import { SceneViewer } from "./viewer";

const api = new ApiClient();
const store = new Store();
const scrub = new TimeScrub(api, store);
const flow = new SimulationFlow(api, store);

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
};

const canvas = $<HTMLCanvasElement>("view");
const minimap = $<HTMLCanvasElement>("minimap");
const viewer = new SceneViewer(canvas);

function resize(): void {
  const rect = canvas.parentElement!.getBoundingClientRect();
  viewer.resize(rect.width, rect.height);
}
window.addEventListener("resize", resize);

const NINE_POINT_LABELS = [
  "Jun 21 09:00", "Jun 21 12:00", "Jun 21 15:00",
  "Mar 20 09:00", "Mar 20 12:00", "Mar 20 15:00",
  "Dec 22 09:00", "Dec 22 12:00", "Dec 22 15:00",
];

function formatInstant(t: { year: number; month: number; day: number; hour: number; minute: number }): string {
  const mm = String(t.month).padStart(2, "0");
  const dd = String(t.day).padStart(2, "0");
  const hh = String(t.hour).padStart(2, "0");
  const mi = String(Math.round(t.minute)).padStart(2, "0");
  return `${t.year}-${mm}-${dd} ${hh}:${mi}`;
}

store.subscribe((state, changed) => {
  if (changed.has("sun") && state.sun) {
    viewer.setSun(state.sun);
    $("sun-readout").textContent =
      `alt ${state.sun.altitude.toFixed(1)}°  az ${state.sun.azimuth.toFixed(1)}°` +
      (state.sun.above_horizon ? "" : "  (below horizon)");
  }
  if (changed.has("instant") && state.instant) {
    $("time-readout").textContent = formatInstant(state.instant);
  }
  if (changed.has("cells")) {
    viewer.setHeatmap(state.cells);
  }
  if (changed.has("jobStatus")) {
    $("job-status").textContent = state.jobStatus;
  }
  if (changed.has("banner")) {
    const el = $("banner");
    el.textContent = state.banner?.text ?? "";
    el.className = state.banner ? `banner ${state.banner.kind}` : "banner hidden";
  }
  if (changed.has("heatmapSpec") && state.heatmapSpec) {
    $("range-readout").textContent =
      `${state.heatmapSpec.min.toFixed(1)} – ${state.heatmapSpec.max.toFixed(1)}`;
  }
});

async function refreshSun(): Promise<void> {
  const sun = await api.getSun();
  store.update({ sun, instant: sun.instant });
}

async function refreshSunpath(): Promise<void> {
  const observerField = $<HTMLInputElement>("observer").value || "3,2,1.5";
  const observer = observerField.split(",").map(Number) as [number, number, number];
  const diagram = await api.getSunpath(observer, 20);
  viewer.setDiagram(diagram);
  drawMiniMap(minimap, diagram);
}

function bindControls(): void {
  $("hour-minus").onclick = () => void scrub.notch("hour", -1);
  $("hour-plus").onclick = () => void scrub.notch("hour", 1);
  $("day-minus").onclick = () => void scrub.notch("day", -1);
  $("day-plus").onclick = () => void scrub.notch("day", 1);

  $<HTMLInputElement>("snap-toggle").onchange = async (event) => {
    const enabled = (event.target as HTMLInputElement).checked;
    const { mode } = await api.setSnapMode(enabled ? "both" : "off");
    store.update({ snapMode: mode as "off" | "both" });
  };

  const matrix = $("nine-point");
  NINE_POINT_LABELS.forEach((label, index) => {
    const button = document.createElement("button");
    button.textContent = label;
    button.onclick = async () => {
      await api.setNinePoint(index);
      await refreshSun();
    };
    matrix.appendChild(button);
  });

  $("place-grid").onclick = async () => {
    try {
      const grid = await api.postGrid({
        center: $<HTMLInputElement>("grid-center").value.split(",").map(Number) as [number, number],
        height: Number($<HTMLInputElement>("grid-height").value),
        width: Number($<HTMLInputElement>("grid-width").value),
        depth: Number($<HTMLInputElement>("grid-depth").value),
        spacing: $<HTMLInputElement>("grid-spacing").value.split(",").map(Number) as [number, number],
      });
      store.update({ grid, banner: { kind: "info", text: `grid placed: ${grid.count} sensors` } });
    } catch (error) {
      showError(error);
    }
  };

  $("run-simulation").onclick = async () => {
    try {
      await flow.run({
        metric: $<HTMLSelectElement>("metric").value as "df" | "illuminance",
        backend: $<HTMLSelectElement>("backend").value as "oracle" | "radiance",
        ambient_bounces: Number($<HTMLInputElement>("bounces").value),
      });
    } catch (error) {
      showError(error);
    }
  };

  const rangeApply = async () => {
    try {
      await applyHeatmapRange(
        api,
        store,
        Number($<HTMLInputElement>("range-min").value),
        Number($<HTMLInputElement>("range-max").value),
      );
    } catch (error) {
      showError(error);
    }
  };
  $("apply-range").onclick = rangeApply;

  $<HTMLInputElement>("transparent-toggle").onchange = async (event) => {
    const enabled = (event.target as HTMLInputElement).checked;
    await setTransparentMode(api, store, enabled);
    viewer.setTransparent(enabled); // view-only: material opacity, scene data untouched
  };

  $("refresh-sunpath").onclick = () => void refreshSunpath().catch(showError);
}

function showError(error: unknown): void {
  const text =
    error instanceof ApiError
      ? `${error.code}: ${error.message}`
      : error instanceof Error
        ? error.message
        : String(error);
  store.update({ banner: { kind: "error", text } });
}

async function boot(): Promise<void> {
  bindControls();
  resize();
  try {
    const { hash, scene } = await api.getScene();
    viewer.loadScene(scene);
    store.update({ scene, sceneHash: hash });
  } catch (error) {
    if (error instanceof ApiError && error.status === 404) {
      store.update({ banner: { kind: "info", text: "no scene loaded on the server yet" } });
    } else {
      showError(error);
    }
  }
  await refreshSun().catch(showError);
  await refreshSunpath().catch(showError);
}

void boot();
