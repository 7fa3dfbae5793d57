"""Local HTTP service exposing the engine to interactive clients.

Single-tenant session (one scene, one grid, one running job at a time) with
asynchronous simulation jobs and polling. Sun/time queries never block on a
running simulation: handlers snapshot the session under a short lock and
compute outside it, while jobs run on their own thread.
"""

from __future__ import annotations

import hashlib
import json
import tempfile
import threading
import time
import uuid
from dataclasses import dataclass, field
from typing import Any, Literal

import numpy as np
from fastapi import FastAPI, HTTPException, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, Response
from pydantic import BaseModel, Field

from .grid import SensorGrid, grid_to_dict, make_grid
from .metrics import (
    HeatmapSpec,
    MetricsError,
    SimulationParams,
    colorize,
    daylight_factor,
    default_heatmap_spec,
    point_in_time_illuminance,
    result_to_dict,
)
from .scene import DEFAULT_SITE, Scene, SceneError, scene_from_dict, scene_to_dict
from .solar import (
    DEFAULT_YEAR,
    SNAP_OFF,
    CivilInstant,
    InvalidInstantError,
    nine_point_matrix,
    solar_position,
    step_snapped,
)
from .sunpath import build_diagram, diagram_to_dict

JOB_PENDING = "pending"
JOB_RUNNING = "running"
JOB_DONE = "done"
JOB_FAILED = "failed"


def _error(status: int, code: str, message: str, fld: str | None = None) -> HTTPException:
    detail: dict[str, Any] = {"code": code, "message": message}
    if fld:
        detail["field"] = fld
    return HTTPException(status_code=status, detail=detail)


@dataclass(eq=False)
class JobRecord:
    id: str
    metric: str
    params: dict[str, Any]
    status: str = JOB_PENDING
    history: list[dict[str, Any]] = field(default_factory=list)
    error: str | None = None
    result_bytes: bytes | None = None

    def mark(self, status: str) -> None:
        self.status = status
        self.history.append({"status": status, "at": time.time()})


@dataclass(eq=False)
class Session:
    scene: Scene | None = None
    instant: CivilInstant = field(
        default_factory=lambda: CivilInstant(DEFAULT_YEAR, 6, 21, 12, 0.0)
    )
    snap_mode: str = SNAP_OFF
    observer: tuple[float, float, float] = (0.0, 0.0, 1.5)
    grid: SensorGrid | None = None
    heatmap_spec: HeatmapSpec | None = None
    transparent: bool = False
    jobs: dict[str, JobRecord] = field(default_factory=dict)
    lock: threading.Lock = field(default_factory=threading.Lock)

    @property
    def site(self):
        return self.scene.site if self.scene is not None else DEFAULT_SITE

    def active_job(self) -> JobRecord | None:
        for job in self.jobs.values():
            if job.status in (JOB_PENDING, JOB_RUNNING):
                return job
        return None


class TimeBody(BaseModel):
    year: int = Field(ge=1, le=9999)
    month: int = Field(ge=1, le=12)
    day: int = Field(ge=1, le=31)
    hour: int = Field(ge=0, le=23)
    minute: float = Field(default=0.0, ge=0.0, lt=60.0)


class StepBody(BaseModel):
    axis: Literal["hour", "day"]
    delta: int = Field(ge=-1000, le=1000)


class SnapBody(BaseModel):
    mode: Literal["off", "hour", "day", "both"]


class NinePointBody(BaseModel):
    index: int


class GridBody(BaseModel):
    center: tuple[float, float]
    height: float
    width: float = Field(gt=0)
    depth: float = Field(gt=0)
    spacing: tuple[float, float]


class SimulateBody(BaseModel):
    metric: Literal["df", "illuminance"]
    backend: Literal["oracle", "radiance"] = "oracle"
    ambient_bounces: int = Field(default=2, ge=0)


class RangeBody(BaseModel):
    min: float
    max: float
    mid: float | None = None
    result_id: str | None = None


class TransparentBody(BaseModel):
    enabled: bool


def _instant_dict(t: CivilInstant) -> dict[str, Any]:
    return {"year": t.year, "month": t.month, "day": t.day, "hour": t.hour, "minute": t.minute}


def _sun_payload(session: Session) -> dict[str, Any]:
    with session.lock:
        site = session.site
        instant = session.instant
    pos = solar_position(site, instant)
    return {
        "instant": _instant_dict(instant),
        "altitude": pos.altitude_deg,
        "azimuth": pos.azimuth_deg,
        "zenith": pos.zenith_deg,
        "declination": pos.declination_deg,
        "equation_of_time_min": pos.equation_of_time_min,
        "direction": pos.sun_direction.tolist(),
        "above_horizon": pos.above_horizon,
    }


def _run_job(session: Session, job: JobRecord, scene: Scene, grid: SensorGrid,
             instant: CivilInstant, params: SimulationParams, spec: HeatmapSpec | None) -> None:
    job.mark(JOB_RUNNING)
    try:
        if job.metric == "df":
            result = daylight_factor(scene, grid, params, instant)
        else:
            result = point_in_time_illuminance(scene, grid, instant, params)
        doc = result_to_dict(result, spec or default_heatmap_spec(result))
        doc["job_id"] = job.id
        job.result_bytes = json.dumps(doc).encode("utf-8")
        job.mark(JOB_DONE)
    except Exception as exc:
        job.error = str(exc)
        job.mark(JOB_FAILED)


def create_app(
    scene_path: str | None = None,
    workdir: str | None = None,
    ui_dir: str | None = None,
) -> FastAPI:
    app = FastAPI(title="helios", version="1")
    session = Session()
    app.state.session = session
    base_workdir = workdir or tempfile.mkdtemp(prefix="helios-serve-")

    if scene_path:
        from .scene import load_scene

        session.scene = load_scene(scene_path)

    @app.exception_handler(RequestValidationError)
    async def validation_handler(request: Request, exc: RequestValidationError):
        first = exc.errors()[0] if exc.errors() else {}
        loc = [str(p) for p in first.get("loc", []) if p != "body"]
        return JSONResponse(
            status_code=422,
            content={
                "code": "validation_error",
                "field": ".".join(loc) or None,
                "message": first.get("msg", "invalid request"),
            },
        )

    @app.exception_handler(HTTPException)
    async def http_handler(request: Request, exc: HTTPException):
        detail = exc.detail
        if not isinstance(detail, dict):
            detail = {"code": "error", "message": str(detail)}
        return JSONResponse(status_code=exc.status_code, content=detail)

    # -- scene ---------------------------------------------------------------

    @app.get("/api/v1/scene")
    def get_scene():
        with session.lock:
            scene = session.scene
        if scene is None:
            raise _error(404, "no_scene", "no scene loaded")
        doc = scene_to_dict(scene)
        digest = hashlib.sha256(
            json.dumps(doc, sort_keys=True).encode("utf-8")
        ).hexdigest()
        return {"hash": digest, "scene": doc}

    @app.post("/api/v1/scene")
    def post_scene(doc: dict[str, Any]):
        try:
            scene = scene_from_dict(doc)
        except SceneError as exc:
            raise _error(422, "invalid_scene", str(exc))
        with session.lock:
            session.scene = scene
        return {
            "meshes": len(scene.meshes),
            "materials": len(scene.materials),
            "triangles": int(sum(len(m.triangles) for m in scene.meshes)),
        }

    # -- sun & time ----------------------------------------------------------

    @app.get("/api/v1/sun")
    def get_sun():
        return _sun_payload(session)

    @app.post("/api/v1/time")
    def post_time(body: TimeBody):
        try:
            instant = CivilInstant(body.year, body.month, body.day, body.hour, body.minute)
        except InvalidInstantError as exc:
            raise _error(422, "invalid_time", str(exc), fld="day")
        with session.lock:
            session.instant = instant
        return {"instant": _instant_dict(instant)}

    @app.post("/api/v1/time/step")
    def post_time_step(body: StepBody):
        with session.lock:
            session.instant = step_snapped(
                session.instant, session.snap_mode, body.axis, body.delta
            )
            instant = session.instant
        return {"instant": _instant_dict(instant)}

    @app.post("/api/v1/time/snap-mode")
    def post_snap_mode(body: SnapBody):
        with session.lock:
            session.snap_mode = body.mode
        return {"mode": body.mode}

    @app.post("/api/v1/time/nine-point")
    def post_nine_point(body: NinePointBody):
        matrix = nine_point_matrix()
        if not 0 <= body.index < len(matrix):
            raise _error(422, "index_out_of_range", f"index must be 0..8, got {body.index}", fld="index")
        with session.lock:
            session.instant = matrix[body.index]
            instant = session.instant
        return {"instant": _instant_dict(instant), "index": body.index}

    # -- sunpath ---------------------------------------------------------------

    @app.get("/api/v1/sunpath")
    def get_sunpath(
        observer: str = Query(default="0,0,1.5"),
        radius: float = Query(default=20.0, gt=0),
        strict: bool = False,
    ):
        try:
            parts = [float(p) for p in observer.split(",")]
            if len(parts) != 3:
                raise ValueError("expected x,y,z")
        except ValueError as exc:
            raise _error(422, "validation_error", f"bad observer: {exc}", fld="observer")
        with session.lock:
            scene = session.scene
            session.observer = (parts[0], parts[1], parts[2])
        if scene is None:
            scene = Scene(meshes=[], materials={}, site=DEFAULT_SITE)
        diagram = build_diagram(scene, np.array(parts), radius=radius, strict_days=strict)
        return diagram_to_dict(diagram)

    # -- grid ------------------------------------------------------------------

    @app.post("/api/v1/grid")
    def post_grid(body: GridBody):
        try:
            grid = make_grid(
                center_xy=body.center,
                height_z=body.height,
                width_x=body.width,
                depth_y=body.depth,
                spacing_x=body.spacing[0],
                spacing_y=body.spacing[1],
            )
        except ValueError as exc:
            raise _error(422, "invalid_grid", str(exc))
        with session.lock:
            session.grid = grid
        return grid_to_dict(grid)

    @app.get("/api/v1/grid")
    def get_grid():
        with session.lock:
            grid = session.grid
        if grid is None:
            raise _error(404, "no_grid", "no grid placed")
        return grid_to_dict(grid)

    # -- simulation jobs ---------------------------------------------------------

    @app.post("/api/v1/simulate")
    def post_simulate(body: SimulateBody):
        with session.lock:
            scene = session.scene
            grid = session.grid
            instant = session.instant
            spec = session.heatmap_spec
            active = session.active_job()
            if scene is None:
                raise _error(409, "no_scene", "load a scene before simulating")
            if grid is None:
                raise _error(409, "no_grid", "place a grid before simulating")
            if active is not None:
                raise _error(409, "job_running", f"job {active.id} is still {active.status}")
            if body.metric == "illuminance":
                sun = solar_position(scene.site, instant)
                if not sun.above_horizon:
                    raise _error(
                        409,
                        "sun_below_horizon",
                        f"sun below horizon at {instant.isoformat()}",
                    )
            job = JobRecord(
                id=uuid.uuid4().hex[:12],
                metric=body.metric,
                params={
                    "metric": body.metric,
                    "backend": body.backend,
                    "ambient_bounces": body.ambient_bounces,
                    "instant": _instant_dict(instant),
                },
            )
            job.mark(JOB_PENDING)
            session.jobs[job.id] = job
        params = SimulationParams(
            backend=body.backend,
            ambient_bounces=body.ambient_bounces,
            workdir=f"{base_workdir}/{job.id}",
        )
        thread = threading.Thread(
            target=_run_job,
            args=(session, job, scene, grid, instant, params, spec),
            daemon=True,
        )
        thread.start()
        return {"job_id": job.id, "status": job.status}

    @app.get("/api/v1/jobs/{job_id}")
    def get_job(job_id: str):
        job = session.jobs.get(job_id)
        if job is None:
            raise _error(404, "job_not_found", f"no job {job_id}")
        payload: dict[str, Any] = {
            "id": job.id,
            "status": job.status,
            "history": job.history,
            "params": job.params,
        }
        if job.status == JOB_FAILED:
            payload["error"] = job.error
        if job.status == JOB_DONE:
            payload["result_url"] = f"/api/v1/results/{job.id}"
        return payload

    @app.get("/api/v1/results/{job_id}")
    def get_result(job_id: str):
        job = session.jobs.get(job_id)
        if job is None:
            raise _error(404, "job_not_found", f"no job {job_id}")
        if job.status != JOB_DONE or job.result_bytes is None:
            raise _error(409, "not_done", f"job {job_id} is {job.status}")
        # frozen bytes: repeated reads are byte-identical
        return Response(content=job.result_bytes, media_type="application/json")

    # -- heatmap & display -------------------------------------------------------

    @app.post("/api/v1/heatmap-range")
    def post_heatmap_range(body: RangeBody):
        try:
            spec = HeatmapSpec.from_range(body.min, body.max, body.mid)
        except MetricsError as exc:
            raise _error(422, "invalid_range", str(exc))
        with session.lock:
            session.heatmap_spec = spec
            job = None
            if body.result_id is not None:
                job = session.jobs.get(body.result_id)
                if job is None:
                    raise _error(404, "job_not_found", f"no job {body.result_id}")
            else:
                done = [j for j in session.jobs.values() if j.status == JOB_DONE]
                if done:
                    job = max(done, key=lambda j: j.history[-1]["at"])
        payload: dict[str, Any] = {"spec": {"min": spec.min, "mid": spec.mid, "max": spec.max}}
        if job is not None and job.result_bytes is not None:
            doc = json.loads(job.result_bytes)
            values = np.asarray(doc["values"], dtype=np.float64)
            payload["result_id"] = job.id
            payload["colors"] = colorize(values, spec).tolist()
        return payload

    @app.post("/api/v1/display/transparent")
    def post_transparent(body: TransparentBody):
        with session.lock:
            session.transparent = body.enabled
        return {"transparent": body.enabled}

    @app.get("/api/v1/state")
    def get_state():
        with session.lock:
            return {
                "scene_loaded": session.scene is not None,
                "instant": _instant_dict(session.instant),
                "snap_mode": session.snap_mode,
                "observer": list(session.observer),
                "grid": None if session.grid is None else {
                    "count": session.grid.count,
                    "count_x": session.grid.count_x,
                    "count_y": session.grid.count_y,
                },
                "transparent": session.transparent,
                "heatmap": None
                if session.heatmap_spec is None
                else {
                    "min": session.heatmap_spec.min,
                    "mid": session.heatmap_spec.mid,
                    "max": session.heatmap_spec.max,
                },
                "jobs": [j.id for j in session.jobs.values()],
            }

    if ui_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
