from __future__ import annotations

import json
import time

import pytest
from fastapi.testclient import TestClient

from helios.service import create_app

from .conftest import unit_cube_scene_dict


@pytest.fixture
def client(tmp_path):
    app = create_app(workdir=str(tmp_path))
    with TestClient(app) as c:
        yield c


def load_fixture_scene(client) -> None:
    resp = client.post("/api/v1/scene", json=scene_doc_with_window())
    assert resp.status_code == 200, resp.text


def scene_doc_with_window() -> dict:
    doc = unit_cube_scene_dict()
    # scale the cube room up so a usable grid fits inside
    for mesh in doc["meshes"]:
        mesh["vertices"] = [[6.0 * x, 4.0 * y, 3.0 * z] for x, y, z in mesh["vertices"]]
    return doc


def place_grid(client, width=2.0, depth=2.0, spacing=1.0) -> dict:
    resp = client.post(
        "/api/v1/grid",
        json={
            "center": [3.0, 2.0],
            "height": 0.8,
            "width": width,
            "depth": depth,
            "spacing": [spacing, spacing],
        },
    )
    assert resp.status_code == 200, resp.text
    return resp.json()


def wait_for(client, job_id, timeout=30.0) -> dict:
    deadline = time.time() + timeout
    while time.time() < deadline:
        payload = client.get(f"/api/v1/jobs/{job_id}").json()
        if payload["status"] in ("done", "failed"):
            return payload
        time.sleep(0.02)
    raise TimeoutError(f"job {job_id} did not finish")


class TestSunAndTime:
    def test_default_instant_sun(self, client):
        resp = client.get("/api/v1/sun")
        assert resp.status_code == 200
        body = resp.json()
        assert body["instant"]["month"] == 6
        assert body["instant"]["day"] == 21
        assert body["instant"]["hour"] == 12
        assert body["above_horizon"] is True
        assert len(body["direction"]) == 3

    def test_invalid_month_422_with_field(self, client):
        resp = client.post(
            "/api/v1/time",
            json={"year": 2021, "month": 13, "day": 1, "hour": 12, "minute": 0},
        )
        assert resp.status_code == 422
        body = resp.json()
        assert body["code"] == "validation_error"
        assert body["field"] == "month"

    def test_invalid_day_combination(self, client):
        resp = client.post(
            "/api/v1/time",
            json={"year": 2021, "month": 2, "day": 30, "hour": 12, "minute": 0},
        )
        assert resp.status_code == 422
        assert resp.json()["code"] == "invalid_time"

    def test_absolute_time_set_and_idempotent(self, client):
        payload = {"year": 2021, "month": 3, "day": 5, "hour": 10, "minute": 0}
        first = client.post("/api/v1/time", json=payload).json()
        second = client.post("/api/v1/time", json=payload).json()
        assert first == second
        sun = client.get("/api/v1/sun").json()
        assert sun["instant"]["month"] == 3

    def test_step_hour(self, client):
        client.post("/api/v1/time", json={"year": 2021, "month": 6, "day": 21, "hour": 12, "minute": 0})
        resp = client.post("/api/v1/time/step", json={"axis": "hour", "delta": 3})
        assert resp.json()["instant"]["hour"] == 15

    def test_step_hour_wraps_day(self, client):
        client.post("/api/v1/time", json={"year": 2021, "month": 6, "day": 21, "hour": 23, "minute": 0})
        body = client.post("/api/v1/time/step", json={"axis": "hour", "delta": 2}).json()
        assert body["instant"]["day"] == 22
        assert body["instant"]["hour"] == 1

    def test_step_day_with_snap(self, client):
        client.post("/api/v1/time/snap-mode", json={"mode": "day"})
        client.post("/api/v1/time", json={"year": 2021, "month": 3, "day": 5, "hour": 10, "minute": 0})
        body = client.post("/api/v1/time/step", json={"axis": "day", "delta": 1}).json()
        assert (body["instant"]["month"], body["instant"]["day"]) == (3, 21)
        assert body["instant"]["hour"] == 10

    def test_snap_mode_idempotent(self, client):
        a = client.post("/api/v1/time/snap-mode", json={"mode": "both"}).json()
        b = client.post("/api/v1/time/snap-mode", json={"mode": "both"}).json()
        assert a == b == {"mode": "both"}

    def test_nine_point_endpoints(self, client):
        first = client.post("/api/v1/time/nine-point", json={"index": 0}).json()
        assert (first["instant"]["month"], first["instant"]["day"], first["instant"]["hour"]) == (6, 21, 9)
        last = client.post("/api/v1/time/nine-point", json={"index": 8}).json()
        assert (last["instant"]["month"], last["instant"]["day"], last["instant"]["hour"]) == (12, 22, 15)

    def test_nine_point_out_of_range(self, client):
        resp = client.post("/api/v1/time/nine-point", json={"index": 9})
        assert resp.status_code == 422
        assert resp.json()["code"] == "index_out_of_range"


class TestSceneEndpoints:
    def test_get_without_scene_404(self, client):
        resp = client.get("/api/v1/scene")
        assert resp.status_code == 404
        assert resp.json()["code"] == "no_scene"

    def test_post_and_get_scene(self, client):
        load_fixture_scene(client)
        body = client.get("/api/v1/scene").json()
        assert set(body) == {"hash", "scene"}
        assert len(body["scene"]["meshes"]) == 2
        again = client.get("/api/v1/scene").json()
        assert again["hash"] == body["hash"]

    def test_post_invalid_scene_422(self, client):
        doc = unit_cube_scene_dict()
        doc["site"]["lat"] = 95
        resp = client.post("/api/v1/scene", json=doc)
        assert resp.status_code == 422
        assert resp.json()["code"] == "invalid_scene"


class TestSunpathEndpoint:
    def test_sunpath_without_scene_uses_default_site(self, client):
        resp = client.get("/api/v1/sunpath", params={"observer": "0,0,1.5", "radius": 10})
        assert resp.status_code == 200
        body = resp.json()
        assert len(body["arcs"]) == 12

    def test_bad_observer_rejected(self, client):
        resp = client.get("/api/v1/sunpath", params={"observer": "1,2"})
        assert resp.status_code == 422


class TestGridEndpoints:
    def test_post_and_get(self, client):
        doc = place_grid(client)
        assert doc["count"] == 9
        got = client.get("/api/v1/grid").json()
        assert got["count"] == 9

    def test_invalid_grid_422(self, client):
        resp = client.post(
            "/api/v1/grid",
            json={"center": [0, 0], "height": 0.8, "width": 2.0, "depth": 2.0, "spacing": [5.0, 1.0]},
        )
        assert resp.status_code == 422

    def test_get_without_grid_404(self, client):
        assert client.get("/api/v1/grid").status_code == 404


class TestSimulationJobs:
    def test_simulate_requires_scene_and_grid(self, client):
        resp = client.post("/api/v1/simulate", json={"metric": "df"})
        assert resp.status_code == 409
        assert resp.json()["code"] == "no_scene"
        load_fixture_scene(client)
        resp = client.post("/api/v1/simulate", json={"metric": "df"})
        assert resp.status_code == 409
        assert resp.json()["code"] == "no_grid"

    def test_job_lifecycle_df(self, client):
        load_fixture_scene(client)
        place_grid(client)
        resp = client.post("/api/v1/simulate", json={"metric": "df", "backend": "oracle"})
        assert resp.status_code == 200
        job_id = resp.json()["job_id"]
        payload = wait_for(client, job_id)
        assert payload["status"] == "done"
        statuses = [h["status"] for h in payload["history"]]
        assert statuses == ["pending", "running", "done"]
        assert payload["result_url"] == f"/api/v1/results/{job_id}"

    def test_result_immutable_bytes(self, client):
        load_fixture_scene(client)
        place_grid(client)
        job_id = client.post("/api/v1/simulate", json={"metric": "df"}).json()["job_id"]
        wait_for(client, job_id)
        first = client.get(f"/api/v1/results/{job_id}").content
        second = client.get(f"/api/v1/results/{job_id}").content
        assert first == second
        doc = json.loads(first)
        assert doc["metric"] == "daylight_factor_percent"
        assert doc["spec"] == {"min": 0.0, "mid": 5.0, "max": 10.0}
        assert len(doc["values"]) == 9
        assert len(doc["colors"]) == 9

    def test_night_illuminance_rejected_at_submit(self, client):
        load_fixture_scene(client)
        place_grid(client)
        client.post("/api/v1/time", json={"year": 2021, "month": 6, "day": 21, "hour": 1, "minute": 0})
        resp = client.post("/api/v1/simulate", json={"metric": "illuminance"})
        assert resp.status_code == 409
        assert resp.json()["code"] == "sun_below_horizon"

    def test_single_running_job(self, client):
        load_fixture_scene(client)
        place_grid(client, width=6.0, depth=4.0, spacing=0.1)  # large grid: slow job
        first = client.post("/api/v1/simulate", json={"metric": "df"})
        assert first.status_code == 200
        second = client.post("/api/v1/simulate", json={"metric": "df"})
        assert second.status_code == 409
        assert second.json()["code"] == "job_running"
        wait_for(client, first.json()["job_id"], timeout=120)

    def test_sun_latency_under_running_job(self, client):
        load_fixture_scene(client)
        place_grid(client, width=6.0, depth=4.0, spacing=0.1)
        job_id = client.post("/api/v1/simulate", json={"metric": "df"}).json()["job_id"]
        status = client.get(f"/api/v1/jobs/{job_id}").json()["status"]
        assert status in ("pending", "running")
        worst = 0.0
        for _ in range(5):
            start = time.perf_counter()
            resp = client.get("/api/v1/sun")
            elapsed = time.perf_counter() - start
            worst = max(worst, elapsed)
            assert resp.status_code == 200
        assert worst < 0.1, f"sun query took {worst * 1000:.1f} ms during a running job"
        wait_for(client, job_id, timeout=120)

    def test_unknown_job_404(self, client):
        assert client.get("/api/v1/jobs/nope").status_code == 404
        assert client.get("/api/v1/results/nope").status_code == 404


class TestHeatmapRange:
    def test_recolor_without_resimulation(self, client):
        load_fixture_scene(client)
        place_grid(client)
        job_id = client.post("/api/v1/simulate", json={"metric": "df"}).json()["job_id"]
        wait_for(client, job_id)
        original = client.get(f"/api/v1/results/{job_id}").content

        resp = client.post("/api/v1/heatmap-range", json={"min": 2.0, "max": 4.0})
        assert resp.status_code == 200
        body = resp.json()
        assert body["spec"] == {"min": 2.0, "mid": 3.0, "max": 4.0}
        assert body["result_id"] == job_id
        assert len(body["colors"]) == 9

        # stored result unchanged, no new jobs created
        assert client.get(f"/api/v1/results/{job_id}").content == original
        state = client.get("/api/v1/state").json()
        assert state["jobs"] == [job_id]

    def test_invalid_range_rejected(self, client):
        resp = client.post("/api/v1/heatmap-range", json={"min": 5.0, "max": 5.0})
        assert resp.status_code == 422


class TestDisplayToggle:
    def test_transparent_stored_only(self, client):
        load_fixture_scene(client)
        before = client.get("/api/v1/scene").json()["hash"]
        resp = client.post("/api/v1/display/transparent", json={"enabled": True})
        assert resp.json() == {"transparent": True}
        assert client.get("/api/v1/state").json()["transparent"] is True
        assert client.get("/api/v1/scene").json()["hash"] == before
