"""Radiance orchestration: emit scene files, build the octree, run rtrace.

File emission is deterministic (stable ordering, %.6g formatting) so the
.rad outputs are byte-reproducible. Executables are discovered through the
HELIOS_RADIANCE_BIN environment variable first, then PATH; a missing
installation fails loudly before any work is staged.
"""

from __future__ import annotations

import math
import os
import shutil
import subprocess
import threading
from dataclasses import dataclass
from pathlib import Path

from .grid import SensorGrid, grid_to_sensor_lines
from .scene import Material, Scene
from .solar import CivilInstant, solar_position

RADIANCE_BIN_ENV = "HELIOS_RADIANCE_BIN"

SKY_CIE_OVERCAST = "cie_overcast"
SKY_CIE_CLEAR = "cie_clear"

# Conversion between Radiance radiometric units and photometric luminance.
LUMINOUS_EFFICACY = 179.0

JOB_PENDING = "pending"
JOB_RUNNING = "running"
JOB_DONE = "done"
JOB_FAILED = "failed"

_RTRACE_BATCH = 200  # sensors fed per stdin batch; cancellation checks in between


class RadianceError(Exception):
    """Base class for Radiance orchestration failures."""


class RadianceNotFoundError(RadianceError):
    """No usable Radiance executable was found."""


class SkyError(RadianceError):
    """The requested sky cannot be generated (e.g. sun below horizon)."""


@dataclass(frozen=True)
class SkyModel:
    """CIE sky selector: overcast for daylight-factor work, clear for point-in-time.

    ``zenith_luminance`` (cd/m^2) optionally pins the overcast zenith level;
    left unset, gensky derives it from the solar altitude.
    """

    kind: str
    instant: CivilInstant
    ground_reflectance: float = 0.2
    zenith_luminance: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in (SKY_CIE_OVERCAST, SKY_CIE_CLEAR):
            raise SkyError(f"unknown sky kind: {self.kind!r}")


@dataclass(frozen=True)
class IrradianceTriple:
    """RGB irradiance components reported by rtrace for one sensor."""

    r: float
    g: float
    b: float

    def __post_init__(self) -> None:
        for c in (self.r, self.g, self.b):
            if not (math.isfinite(c) and c >= 0.0):
                raise ValueError(f"irradiance component out of range: {c}")


@dataclass(eq=False)
class RadianceJob:
    """One rtrace invocation: scene + sky + grid + ambient settings."""

    scene: Scene
    sky: SkyModel
    grid: SensorGrid
    workdir: Path
    ambient_bounces: int = 2
    ambient_divisions: int = 1024
    ambient_samples: int = 256
    ambient_accuracy: float = 0.15
    ambient_resolution: int = 128
    bin_dir: str | None = None
    status: str = JOB_PENDING
    error: str | None = None
    result: list[IrradianceTriple] | None = None

    def _transition(self, new_status: str) -> None:
        allowed = {
            JOB_PENDING: {JOB_RUNNING},
            JOB_RUNNING: {JOB_DONE, JOB_FAILED},
        }
        if new_status not in allowed.get(self.status, set()):
            raise RadianceError(f"illegal job transition {self.status} -> {new_status}")
        self.status = new_status


def find_radiance_executable(name: str, bin_dir: str | None = None) -> str:
    """Resolve a Radiance tool via explicit dir, HELIOS_RADIANCE_BIN, then PATH."""
    candidates = []
    if bin_dir:
        candidates.append(Path(bin_dir) / name)
    env_dir = os.environ.get(RADIANCE_BIN_ENV)
    if env_dir:
        candidates.append(Path(env_dir) / name)
    for candidate in candidates:
        if candidate.is_file() and os.access(candidate, os.X_OK):
            return str(candidate)
    found = shutil.which(name)
    if found:
        return found
    raise RadianceNotFoundError(
        f"{name!r} not found; set {RADIANCE_BIN_ENV} to the Radiance bin directory"
    )


def radiance_available(bin_dir: str | None = None) -> bool:
    try:
        find_radiance_executable("oconv", bin_dir)
        find_radiance_executable("rtrace", bin_dir)
    except RadianceNotFoundError:
        return False
    return True


def _g(value: float) -> str:
    return format(float(value), ".6g")


def format_material(mat: Material) -> str:
    """Radiance primitive text for one material."""
    args = " ".join(_g(p) for p in mat.params)
    return f"void {mat.kind} {mat.name}\n0\n0\n{len(mat.params)} {args}"


def materials_text(scene: Scene) -> str:
    blocks = [format_material(m) for m in scene.materials.values()]
    return "# helios materials\n\n" + "\n\n".join(blocks) + "\n"


def geometry_text(scene: Scene) -> str:
    blocks = []
    for mi, mesh in enumerate(scene.meshes):
        for ti, tri in enumerate(mesh.triangles):
            coords = " ".join(
                _g(c) for vi in tri for c in mesh.vertices[int(vi)]
            )
            blocks.append(
                f"{mesh.material_id} polygon m{mi}_t{ti}\n0\n0\n9 {coords}"
            )
    return "# helios geometry\n\n" + "\n\n".join(blocks) + "\n"


def gensky_command(scene: Scene, sky: SkyModel) -> str:
    """The !gensky line embedded in the sky file.

    Longitude and meridian are converted to Radiance's west-positive
    convention. A nonzero model north offset rotates the sky into the model
    frame through xform.
    """
    site = scene.site
    t = sky.instant
    if sky.kind == SKY_CIE_CLEAR:
        sun = solar_position(site, t)
        if not sun.above_horizon:
            raise SkyError(
                f"cie_clear sky needs the sun above the horizon; altitude "
                f"{sun.altitude_deg:.2f} deg at {t.isoformat()}"
            )
    meridian = -15.0 * site.timezone_offset_hours
    mode = "+s" if sky.kind == SKY_CIE_CLEAR else "-c"
    cmd = (
        f"!gensky {t.month} {t.day} {t.decimal_hour:.3f}"
        f" -a {_g(site.latitude)} -o {_g(-site.longitude)} -m {_g(meridian)}"
        f" {mode} -g {_g(sky.ground_reflectance)}"
    )
    if sky.zenith_luminance is not None:
        cmd += f" -b {_g(sky.zenith_luminance / LUMINOUS_EFFICACY)}"
    if site.north_offset_deg:
        cmd += f" | xform -rz {_g(site.north_offset_deg)}"
    return cmd


def sky_text(scene: Scene, sky: SkyModel) -> str:
    return (
        "# helios sky\n\n"
        + gensky_command(scene, sky)
        + "\n\n"
        + "skyfunc glow sky_glow\n0\n0\n4 1 1 1 0\n\n"
        + "sky_glow source sky\n0\n0\n4 0 0 1 180\n\n"
        + "skyfunc glow ground_glow\n0\n0\n4 1 0.8 0.5 0\n\n"
        + "ground_glow source ground\n0\n0\n4 0 0 -1 180\n"
    )


def emit_radiance_files(scene: Scene, sky: SkyModel, workdir: str | Path) -> dict[str, Path]:
    """Write materials.rad, geometry.rad and sky.rad into the workdir."""
    workdir = Path(workdir)
    workdir.mkdir(parents=True, exist_ok=True)
    paths = {
        "materials": workdir / "materials.rad",
        "geometry": workdir / "geometry.rad",
        "sky": workdir / "sky.rad",
    }
    paths["materials"].write_text(materials_text(scene), encoding="ascii")
    paths["geometry"].write_text(geometry_text(scene), encoding="ascii")
    paths["sky"].write_text(sky_text(scene, sky), encoding="ascii")
    return paths


def build_octree(
    files: dict[str, Path], workdir: str | Path, bin_dir: str | None = None
) -> Path:
    """Combine the emitted files into scene.oct via oconv."""
    workdir = Path(workdir)
    oconv = find_radiance_executable("oconv", bin_dir)
    octree = workdir / "scene.oct"
    ordered = [str(files["materials"]), str(files["sky"]), str(files["geometry"])]
    proc = subprocess.run(
        [oconv, *ordered], capture_output=True, cwd=str(workdir)
    )
    if proc.returncode != 0:
        raise RadianceError(
            f"oconv failed with exit code {proc.returncode}:\n{proc.stderr.decode(errors='replace')}"
        )
    octree.write_bytes(proc.stdout)
    return octree


def _rtrace_args(job: RadianceJob, octree: Path) -> list[str]:
    rtrace = find_radiance_executable("rtrace", job.bin_dir)
    return [
        rtrace,
        "-I+",
        "-h",
        "-w",
        "-ab",
        str(job.ambient_bounces),
        "-ad",
        str(job.ambient_divisions),
        "-as",
        str(job.ambient_samples),
        "-aa",
        str(job.ambient_accuracy),
        "-ar",
        str(job.ambient_resolution),
        str(octree),
    ]


def parse_rtrace_output(text: str, expected: int) -> list[IrradianceTriple]:
    triples: list[IrradianceTriple] = []
    for line in text.splitlines():
        parts = line.split()
        if not parts:
            continue
        if len(parts) < 3:
            raise RadianceError(f"unparseable rtrace output line: {line!r}")
        try:
            r, g, b = (float(parts[0]), float(parts[1]), float(parts[2]))
        except ValueError as exc:
            raise RadianceError(f"non-numeric rtrace output: {line!r}") from exc
        triples.append(IrradianceTriple(r, g, b))
    if len(triples) != expected:
        raise RadianceError(
            f"rtrace returned {len(triples)} records for {expected} sensors"
        )
    return triples


def run_rtrace(
    job: RadianceJob, cancel_event: threading.Event | None = None
) -> list[IrradianceTriple]:
    """Execute the full pipeline for a job: emit, oconv, rtrace, parse.

    Sensor lines are fed to rtrace in batches; a set cancel_event between
    batches kills the process and fails the job.
    """
    job._transition(JOB_RUNNING)
    try:
        files = emit_radiance_files(job.scene, job.sky, job.workdir)
        octree = build_octree(files, job.workdir, job.bin_dir)
        sensor_text = grid_to_sensor_lines(job.grid)
        (job.workdir / "sensors.pts").write_text(sensor_text, encoding="ascii")

        lines = sensor_text.splitlines(keepends=True)
        proc = subprocess.Popen(
            _rtrace_args(job, octree),
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
            stderr=subprocess.PIPE,
            cwd=str(job.workdir),
        )
        stdout_parts: list[bytes] = []

        def _drain() -> None:
            assert proc.stdout is not None
            stdout_parts.append(proc.stdout.read())

        reader = threading.Thread(target=_drain)
        reader.start()
        try:
            assert proc.stdin is not None
            for start in range(0, len(lines), _RTRACE_BATCH):
                if cancel_event is not None and cancel_event.is_set():
                    raise RadianceError("job cancelled")
                batch = "".join(lines[start : start + _RTRACE_BATCH])
                proc.stdin.write(batch.encode("ascii"))
                proc.stdin.flush()
            proc.stdin.close()
        except BrokenPipeError as exc:
            proc.kill()
            reader.join()
            stderr = proc.stderr.read().decode(errors="replace") if proc.stderr else ""
            raise RadianceError(f"rtrace terminated early:\n{stderr}") from exc
        except RadianceError:
            proc.kill()
            reader.join()
            raise
        reader.join()
        returncode = proc.wait()
        stderr = proc.stderr.read().decode(errors="replace") if proc.stderr else ""
        if returncode != 0:
            raise RadianceError(f"rtrace failed with exit code {returncode}:\n{stderr}")
        output = b"".join(stdout_parts).decode("ascii", errors="replace")
        (job.workdir / "output.dat").write_text(output, encoding="ascii")
        triples = parse_rtrace_output(output, expected=job.grid.count)
    except Exception as exc:
        job.error = str(exc)
        job._transition(JOB_FAILED)
        raise
    job.result = triples
    job._transition(JOB_DONE)
    return triples


def parse_gensky_sun_angles(sky_output: str) -> tuple[float, float] | None:
    """(altitude, azimuth-from-north) parsed from gensky's comment block.

    gensky reports azimuth in degrees west of south; converted here to the
    clockwise-from-north convention used everywhere else.
    """
    for line in sky_output.splitlines():
        if "altitude" in line.lower() and "azimuth" in line.lower():
            numbers = [p for p in line.replace(":", " ").split() if _is_float(p)]
            if len(numbers) >= 2:
                alt = float(numbers[-2])
                az_ws = float(numbers[-1])
                return alt, (180.0 + az_ws) % 360.0
    return None


def _is_float(token: str) -> bool:
    try:
        float(token)
    except ValueError:
        return False
    return True
