"""Command-line interface: scene import, sun queries, diagrams, grids, simulations, heatmaps."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .grid import grid_to_dict, grid_to_sensor_lines, make_grid
from .metrics import (
    BACKEND_ORACLE,
    BACKEND_RADIANCE,
    HeatmapSpec,
    SimulationParams,
    daylight_factor,
    point_in_time_illuminance,
    result_from_dict,
    result_to_dict,
)
from .report import (
    write_heatmap_figure,
    write_heatmap_png,
    write_sunpath_svg,
    write_values_csv,
)
from .scene import DEFAULT_SITE, SceneError, Site, load_scene, save_scene, scene_bounds
from .solar import CivilInstant, solar_position
from .sunpath import build_diagram, save_diagram


def _parse_date(text: str) -> tuple[int, int, int]:
    parts = text.split("-")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected YYYY-MM-DD, got {text!r}")
    return int(parts[0]), int(parts[1]), int(parts[2])


def _parse_time(text: str) -> tuple[int, int]:
    parts = text.split(":")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected HH:MM, got {text!r}")
    return int(parts[0]), int(parts[1])


def _parse_pair(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected two comma-separated numbers, got {text!r}")
    return float(parts[0]), float(parts[1])


def _parse_triple(text: str) -> tuple[float, float, float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected x,y,z, got {text!r}")
    return float(parts[0]), float(parts[1]), float(parts[2])


def _parse_size(text: str) -> tuple[float, float]:
    parts = text.lower().split("x")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected WxD (e.g. 25x40), got {text!r}")
    return float(parts[0]), float(parts[1])


def _instant_from_args(args) -> CivilInstant:
    year, month, day = args.date
    hour, minute = args.time
    return CivilInstant(year, month, day, hour, minute)


def _cmd_import(args) -> int:
    scene = load_scene(args.scene)
    lo, hi = scene_bounds(scene)
    triangles = sum(len(m.triangles) for m in scene.meshes)
    print(f"scene: {args.scene}")
    print(f"  meshes:    {len(scene.meshes)} ({triangles} triangles)")
    print(f"  materials: {len(scene.materials)}")
    print(
        f"  site:      lat {scene.site.latitude}, lon {scene.site.longitude}, "
        f"tz {scene.site.timezone_offset_hours:+g} h"
    )
    print(f"  bounds:    min ({lo[0]:g}, {lo[1]:g}, {lo[2]:g})  max ({hi[0]:g}, {hi[1]:g}, {hi[2]:g})")
    if args.out:
        save_scene(scene, args.out)
        print(f"  normalized copy written to {args.out}")
    return 0


def _cmd_sun(args) -> int:
    site = Site(args.lat, args.lon, args.tz)
    instant = _instant_from_args(args)
    pos = solar_position(site, instant)
    if args.json:
        print(
            json.dumps(
                {
                    "altitude": pos.altitude_deg,
                    "azimuth": pos.azimuth_deg,
                    "zenith": pos.zenith_deg,
                    "declination": pos.declination_deg,
                    "equation_of_time_min": pos.equation_of_time_min,
                    "direction": pos.sun_direction.tolist(),
                }
            )
        )
    else:
        print(f"altitude:          {pos.altitude_deg:9.3f} deg")
        print(f"azimuth:           {pos.azimuth_deg:9.3f} deg (clockwise from north)")
        print(f"zenith:            {pos.zenith_deg:9.3f} deg")
        print(f"declination:       {pos.declination_deg:9.3f} deg")
        print(f"equation of time:  {pos.equation_of_time_min:9.3f} min")
    return 0


def _cmd_sunpath(args) -> int:
    scene = load_scene(args.scene)
    diagram = build_diagram(
        scene, np.array(args.observer), radius=args.radius, strict_days=args.strict
    )
    save_diagram(diagram, args.out)
    print(f"sun-path diagram written to {args.out}")
    if args.svg:
        write_sunpath_svg(diagram, args.svg)
        print(f"stereographic chart written to {args.svg}")
    return 0


def _cmd_grid(args) -> int:
    grid = make_grid(
        center_xy=args.center,
        height_z=args.height,
        width_x=args.size[0],
        depth_y=args.size[1],
        spacing_x=args.spacing[0],
        spacing_y=args.spacing[1],
    )
    if args.json:
        print(json.dumps(grid_to_dict(grid)))
    else:
        text = grid_to_sensor_lines(grid)
        if args.out:
            Path(args.out).write_text(text, encoding="ascii")
            print(f"{grid.count} sensors ({grid.count_x} x {grid.count_y}) written to {args.out}")
        else:
            sys.stdout.write(text)
    return 0


def _cmd_simulate(args) -> int:
    scene = load_scene(args.scene)
    grid = make_grid(
        center_xy=args.center,
        height_z=args.height,
        width_x=args.size[0],
        depth_y=args.size[1],
        spacing_x=args.spacing[0],
        spacing_y=args.spacing[1],
    )
    params = SimulationParams(
        backend=args.backend,
        ambient_bounces=args.ab,
        workdir=args.workdir,
    )
    instant = _instant_from_args(args)
    if args.metric == "df":
        result = daylight_factor(scene, grid, params, instant)
    else:
        result = point_in_time_illuminance(scene, grid, instant, params)
    doc = result_to_dict(result)
    Path(args.out).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    values = result.values
    print(
        f"{result.metric} over {grid.count} sensors ({args.backend} backend): "
        f"min {values.min():.3f}  mean {values.mean():.3f}  max {values.max():.3f}"
    )
    print(f"result written to {args.out}")
    return 0


def _cmd_heatmap(args) -> int:
    doc = json.loads(Path(args.result).read_text(encoding="utf-8"))
    result, spec = result_from_dict(doc)
    if args.range:
        spec = HeatmapSpec.from_range(args.range[0], args.range[1])
    png = write_heatmap_png(result, args.out, spec, cell_px=args.cell_px)
    print(f"heatmap written to {png}")
    if args.csv:
        write_values_csv(result, args.csv, spec)
        print(f"values written to {args.csv}")
    if args.figure:
        write_heatmap_figure(result, args.figure, spec)
        print(f"figure written to {args.figure}")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(scene_path=args.scene, workdir=args.workdir, ui_dir=args.ui)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="helios", description="Daylighting analysis toolkit"
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("import", help="validate a scene file and print a summary")
    p.add_argument("scene", help="scene JSON path")
    p.add_argument("--out", help="write a normalized copy")
    p.set_defaults(func=_cmd_import)

    p = sub.add_parser("sun", help="sun position for a site and instant")
    p.add_argument("--lat", type=float, default=DEFAULT_SITE.latitude)
    p.add_argument("--lon", type=float, default=DEFAULT_SITE.longitude)
    p.add_argument("--tz", type=float, default=DEFAULT_SITE.timezone_offset_hours)
    p.add_argument("--date", type=_parse_date, default="2021-06-21")
    p.add_argument("--time", type=_parse_time, default="12:00")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_sun)

    p = sub.add_parser("sunpath", help="observer-centered sun-path diagram")
    p.add_argument("--scene", required=True)
    p.add_argument("--observer", type=_parse_triple, required=True, metavar="X,Y,Z")
    p.add_argument("--radius", type=float, default=20.0)
    p.add_argument("--strict", action="store_true", help="verbatim 11-day arc list")
    p.add_argument("--out", required=True, help="diagram JSON path")
    p.add_argument("--svg", help="also render a stereographic SVG chart")
    p.set_defaults(func=_cmd_sunpath)

    p = sub.add_parser("grid", help="generate a sensor grid")
    p.add_argument("--center", type=_parse_pair, default=(0.0, 0.0), metavar="X,Y")
    p.add_argument("--height", type=float, default=0.8)
    p.add_argument("--size", type=_parse_size, required=True, metavar="WxD")
    p.add_argument("--spacing", type=_parse_pair, required=True, metavar="SX,SY")
    p.add_argument("--out", help="write sensor lines here instead of stdout")
    p.add_argument("--json", action="store_true", help="emit grid JSON instead of sensor lines")
    p.set_defaults(func=_cmd_grid)

    p = sub.add_parser("simulate", help="run a daylighting simulation")
    p.add_argument("--scene", required=True)
    p.add_argument("--metric", choices=["df", "illuminance"], required=True)
    p.add_argument("--backend", choices=[BACKEND_ORACLE, BACKEND_RADIANCE], default=BACKEND_ORACLE)
    p.add_argument("--ab", type=int, default=2, help="ambient bounces (radiance backend)")
    p.add_argument("--center", type=_parse_pair, default=(0.0, 0.0), metavar="X,Y")
    p.add_argument("--height", type=float, default=0.8)
    p.add_argument("--size", type=_parse_size, required=True, metavar="WxD")
    p.add_argument("--spacing", type=_parse_pair, required=True, metavar="SX,SY")
    p.add_argument("--date", type=_parse_date, default="2021-06-21")
    p.add_argument("--time", type=_parse_time, default="12:00")
    p.add_argument("--workdir", help="radiance working directory")
    p.add_argument("--out", required=True, help="result JSON path")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("heatmap", help="render a stored result")
    p.add_argument("result", help="result JSON from `helios simulate`")
    p.add_argument("--out", required=True, help="exact-color PNG path")
    p.add_argument("--cell-px", type=int, default=10)
    p.add_argument("--range", type=_parse_pair, metavar="MIN,MAX", help="override the color range")
    p.add_argument("--csv", help="also write per-sensor values CSV")
    p.add_argument("--figure", help="also write an annotated figure (png/svg/pdf)")
    p.set_defaults(func=_cmd_heatmap)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--scene", help="scene JSON to preload")
    p.add_argument("--workdir", help="simulation working directory")
    p.add_argument("--ui", help="serve a built web client from this directory")
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SceneError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # surfaced with a clean message, not a traceback
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
