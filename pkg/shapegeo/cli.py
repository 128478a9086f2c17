# SPDX-FileCopyrightText: 2026 shapegeo contributors
#
# SPDX-License-Identifier: MIT

"""
`cli`
================================================================================

The ``shapegeo`` command.

Subcommands: ``curvature``, ``geodesic``, ``sphere-ode``, ``deform``,
``momenta`` and ``make-icosphere``. Each writes its results and a
``manifest.json`` (configuration hash, package versions, wall time) into the
``--out`` directory.

Exit status: 0 success, 1 internal error, 2 bad input, configuration or an
unreadable or unwritable file, 3 violated precondition, 4 solver did not converge.


* Author(s): shapegeo contributors

"""
import argparse
import json
import logging
import platform
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from importlib import metadata
from pathlib import Path
from typing import Callable, Optional, Sequence

import numpy as np
import scipy

from shapegeo.config import DeformConfig, ExperimentConfig, config_hash, load_config, thread_count
from shapegeo.curvature import compute_curvature
from shapegeo.energy import path_length
from shapegeo.errors import MeshParseError, ShapeGeoError
from shapegeo.mesh import make_icosphere
from shapegeo.meshfile import FORMATS, load_mesh, save_mesh
from shapegeo.momenta import conservation_report, momenta_along_path, momenta_to_csv
from shapegeo.path import MeshPath
from shapegeo.phi import PhiSpec
from shapegeo.solver import (
    SolveStatus,
    center_radius_profile,
    radius_profile_to_csv,
    solve_geodesic_bvp,
)
from shapegeo.spheres import (
    SphereOdeParams,
    optimal_translation_radius,
    shrink_path_length,
    solve_sphere_bvp,
    trajectory_length,
    translate_sphere,
)

__version__ = "0.0.0-auto.0"
__repo__ = "https://github.com/shapegeo/shapegeo.git"

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_IO = 2
EXIT_NOT_CONVERGED = 4

#: Weight of the ``deform`` command when the configuration names none.
COMBINED_PHI = PhiSpec(A=1.0, k=1, B=1.0, l=1.0)


def _write_json(path: Path, data) -> None:
    path.write_text(json.dumps(data, indent=2) + "\n", encoding="utf-8")


def _versions() -> dict:
    try:
        own = metadata.version("shapegeo")
    except metadata.PackageNotFoundError:
        own = __version__
    return {
        "shapegeo": own,
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "python": platform.python_version(),
    }


def _experiment(args) -> ExperimentConfig:
    if args.config is None:
        return ExperimentConfig()
    return load_config(args.config)


def _output_dir(args, config: ExperimentConfig) -> Path:
    out = Path(args.out if args.out is not None else config.output)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_path(path: MeshPath, out: Path, mesh_format: str) -> None:
    width = len(str(path.n_intervals))
    for i, mesh in enumerate(path.meshes()):
        save_mesh(mesh, out / f"path_{i:0{width}d}.{mesh_format}", mesh_format)


def _solve_and_write(phi: PhiSpec, start, end, config: ExperimentConfig, out: Path, args) -> int:
    path, report = solve_geodesic_bvp(phi, start, end, config.timesteps, config.solver)
    _write_path(path, out, args.format)
    data = report.to_dict()
    del data["wall_time"]
    data["path_length"] = path_length(phi, path)
    _write_json(out / "report.json", data)
    _write_json(out / "energy.json", report.final.to_dict())
    report.final.write_csv(out / "energy.csv", path.midpoint_times)
    radius_profile_to_csv(center_radius_profile(path), out / "radius_profile.csv")
    samples = momenta_along_path(phi, path, config.solver.stages[-1])
    momenta_to_csv(samples, out / "momenta.csv")
    _write_json(out / "conservation.json", conservation_report(samples).to_dict())
    if report.status is not SolveStatus.CONVERGED:
        print(f"shapegeo: solver stopped: {report.status.value} {report.message}", file=sys.stderr)
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def cmd_curvature(args, config: ExperimentConfig, out: Path) -> int:
    """Per-vertex curvature CSV and a summary of one mesh."""
    del config
    mesh = load_mesh(args.mesh, args.input_format)
    field = compute_curvature(mesh)
    field.to_csv(out / "curvature.csv")
    _write_json(out / "summary.json", field.summary(mesh))
    return EXIT_OK


def cmd_geodesic(args, config: ExperimentConfig, out: Path) -> int:
    """Solve the geodesic boundary value problem of the configuration."""
    base = Path(args.config).parent if args.config else None
    start, end = config.mesh.build(base)
    return _solve_and_write(config.phi or PhiSpec(), start, end, config, out, args)


def cmd_deform(args, config: ExperimentConfig, out: Path) -> int:
    """Geodesic between two bump-deformed spheres, combined weight by default."""
    mesh = config.mesh
    sphere = make_icosphere(mesh.level, mesh.start_radius, mesh.center)
    start, end = (config.deform or DeformConfig()).apply(sphere, sphere)
    save_mesh(start, out / f"start.{args.format}", args.format)
    save_mesh(end, out / f"end.{args.format}", args.format)
    return _solve_and_write(config.phi or COMBINED_PHI, start, end, config, out, args)


def _sphere_params(args, config: ExperimentConfig):
    sphere = config.sphere
    params = sphere.params if sphere else SphereOdeParams()
    params = SphereOdeParams(
        n=params.n,
        B=params.B if args.B is None else args.B,
        l=params.l if args.l is None else args.l,
    )
    r0 = args.r0 if args.r0 is not None else (sphere.r0 if sphere else 1.0)
    r1 = args.r1 if args.r1 is not None else (sphere.r1 if sphere else 2.0)
    dt = args.dt if args.dt is not None else (sphere.dt if sphere else 1e-3)
    t_end = sphere.t_end if sphere else 1.0
    return params, r0, r1, t_end, dt


def _sphere_run(params: SphereOdeParams, r0, r1, t_end, dt, out: Path) -> dict:
    out.mkdir(parents=True, exist_ok=True)
    trajectory = solve_sphere_bvp(params, r0, r1, t_end, dt)
    trajectory.to_csv(out / "trajectory.csv")
    energy = trajectory.energy
    summary = {
        "n": params.n,
        "B": params.B,
        "l": params.l,
        "r0": r0,
        "r1": r1,
        "initial_velocity": float(trajectory.r_t[0]),
        "terminal_residual": abs(float(trajectory.r[-1]) - r1),
        "length": trajectory_length(trajectory),
        "energy_drift": float(np.max(np.abs(energy - energy[0])) / energy[0]) if energy[0] else 0.0,
    }
    _write_json(out / "summary.json", summary)
    return summary


def _sphere_translation(params: SphereOdeParams, args, config: ExperimentConfig, out: Path) -> int:
    path, report = translate_sphere(
        params.B,
        params.l,
        args.translate,
        config.timesteps,
        radius=args.radius,
        level=config.mesh.level,
        config=config.solver,
    )
    _write_path(path, out, args.format)
    _write_json(out / "translation.json", report.to_dict())
    radius_profile_to_csv(center_radius_profile(path), out / "radius_profile.csv")
    if not report.solve.converged:
        print(
            f"shapegeo: solver stopped: {report.solve.status.value} {report.solve.message}",
            file=sys.stderr,
        )
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def cmd_sphere_ode(args, config: ExperimentConfig, out: Path) -> int:
    """Sphere geodesics: the reduced equation, shrink lengths and translations."""
    params, r0, r1, t_end, dt = _sphere_params(args, config)
    if args.optimal_radius:
        radius = optimal_translation_radius(params.B, params.l)
        _write_json(out / "optimal_radius.json", {"B": params.B, "l": params.l, "radius": radius})
        print(repr(radius))
        return EXIT_OK
    if args.translate is not None:
        return _sphere_translation(params, args, config, out)
    epsilon = args.shrink_length
    if epsilon is None and config.sphere is not None:
        epsilon = config.sphere.epsilon
    if epsilon is not None:
        length = shrink_path_length(params, epsilon)
        _write_json(
            out / "shrink_length.json",
            {"B": params.B, "l": params.l, "epsilon": epsilon, "length": length},
        )
        print(repr(length))
        return EXIT_OK
    if args.sweep:
        values = config.sphere.sweep if config.sphere else (0.1, 1.0, 10.0, 100.0)
        workers = min(thread_count(), len(values))
        logger.info("sweeping B over %s with %d threads", list(values), workers)
        with ThreadPoolExecutor(max_workers=workers) as executor:
            futures = [
                executor.submit(
                    _sphere_run,
                    SphereOdeParams(n=params.n, B=b, l=params.l),
                    r0, r1, t_end, dt, out / f"B_{b:g}",
                )  # fmt: skip
                for b in values
            ]
            summaries = [f.result() for f in futures]
        _write_json(out / "sweep.json", summaries)
        return EXIT_OK
    _sphere_run(params, r0, r1, t_end, dt, out)
    return EXIT_OK


def cmd_momenta(args, config: ExperimentConfig, out: Path) -> int:
    """Momenta and their conservation along a directory of timestep meshes.

    The tangential velocity is weighted by the last configured penalty weight, as
    in the energy that produced the path.
    """
    files = sorted(Path(args.directory).glob(f"path_*.{args.input_format or 'off'}"))
    if len(files) < 2:
        raise MeshParseError("need at least two path_*.off timestep files", args.directory)
    path = MeshPath.from_meshes([load_mesh(f, args.input_format) for f in files])
    samples = momenta_along_path(config.phi or PhiSpec(), path, config.solver.stages[-1])
    momenta_to_csv(samples, out / "momenta.csv")
    _write_json(out / "conservation.json", conservation_report(samples).to_dict())
    return EXIT_OK


def cmd_make_icosphere(args, config: ExperimentConfig, out: Path) -> int:
    """Write a subdivided icosahedron."""
    del config
    mesh = make_icosphere(args.level, args.radius, args.center)
    save_mesh(mesh, out / f"icosphere_{args.level}.{args.format}", args.format)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    """The argument parser of the ``shapegeo`` command."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="experiment configuration (JSON)")
    common.add_argument("--out", help="output directory (default: the config's output)")
    common.add_argument("--format", choices=FORMATS, default="off", help="mesh output format")
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v info, -vv debug")

    parser = argparse.ArgumentParser(
        prog="shapegeo", description="Geodesics on shape space with curvature weighted metrics."
    )
    commands = parser.add_subparsers(dest="command", required=True)

    curvature = commands.add_parser("curvature", parents=[common], help=cmd_curvature.__doc__)
    curvature.add_argument("mesh", help="OFF or OBJ mesh file")
    curvature.add_argument("--input-format", choices=FORMATS, help="default: file suffix")
    curvature.set_defaults(handler=cmd_curvature)

    geodesic = commands.add_parser("geodesic", parents=[common], help=cmd_geodesic.__doc__)
    geodesic.set_defaults(handler=cmd_geodesic)

    deform = commands.add_parser("deform", parents=[common], help=cmd_deform.__doc__)
    deform.set_defaults(handler=cmd_deform)

    sphere = commands.add_parser("sphere-ode", parents=[common], help=cmd_sphere_ode.__doc__)
    sphere.add_argument("--B", type=float, help="Gauss curvature weight")
    sphere.add_argument("--l", type=float, help="half the Gauss curvature exponent")
    sphere.add_argument("--r0", type=float, help="radius at t = 0")
    sphere.add_argument("--r1", type=float, help="radius at t = 1")
    sphere.add_argument("--dt", type=float, help="integration step")
    sphere.add_argument("--sweep", action="store_true", help="solve every B of the sweep")
    sphere.add_argument(
        "--shrink-length", type=float, metavar="EPS", help="length of shrinking to radius EPS"
    )
    sphere.add_argument(
        "--optimal-radius", action="store_true", help="print the translating-sphere radius"
    )
    sphere.add_argument(
        "--translate",
        type=float,
        metavar="DISTANCE",
        help="solve the translation of a sphere mesh by DISTANCE radii",
    )
    sphere.add_argument(
        "--radius", type=float, help="radius of the translated sphere (default: optimal)"
    )
    sphere.set_defaults(handler=cmd_sphere_ode)

    momenta = commands.add_parser("momenta", parents=[common], help=cmd_momenta.__doc__)
    momenta.add_argument("directory", help="directory of path_*.off files")
    momenta.add_argument("--input-format", choices=FORMATS, help="default: off")
    momenta.set_defaults(handler=cmd_momenta)

    icosphere = commands.add_parser(
        "make-icosphere", parents=[common], help=cmd_make_icosphere.__doc__
    )
    icosphere.add_argument("--level", type=int, default=2)
    icosphere.add_argument("--radius", type=float, default=1.0)
    icosphere.add_argument("--center", type=float, nargs=3, default=(0.0, 0.0, 0.0))
    icosphere.set_defaults(handler=cmd_make_icosphere)
    return parser


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity > 1:
        level = logging.DEBUG
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def _write_manifest(args, config: Optional[ExperimentConfig], out: Optional[Path], code, began):
    if out is None:
        if args.out is None:
            return
        out = Path(args.out)
    settings = config.to_dict() if config is not None else None
    manifest = {
        "command": args.command,
        "config_path": args.config,
        "config_sha256": config_hash(settings) if settings is not None else None,
        "config": settings,
        "versions": _versions(),
        "wall_time": time.perf_counter() - began,
        "exit_code": code,
    }
    try:
        out.mkdir(parents=True, exist_ok=True)
        _write_json(out / "manifest.json", manifest)
    except OSError as error:
        logger.warning("cannot write manifest to %s: %s", out, error)


def _run(handler: Callable, args) -> int:
    began = time.perf_counter()
    config = None
    out = None
    code = EXIT_INTERNAL
    try:
        config = _experiment(args)
        out = _output_dir(args, config)
        code = handler(args, config, out)
        return code
    except ShapeGeoError as error:
        code = error.exit_code
        raise
    except OSError:
        code = EXIT_IO
        raise
    finally:
        _write_manifest(args, config, out, code, began)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run the command line and return the exit status."""
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)
    try:
        return _run(args.handler, args)
    except ShapeGeoError as error:
        print(f"shapegeo: error: {error}", file=sys.stderr)
        return error.exit_code
    except OSError as error:
        print(f"shapegeo: error: {error}", file=sys.stderr)
        return EXIT_IO
    except Exception:  # pylint: disable=broad-except
        logger.exception("internal error")
        return EXIT_INTERNAL
