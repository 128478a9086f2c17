# SPDX-FileCopyrightText: 2026 shapegeo contributors
#
# SPDX-License-Identifier: MIT

"""
`config`
================================================================================

Experiment configuration documents (JSON) for the command line.

A document looks like::

    {
        "phi": {"A": 0, "k": 1, "B": 1, "l": 1},
        "solver": {"max_iterations": 500, "lambda": 1.0},
        "mesh": {"level": 2, "start_radius": 1.0, "end_radius": 2.0},
        "timesteps": 50,
        "output": "out"
    }

Every block is validated before any computation; unknown keys are errors.


* Author(s): shapegeo contributors

"""
import hashlib
import json
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Tuple

from shapegeo.errors import ConfigError, PreconditionError
from shapegeo.mesh import TriMesh, make_icosphere
from shapegeo.meshfile import load_mesh
from shapegeo.phi import PhiSpec
from shapegeo.shapes import bump_deform
from shapegeo.solver import SolverConfig
from shapegeo.spheres import SphereOdeParams

__version__ = "0.0.0-auto.0"
__repo__ = "https://github.com/shapegeo/shapegeo.git"

logger = logging.getLogger(__name__)

THREADS_VARIABLE = "SHAPEGEO_THREADS"


def _check_keys(block: str, data, known) -> dict:
    if not isinstance(data, dict):
        raise ConfigError(f"{block} must be a JSON object, got {type(data).__name__}")
    unknown = set(data) - set(known)
    if unknown:
        raise ConfigError(f"unknown {block} keys: {sorted(unknown)}")
    return data


def _vector(block: str, name: str, value) -> Tuple[float, float, float]:
    try:
        vector = tuple(float(x) for x in value)
    except (TypeError, ValueError) as error:
        raise ConfigError(f"{block}.{name} must be three numbers") from error
    if len(vector) != 3:
        raise ConfigError(f"{block}.{name} must be three numbers, got {len(vector)}")
    return vector


@dataclass(frozen=True)
class MeshConfig:
    # pylint: disable=too-many-instance-attributes
    """Where the boundary shapes come from.

    Either two mesh files (``start`` and ``end``) or two icospheres of one
    ``level`` with radii ``start_radius`` and ``end_radius``, the second moved
    by ``end_offset``.
    """

    level: int = 2
    start_radius: float = 1.0
    end_radius: float = 2.0
    center: Tuple[float, float, float] = (0.0, 0.0, 0.0)
    end_offset: Tuple[float, float, float] = (0.0, 0.0, 0.0)
    start: Optional[str] = None
    end: Optional[str] = None
    mesh_format: Optional[str] = None

    KEYS = ("level", "start_radius", "end_radius", "center", "end_offset", "start", "end", "format")

    @classmethod
    def from_dict(cls, data: dict) -> "MeshConfig":
        """Validate a ``mesh`` block."""
        _check_keys("mesh", data, cls.KEYS)
        if ("start" in data) != ("end" in data):
            raise ConfigError("mesh.start and mesh.end must be given together")
        try:
            config = cls(
                level=int(data.get("level", 2)),
                start_radius=float(data.get("start_radius", 1.0)),
                end_radius=float(data.get("end_radius", 2.0)),
                center=_vector("mesh", "center", data.get("center", (0, 0, 0))),
                end_offset=_vector("mesh", "end_offset", data.get("end_offset", (0, 0, 0))),
                start=data.get("start"),
                end=data.get("end"),
                mesh_format=data.get("format"),
            )
        except (TypeError, ValueError) as error:
            if isinstance(error, ConfigError):
                raise
            raise ConfigError(f"bad mesh value: {error}") from error
        if config.start is None and not (config.start_radius > 0 and config.end_radius > 0):
            raise ConfigError("sphere radii must be positive")
        return config

    def build(self, base: Optional[Path] = None) -> Tuple[TriMesh, TriMesh]:
        """Load or generate ``(start, end)``; relative file paths resolve against ``base``."""
        if self.start is not None:
            base = base or Path.cwd()
            return (
                load_mesh(base / self.start, self.mesh_format),
                load_mesh(base / self.end, self.mesh_format),
            )
        try:
            start = make_icosphere(self.level, self.start_radius, self.center)
            end = make_icosphere(self.level, self.end_radius, self.center)
        except PreconditionError as error:
            raise ConfigError(f"mesh: {error}") from error
        return start, end.translated(self.end_offset)

    def to_dict(self) -> dict:
        """JSON-ready settings."""
        return {
            "level": self.level,
            "start_radius": self.start_radius,
            "end_radius": self.end_radius,
            "center": list(self.center),
            "end_offset": list(self.end_offset),
            "start": self.start,
            "end": self.end,
            "format": self.mesh_format,
        }


@dataclass(frozen=True)
class DeformConfig:
    """Bump deformations of the two boundary spheres of the ``deform`` command.

    :param amplitude: Peak bump height on both shapes.
    :param direction: Bump direction on the start shape.
    :param end_direction: Bump direction on the end shape.
    :param width: Angular width of the bumps.
    """

    amplitude: float = 0.1
    direction: Tuple[float, float, float] = (0.0, 0.0, 1.0)
    end_direction: Tuple[float, float, float] = (1.0, 0.0, 0.0)
    width: float = 0.5

    @classmethod
    def from_dict(cls, data: dict) -> "DeformConfig":
        """Validate a ``deform`` block."""
        _check_keys("deform", data, ("amplitude", "direction", "end_direction", "width"))
        try:
            config = cls(
                amplitude=float(data.get("amplitude", 0.1)),
                direction=_vector("deform", "direction", data.get("direction", (0, 0, 1))),
                end_direction=_vector(
                    "deform", "end_direction", data.get("end_direction", (1, 0, 0))
                ),
                width=float(data.get("width", 0.5)),
            )
        except (TypeError, ValueError) as error:
            if isinstance(error, ConfigError):
                raise
            raise ConfigError(f"bad deform value: {error}") from error
        if not config.width > 0:
            raise ConfigError(f"deform.width must be positive, got {config.width}")
        return config

    def apply(self, start: TriMesh, end: TriMesh) -> Tuple[TriMesh, TriMesh]:
        """Bump ``start`` towards ``direction`` and ``end`` towards ``end_direction``."""
        return (
            bump_deform(start, self.amplitude, self.direction, self.width),
            bump_deform(end, self.amplitude, self.end_direction, self.width),
        )


@dataclass(frozen=True)
class SphereConfig:
    # pylint: disable=too-many-instance-attributes
    """Settings of the ``sphere-ode`` command.

    :param params: Equation parameters.
    :param r0: Radius at ``t = 0``.
    :param r1: Radius at ``t = t_end``.
    :param t_end: Duration.
    :param dt: Integration step.
    :param sweep: ``B`` values solved concurrently with ``--sweep``.
    :param epsilon: Smallest radius of the shrink-length evaluation, if wanted.
    """

    params: SphereOdeParams = field(default_factory=SphereOdeParams)
    r0: float = 1.0
    r1: float = 2.0
    t_end: float = 1.0
    dt: float = 1e-3
    sweep: Tuple[float, ...] = (0.1, 1.0, 10.0, 100.0)
    epsilon: Optional[float] = None

    @classmethod
    def from_dict(cls, data: dict) -> "SphereConfig":
        """Validate a ``sphere`` block; ``n``, ``B`` and ``l`` sit at its top level."""
        _check_keys("sphere", data, ("n", "B", "l", "r0", "r1", "t_end", "dt", "sweep", "epsilon"))
        params = SphereOdeParams.from_dict({k: data[k] for k in ("n", "B", "l") if k in data})
        try:
            config = cls(
                params=params,
                r0=float(data.get("r0", 1.0)),
                r1=float(data.get("r1", 2.0)),
                t_end=float(data.get("t_end", 1.0)),
                dt=float(data.get("dt", 1e-3)),
                sweep=tuple(float(b) for b in data.get("sweep", (0.1, 1.0, 10.0, 100.0))),
                epsilon=None if data.get("epsilon") is None else float(data["epsilon"]),
            )
        except (TypeError, ValueError) as error:
            raise ConfigError(f"bad sphere value: {error}") from error
        if not (config.r0 > 0 and config.r1 > 0 and config.t_end > 0 and config.dt > 0):
            raise ConfigError("sphere r0, r1, t_end and dt must be positive")
        if any(b < 0 for b in config.sweep):
            raise ConfigError("sphere.sweep values must be >= 0")
        return config


@dataclass(frozen=True)
class ExperimentConfig:
    # pylint: disable=too-many-instance-attributes
    """One command-line experiment.

    :param phi: Weight function; each command has its own default.
    :param solver: Optimiser settings.
    :param mesh: Boundary shapes.
    :param timesteps: Number of intervals ``N``.
    :param output: Output directory.
    :param deform: Bump settings of the ``deform`` command.
    :param sphere: Settings of the ``sphere-ode`` command.
    """

    phi: Optional[PhiSpec] = None
    solver: SolverConfig = field(default_factory=SolverConfig)
    mesh: MeshConfig = field(default_factory=MeshConfig)
    timesteps: int = 50
    output: str = "out"
    deform: Optional[DeformConfig] = None
    sphere: Optional[SphereConfig] = None

    KEYS = ("phi", "solver", "mesh", "timesteps", "output", "deform", "sphere")

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        """Validate a whole document.

        :raises ConfigError: on unknown keys or invalid values in any block.
        """
        _check_keys("config", data, cls.KEYS)
        timesteps = data.get("timesteps", 50)
        if not isinstance(timesteps, int) or isinstance(timesteps, bool) or timesteps < 2:
            raise ConfigError(f"timesteps must be an integer >= 2, got {timesteps!r}")
        for block in ("phi", "solver", "mesh"):
            if not isinstance(data.get(block, {}), dict):
                raise ConfigError(f"{block} must be a JSON object")
        return cls(
            phi=None if "phi" not in data else PhiSpec.from_dict(data["phi"]),
            solver=SolverConfig.from_dict(data.get("solver", {})),
            mesh=MeshConfig.from_dict(data.get("mesh", {})),
            timesteps=timesteps,
            output=str(data.get("output", "out")),
            deform=None if "deform" not in data else DeformConfig.from_dict(data["deform"]),
            sphere=None if "sphere" not in data else SphereConfig.from_dict(data["sphere"]),
        )

    def to_dict(self) -> dict:
        """The validated settings, defaults filled in."""
        data = {
            "phi": None if self.phi is None else self.phi.to_dict(),
            "solver": self.solver.to_dict(),
            "mesh": self.mesh.to_dict(),
            "timesteps": self.timesteps,
            "output": self.output,
        }
        if self.deform is not None:
            data["deform"] = {
                "amplitude": self.deform.amplitude,
                "direction": list(self.deform.direction),
                "end_direction": list(self.deform.end_direction),
                "width": self.deform.width,
            }
        if self.sphere is not None:
            data["sphere"] = {
                "n": self.sphere.params.n,
                "B": self.sphere.params.B,
                "l": self.sphere.params.l,
                "r0": self.sphere.r0,
                "r1": self.sphere.r1,
                "t_end": self.sphere.t_end,
                "dt": self.sphere.dt,
                "sweep": list(self.sphere.sweep),
                "epsilon": self.sphere.epsilon,
            }
        return data


def load_config(path) -> ExperimentConfig:
    """Read and validate a JSON experiment document.

    :raises ConfigError: if the file is unreadable, not JSON, or invalid.
    """
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as error:
        raise ConfigError(f"{path}: cannot read config: {error.strerror}") from error
    except json.JSONDecodeError as error:
        raise ConfigError(f"{path}:{error.lineno}: invalid JSON: {error.msg}") from error
    logger.debug("loaded config %s", path)
    return ExperimentConfig.from_dict(data)


def config_hash(data: dict) -> str:
    """SHA-256 of the canonical JSON form of ``data``."""
    canonical = json.dumps(data, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def thread_count() -> int:
    """Worker threads for parameter sweeps: ``SHAPEGEO_THREADS`` or the CPU count.

    :raises ConfigError: if the variable is set but not a positive integer.
    """
    value = os.environ.get(THREADS_VARIABLE)
    if value is None or value == "":
        return os.cpu_count() or 1
    try:
        count = int(value)
    except ValueError as error:
        raise ConfigError(
            f"{THREADS_VARIABLE} must be a positive integer, got {value!r}"
        ) from error
    if count < 1:
        raise ConfigError(f"{THREADS_VARIABLE} must be a positive integer, got {value!r}")
    return count
