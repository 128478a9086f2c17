# SPDX-FileCopyrightText: 2026 shapegeo contributors
#
# SPDX-License-Identifier: MIT

"""
`solver`
================================================================================

Geodesic boundary value problems between two shapes: minimise the total path
energy of :mod:`shapegeo.energy` over the interior timesteps of a
:class:`~shapegeo.path.MeshPath` whose endpoints stay fixed.

The endpoints are not variables, so the problem is unconstrained and is
solved with limited-memory BFGS and a backtracking Armijo line search.
Trial steps that produce a triangle below the area floor are rejected by
the line search like any other failed step.


* Author(s): shapegeo contributors

Implementation Notes
--------------------

**Software and Dependencies:**

* numpy

"""
import csv
import logging
import math
import time
from collections import deque
from dataclasses import asdict, dataclass, field, fields
from enum import Enum
from typing import Deque, List, Optional, Sequence, Tuple

import numpy as np

from shapegeo.curvature import compute_curvature
from shapegeo.energy import EnergyBreakdown, energy_breakdown, total_energy_and_gradient
from shapegeo.errors import (
    CombinatoricsMismatchError,
    ConfigError,
    DegenerateMeshError,
    PreconditionError,
)
from shapegeo.mesh import TriMesh
from shapegeo.path import MeshPath
from shapegeo.phi import PhiSpec

__version__ = "0.0.0-auto.0"
__repo__ = "https://github.com/shapegeo/shapegeo.git"

logger = logging.getLogger(__name__)

INITIALIZATIONS = ("linear", "perturbed", "custom")


class SolveStatus(str, Enum):
    """Why the optimiser stopped."""

    CONVERGED = "converged"
    MAX_ITER = "max_iter"
    LINE_SEARCH_FAILURE = "line_search_failure"
    DEGENERATE_MESH = "degenerate_mesh"

    @classmethod
    def worst(cls, statuses: Sequence["SolveStatus"]) -> "SolveStatus":
        """The most severe of ``statuses``, in declaration order; converged if empty."""
        order = list(cls)
        return max(statuses, key=order.index, default=cls.CONVERGED)


@dataclass(frozen=True)
class SolverConfig:
    # pylint: disable=too-many-instance-attributes
    """Optimiser settings. The defaults are conventions, not tuned values.

    :param max_iterations: Iteration cap per penalty stage.
    :param gradient_tolerance: Stop when ``max |grad| < tol``.
    :param relative_tolerance: Scale ``gradient_tolerance`` by the initial ``max |grad|``.
    :param memory: Number of stored quasi-Newton pairs.
    :param penalty_weight: ``lambda`` of the tangential-velocity penalty.
    :param lambda_schedule: Penalty weights solved in turn, each warm-started
        from the previous result. Empty means ``(penalty_weight,)``.
    :param armijo_c1: Sufficient-decrease constant.
    :param shrink: Step reduction factor of the backtracking search.
    :param max_line_search: Trial steps before the line search gives up.
    :param initial_step: Length of the first step relative to the shape size.
    :param initialization: ``"linear"``, ``"perturbed"`` or ``"custom"``.
    :param perturbation_amplitude: Bound of the random normal offsets of ``"perturbed"``.
    :param seed: Seed of the ``"perturbed"`` initialisation.
    """

    max_iterations: int = 500
    gradient_tolerance: float = 1e-6
    relative_tolerance: bool = True
    memory: int = 10
    penalty_weight: float = 1.0
    lambda_schedule: Tuple[float, ...] = ()
    armijo_c1: float = 1e-4
    shrink: float = 0.5
    max_line_search: int = 40
    initial_step: float = 1e-2
    initialization: str = "linear"
    perturbation_amplitude: float = 0.05
    seed: int = 0

    def __post_init__(self) -> None:
        if self.max_iterations < 0:
            raise ConfigError(f"max_iterations must be >= 0, got {self.max_iterations}")
        if not self.gradient_tolerance > 0:
            raise ConfigError(f"gradient_tolerance must be positive, got {self.gradient_tolerance}")
        if self.memory < 1:
            raise ConfigError(f"memory must be >= 1, got {self.memory}")
        if any(w < 0 for w in (self.penalty_weight,) + tuple(self.lambda_schedule)):
            raise ConfigError("penalty weights must be >= 0")
        if not 0 < self.armijo_c1 < 1:
            raise ConfigError(f"armijo_c1 must lie in (0, 1), got {self.armijo_c1}")
        if not 0 < self.shrink < 1:
            raise ConfigError(f"shrink must lie in (0, 1), got {self.shrink}")
        if self.max_line_search < 1 or not self.initial_step > 0:
            raise ConfigError("max_line_search and initial_step must be positive")
        if self.initialization not in INITIALIZATIONS:
            raise ConfigError(
                f"initialization must be one of {INITIALIZATIONS}, got {self.initialization!r}"
            )
        if self.perturbation_amplitude < 0:
            raise ConfigError("perturbation_amplitude must be >= 0")

    @classmethod
    def from_dict(cls, data: dict) -> "SolverConfig":
        """Build from a JSON object; unknown keys raise :class:`ConfigError`."""
        known = {f.name for f in fields(cls)} | {"lambda"}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown solver keys: {sorted(unknown)}")
        values = dict(data)
        try:
            if "lambda" in values:
                values["penalty_weight"] = float(values.pop("lambda"))
            if "lambda_schedule" in values:
                values["lambda_schedule"] = tuple(float(w) for w in values["lambda_schedule"])
            return cls(**values)
        except (TypeError, ValueError) as error:
            if isinstance(error, ConfigError):
                raise
            raise ConfigError(f"bad solver value: {error}") from error

    def to_dict(self) -> dict:
        """JSON-ready settings."""
        data = asdict(self)
        data["lambda_schedule"] = list(self.stages)
        return data

    @property
    def stages(self) -> Tuple[float, ...]:
        """The penalty weights in solve order."""
        return tuple(self.lambda_schedule) or (self.penalty_weight,)


@dataclass(frozen=True)
class SolveReport:
    # pylint: disable=too-many-instance-attributes
    """Outcome of :func:`solve_geodesic_bvp`.

    ``energy_history`` holds the total energy after every accepted step and
    ``lambda_history`` the penalty weight it was measured with. ``status`` is the
    worst of ``stage_statuses``, one per penalty stage that ran.
    """

    iterations: int
    initial: EnergyBreakdown
    final: EnergyBreakdown
    gradient_norms: Tuple[float, ...]
    energy_history: Tuple[float, ...]
    lambda_history: Tuple[float, ...]
    wall_time: float
    status: SolveStatus
    config: SolverConfig
    message: str = ""
    stage_statuses: Tuple[SolveStatus, ...] = ()

    @property
    def converged(self) -> bool:
        """``True`` if the gradient tolerance was reached."""
        return self.status is SolveStatus.CONVERGED

    def to_dict(self) -> dict:
        """JSON-ready report, including the solver settings used."""
        return {
            "status": self.status.value,
            "stage_statuses": [s.value for s in self.stage_statuses],
            "message": self.message,
            "iterations": self.iterations,
            "wall_time": self.wall_time,
            "initial": self.initial.to_dict(),
            "final": self.final.to_dict(),
            "gradient_norms": list(self.gradient_norms),
            "energy_history": list(self.energy_history),
            "lambda_history": list(self.lambda_history),
            "config": self.config.to_dict(),
        }


@dataclass
class _Stage:
    iterations: int = 0
    status: SolveStatus = SolveStatus.MAX_ITER
    message: str = ""
    gradient_norms: List[float] = field(default_factory=list)
    energies: List[float] = field(default_factory=list)


def _shape_size(mesh: TriMesh) -> float:
    offsets = mesh.vertices - mesh.vertices.mean(axis=0)
    return float(np.sqrt(np.mean(np.sum(offsets**2, axis=1))))


def _perturbed(path: MeshPath, amplitude: float, seed: int) -> MeshPath:
    """Move every interior vertex along its normal by a bounded random offset."""
    rng = np.random.default_rng(seed)
    interior = path.interior()
    for i in range(interior.shape[0]):
        normals = compute_curvature(path.mesh(i + 1)).unit_normal
        offsets = amplitude * rng.uniform(-1.0, 1.0, size=interior.shape[1])
        interior[i] += offsets[:, None] * normals
    return path.with_interior(interior)


def initial_path(
    start: TriMesh,
    end: TriMesh,
    timesteps: int,
    config: SolverConfig,
    custom: Optional[MeshPath] = None,
) -> MeshPath:
    """The starting point of the optimisation.

    :param start: Shape at ``t = 0``.
    :param end: Shape at ``t = 1``.
    :param timesteps: Number of intervals ``N``.
    :param config: Chooses linear, perturbed or custom initialisation.
    :param custom: Interior guess, required for ``"custom"``; its endpoints are ignored.
    """
    path = MeshPath.linear(start, end, timesteps)
    if custom is not None:
        if custom.positions.shape != path.positions.shape:
            raise CombinatoricsMismatchError(
                f"initial path of shape {custom.positions.shape} does not match "
                f"{path.positions.shape}"
            )
        return path.with_interior(custom.interior())
    if config.initialization == "custom":
        raise PreconditionError("custom initialization needs an initial path")
    if config.initialization == "perturbed":
        return _perturbed(path, config.perturbation_amplitude, config.seed)
    return path


def _two_loop(grad: np.ndarray, history: Deque[Tuple[np.ndarray, np.ndarray, float]]):
    """L-BFGS search direction ``-H grad``."""
    q = grad.copy()
    alphas = []
    for s, y, rho in reversed(history):
        alpha = rho * float(s @ q)
        alphas.append(alpha)
        q -= alpha * y
    s, y, _ = history[-1]
    q *= float(s @ y) / float(y @ y)
    for (s, y, rho), alpha in zip(history, reversed(alphas)):
        beta = rho * float(y @ q)
        q += (alpha - beta) * s
    return -q


# pylint: disable=too-many-locals,too-many-branches,too-many-statements
def _minimize(
    spec: PhiSpec,
    path: MeshPath,
    weight: float,
    config: SolverConfig,
    scale: float,
) -> Tuple[MeshPath, EnergyBreakdown, _Stage]:
    stage = _Stage()
    breakdown, grad = total_energy_and_gradient(spec, path, weight)
    x = path.interior().reshape(-1)
    g = grad.reshape(-1)
    gnorm = float(np.max(np.abs(g))) if g.size else 0.0
    tol = config.gradient_tolerance * (gnorm if config.relative_tolerance else 1.0)
    stage.gradient_norms.append(gnorm)
    history: Deque[Tuple[np.ndarray, np.ndarray, float]] = deque(maxlen=config.memory)

    while True:
        if gnorm == 0.0 or gnorm < tol:
            stage.status = SolveStatus.CONVERGED
            break
        if stage.iterations >= config.max_iterations:
            stage.status = SolveStatus.MAX_ITER
            break
        if history:
            direction = _two_loop(g, history)
            step = 1.0
        else:
            direction = -g
            step = config.initial_step * scale / gnorm
        slope = float(g @ direction)
        if not slope < 0:
            history.clear()
            direction = -g
            step = config.initial_step * scale / gnorm
            slope = float(g @ direction)

        accepted = None
        degenerate = None
        for _ in range(config.max_line_search):
            trial = x + step * direction
            try:
                candidate = path.with_interior(trial)
                trial_breakdown, trial_grad = total_energy_and_gradient(spec, candidate, weight)
            except DegenerateMeshError as error:
                degenerate = error
                step *= config.shrink
                continue
            if (
                math.isfinite(trial_breakdown.total)
                and trial_breakdown.total
                <= breakdown.total + config.armijo_c1 * step * slope
            ):
                accepted = (candidate, trial_breakdown, trial_grad.reshape(-1), trial)
                break
            degenerate = None
            step *= config.shrink
        if accepted is None:
            if degenerate is not None:
                stage.status = SolveStatus.DEGENERATE_MESH
                stage.message = f"iteration {stage.iterations}: {degenerate}"
            else:
                stage.status = SolveStatus.LINE_SEARCH_FAILURE
                stage.message = (
                    f"iteration {stage.iterations}: no sufficient decrease after "
                    f"{config.max_line_search} trial steps"
                )
            logger.warning("line search failed: %s", stage.message)
            break

        path, breakdown, g_new, x_new = accepted
        s_vec = x_new - x
        y_vec = g_new - g
        sy = float(s_vec @ y_vec)
        if sy > 1e-12 * float(np.linalg.norm(s_vec) * np.linalg.norm(y_vec)):
            history.append((s_vec, y_vec, 1.0 / sy))
        x, g = x_new, g_new
        gnorm = float(np.max(np.abs(g)))
        stage.iterations += 1
        stage.gradient_norms.append(gnorm)
        stage.energies.append(breakdown.total)
        logger.debug(
            "iteration %d: energy %.12g |grad| %.3e step %.3e",
            stage.iterations,
            breakdown.total,
            gnorm,
            step,
        )
    return path, breakdown, stage


def solve_geodesic_bvp(
    spec: PhiSpec,
    start: TriMesh,
    end: TriMesh,
    timesteps: int,
    config: Optional[SolverConfig] = None,
    initial: Optional[MeshPath] = None,
) -> Tuple[MeshPath, SolveReport]:
    """Minimise the total path energy between two shapes.

    :param spec: Weight function of the metric.
    :param start: Shape at ``t = 0``.
    :param end: Shape at ``t = 1``; must share the combinatorics of ``start``.
    :param timesteps: Number of intervals ``N >= 2``.
    :param config: Optimiser settings, defaults to :class:`SolverConfig`.
    :param initial: Optional interior guess (``"custom"`` initialisation).
    :return: The optimised path and a :class:`SolveReport`.
    :raises CombinatoricsMismatchError: if ``start`` and ``end`` differ combinatorially.
    :raises DegenerateMeshError: if the initial path already has a degenerate triangle.
    """
    config = config or SolverConfig()
    if not start.same_combinatorics(end):
        raise CombinatoricsMismatchError(
            f"start (V={start.n_vertices}, F={start.n_faces}) and end "
            f"(V={end.n_vertices}, F={end.n_faces}) do not share combinatorics"
        )
    if timesteps < 2:
        raise PreconditionError(f"need at least 2 timesteps, got {timesteps}")
    began = time.perf_counter()
    path = initial_path(start, end, timesteps, config, initial)
    scale = max(_shape_size(start), _shape_size(end))
    stages = config.stages
    logger.info(
        "solving BVP: V=%d F=%d N=%d lambda=%s init=%s",
        start.n_vertices,
        start.n_faces,
        timesteps,
        list(stages),
        config.initialization if initial is None else "custom",
    )

    initial_breakdown = energy_breakdown(spec, path, stages[0])
    breakdown = initial_breakdown
    iterations = 0
    gradient_norms: List[float] = []
    energies: List[float] = []
    lambdas: List[float] = []
    statuses: List[SolveStatus] = []
    messages: List[str] = []
    for weight in stages:
        path, breakdown, stage = _minimize(spec, path, weight, config, scale)
        iterations += stage.iterations
        gradient_norms.extend(stage.gradient_norms)
        energies.extend(stage.energies)
        lambdas.extend([weight] * len(stage.energies))
        statuses.append(stage.status)
        if stage.status is not SolveStatus.CONVERGED:
            messages.append(f"lambda={weight:g}: {stage.message or stage.status.value}")
        if stage.status in (SolveStatus.DEGENERATE_MESH, SolveStatus.LINE_SEARCH_FAILURE):
            break
    status = SolveStatus.worst(statuses)

    report = SolveReport(
        iterations=iterations,
        initial=initial_breakdown,
        final=breakdown,
        gradient_norms=tuple(gradient_norms),
        energy_history=tuple(energies),
        lambda_history=tuple(lambdas),
        wall_time=time.perf_counter() - began,
        status=status,
        config=config,
        message="; ".join(messages),
        stage_statuses=tuple(statuses),
    )
    logger.info(
        "BVP %s after %d iterations: energy %.10g (horizontal %.10g) in %.2fs",
        status.value,
        iterations,
        breakdown.total,
        breakdown.horizontal_energy,
        report.wall_time,
    )
    return path, report


@dataclass(frozen=True)
class RadiusProfile:
    """Per-timestep centroid and vertex-distance statistics of a path.

    :param times: Sample times.
    :param centers: ``(T, 3)`` vertex centroids.
    :param radius_mean: Mean vertex distance to the centroid.
    :param radius_std: Standard deviation of that distance.
    """

    times: np.ndarray
    centers: np.ndarray
    radius_mean: np.ndarray
    radius_std: np.ndarray

    @property
    def sphericity(self) -> float:
        """Largest ``radius_std / radius_mean`` over the path."""
        return float(np.max(self.radius_std / self.radius_mean))

    @property
    def center_drift(self) -> float:
        """Largest distance of a centroid from the first one."""
        return float(np.max(np.linalg.norm(self.centers - self.centers[0], axis=1)))

    def rows(self):
        """``(t, cx, cy, cz, radius_mean, radius_std)`` per timestep."""
        for t, c, r, s in zip(self.times, self.centers, self.radius_mean, self.radius_std):
            yield (float(t), *(float(x) for x in c), float(r), float(s))


def center_radius_profile(path: MeshPath) -> RadiusProfile:
    """Centroid, mean radius and radius spread of every timestep."""
    positions = path.positions
    centers = positions.mean(axis=1)
    distances = np.linalg.norm(positions - centers[:, None, :], axis=2)
    return RadiusProfile(
        times=path.times,
        centers=centers,
        radius_mean=distances.mean(axis=1),
        radius_std=distances.std(axis=1),
    )


def radius_profile_to_csv(profile: RadiusProfile, path) -> None:
    """Write ``t, cx, cy, cz, radius_mean, radius_std`` rows."""
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["t", "cx", "cy", "cz", "radius_mean", "radius_std"])
        for row in profile.rows():
            writer.writerow([repr(x) for x in row])
