# SPDX-FileCopyrightText: 2026 shapegeo contributors
#
# SPDX-License-Identifier: MIT

"""
`spheres`
================================================================================

Geodesics through round spheres, where the geodesic equation reduces to
an ordinary differential equation in the radius.

For ``Phi = 1 + B det(L)**(2l)`` and concentric spheres in ``R^n``::

    r_tt = -r_t**2 (n-1)/2 (1/r - 2 l B / (r**((n-1) 2l + 1) + B r))

This module integrates that equation (classical fourth-order Runge-Kutta),
solves its two-point boundary value problem by shooting, evaluates the
length of the path that shrinks a sphere to a point, gives the sphere
radius at which a rigid translation is a geodesic, and computes translation
geodesics of sphere meshes at that radius or any other.


* Author(s): shapegeo contributors

Implementation Notes
--------------------

**Software and Dependencies:**

* numpy
* scipy (``optimize.brentq``, ``integrate.quad``, ``interpolate.CubicHermiteSpline``)

"""
import csv
import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy import integrate, interpolate, optimize

from shapegeo.errors import BracketingError, ConfigError, PreconditionError
from shapegeo.mesh import TriMesh, make_icosphere
from shapegeo.path import MeshPath
from shapegeo.phi import PhiSpec
from shapegeo.solver import SolveReport, SolverConfig, center_radius_profile, solve_geodesic_bvp

__version__ = "0.0.0-auto.0"
__repo__ = "https://github.com/shapegeo/shapegeo.git"

logger = logging.getLogger(__name__)

#: Integration stops with status ``"collapsed"`` below this radius.
RADIUS_FLOOR = 1e-9
#: Terminal residual required of :func:`solve_sphere_bvp`.
SHOOTING_TOLERANCE = 1e-8
#: Doublings of the initial-velocity bracket before giving up.
MAX_BRACKET_EXPANSIONS = 60


@dataclass(frozen=True)
class SphereState:
    """A sphere moving along its normal.

    :param r: Radius (length).
    :param r_t: Radial velocity (length/time).
    """

    r: float
    r_t: float


@dataclass(frozen=True)
class SphereOdeParams:
    """Symbols of the reduced equation.

    :param n: Ambient dimension, at least 2.
    :param B: Weight of the Gauss curvature term, ``>= 0``.
    :param l: Half the Gauss curvature exponent, ``>= 1/2``.
    """

    n: int = 3
    B: float = 0.0
    l: float = 1.0

    def __post_init__(self) -> None:
        if int(self.n) != self.n or self.n < 2:
            raise PreconditionError(f"ambient dimension must be an integer >= 2, got {self.n}")
        if not (math.isfinite(self.B) and self.B >= 0):
            raise PreconditionError(f"B must be a non-negative number, got {self.B}")
        if not self.l >= 0.5:
            raise PreconditionError(f"l must be >= 1/2, got {self.l}")

    @classmethod
    def from_dict(cls, data: dict) -> "SphereOdeParams":
        """Build from ``{"n": 3, "B": 1.0, "l": 1.0}``."""
        unknown = set(data) - {"n", "B", "l"}
        if unknown:
            raise ConfigError(f"unknown sphere parameters: {sorted(unknown)}")
        try:
            return cls(
                n=int(data.get("n", 3)), B=float(data.get("B", 0.0)), l=float(data.get("l", 1.0))
            )
        except PreconditionError as error:
            raise ConfigError(str(error)) from error

    @property
    def exponent(self) -> float:
        """``(n-1) 2l``, the power of ``1/r`` in ``det(L)**(2l)``."""
        return (self.n - 1) * 2.0 * self.l

    def phi(self, r: float) -> float:
        """``Phi(det L)`` on a sphere of radius ``r``."""
        return 1.0 + self.B * r ** (-self.exponent)


def _acceleration(params: SphereOdeParams, r: float, r_t: float) -> float:
    half = 0.5 * (params.n - 1)
    return -r_t * r_t * half * (
        1.0 / r - 2.0 * params.l * params.B / (r ** (params.exponent + 1.0) + params.B * r)
    )


def sphere_ode_rhs(params: SphereOdeParams, state: SphereState) -> float:
    """``r_tt`` of the concentric-sphere geodesic equation.

    :raises PreconditionError: if ``r <= 0``.
    """
    if not state.r > 0:
        raise PreconditionError(f"radius must be positive, got {state.r}")
    return _acceleration(params, state.r, state.r_t)


def _sphere_area(n: int, r: float) -> float:
    return 2.0 * math.pi ** (n / 2.0) / math.gamma(n / 2.0) * r ** (n - 1)


def sphere_energy(params: SphereOdeParams, state: SphereState) -> float:
    """``Phi(r) Area(r) r_t**2``, a first integral of the reduced equation."""
    return params.phi(state.r) * _sphere_area(params.n, state.r) * state.r_t**2


@dataclass(frozen=True)
class Trajectory:
    """A sampled solution of the reduced equation.

    :param t: Sample times.
    :param r: Radii.
    :param r_t: Radial velocities.
    :param energy: :func:`sphere_energy` at every sample.
    :param status: ``"ok"``, or ``"collapsed"`` if the radius fell below :data:`RADIUS_FLOOR`.
    :param params: The equation that was integrated.
    """

    t: np.ndarray
    r: np.ndarray
    r_t: np.ndarray
    energy: np.ndarray
    status: str
    params: SphereOdeParams

    @property
    def final(self) -> SphereState:
        """The last sampled state."""
        return SphereState(float(self.r[-1]), float(self.r_t[-1]))

    def resample(self, times) -> np.ndarray:
        """Radii at ``times`` by cubic Hermite interpolation of ``(r, r_t)``."""
        spline = interpolate.CubicHermiteSpline(self.t, self.r, self.r_t)
        return spline(np.asarray(times, dtype=float))

    def to_csv(self, path) -> None:
        """Write ``t, r, r_t, energy`` rows."""
        with open(path, "w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle)
            writer.writerow(["t", "r", "r_t", "energy"])
            for row in zip(self.t, self.r, self.r_t, self.energy):
                writer.writerow([repr(float(x)) for x in row])


def _rk4_step(params: SphereOdeParams, r: float, r_t: float, h: float) -> Optional[Tuple]:
    """One Runge-Kutta step, or ``None`` if a stage radius falls below :data:`RADIUS_FLOOR`."""
    slopes = []
    x, y = r, r_t
    for weight in (0.0, 0.5, 0.5, 1.0):
        if slopes:
            x = r + weight * h * slopes[-1][0]
            y = r_t + weight * h * slopes[-1][1]
        if not x >= RADIUS_FLOOR:
            return None
        slopes.append((y, _acceleration(params, x, y)))
    (a1, b1), (a2, b2), (a3, b3), (a4, b4) = slopes
    return (
        r + h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4),
        r_t + h / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4),
    )


def integrate_sphere_geodesic(
    params: SphereOdeParams, initial: SphereState, t_end: float, dt: float
) -> Trajectory:
    """Classical fourth-order Runge-Kutta integration from ``t = 0`` to ``t_end``.

    The step is shrunk so that a whole number of steps ends exactly at
    ``t_end``. Integration stops early with status ``"collapsed"`` if the
    radius drops below :data:`RADIUS_FLOOR` and ``"overflow"`` if the state
    leaves the floating point range.

    :param params: Equation parameters.
    :param initial: State at ``t = 0``, ``r > 0``.
    :param t_end: Final time, ``> 0``.
    :param dt: Largest step, ``> 0``.
    """
    if not dt > 0 or not t_end > 0:
        raise PreconditionError(f"need dt > 0 and t_end > 0, got dt={dt}, t_end={t_end}")
    if not initial.r > 0:
        raise PreconditionError(f"initial radius must be positive, got {initial.r}")
    steps = max(1, int(math.ceil(t_end / dt - 1e-9)))
    h = t_end / steps
    t = [0.0]
    r = [float(initial.r)]
    v = [float(initial.r_t)]
    status = "ok"
    for i in range(steps):
        try:
            state = _rk4_step(params, r[-1], v[-1], h)
        except OverflowError:
            status = "overflow"
            break
        if state is None or not state[0] >= RADIUS_FLOOR:
            status = "collapsed"
            break
        if not (math.isfinite(state[0]) and math.isfinite(state[1])):
            status = "overflow"
            break
        t.append((i + 1) * h)
        r.append(state[0])
        v.append(state[1])

    if status != "ok":
        logger.debug("integration stopped (%s) after t=%g", status, t[-1])
    energy = [sphere_energy(params, SphereState(a, b)) for a, b in zip(r, v)]
    return Trajectory(
        t=np.array(t), r=np.array(r), r_t=np.array(v), energy=np.array(energy),
        status=status, params=params,
    )  # fmt: skip


def solve_sphere_bvp(
    params: SphereOdeParams,
    r0: float,
    r1: float,
    t_end: float = 1.0,
    dt: float = 1e-3,
) -> Trajectory:
    """The geodesic of concentric spheres from radius ``r0`` to ``r1``.

    Shooting on the initial velocity: the bracket starts at the straight-line
    speed and doubles until the terminal radius changes sign, then
    :func:`scipy.optimize.brentq` finds the root.

    :param params: Equation parameters.
    :param r0: Radius at ``t = 0``.
    :param r1: Radius at ``t = t_end``.
    :param t_end: Duration of the path.
    :param dt: Integration step.
    :raises BracketingError: if no sign change is found, or the residual stays above
        :data:`SHOOTING_TOLERANCE`.
    """
    if not (r0 > 0 and r1 > 0):
        raise PreconditionError(f"radii must be positive, got r0={r0}, r1={r1}")

    def shoot(velocity: float) -> Trajectory:
        return integrate_sphere_geodesic(params, SphereState(r0, velocity), t_end, dt)

    def residual(velocity: float) -> float:
        trajectory = shoot(velocity)
        if trajectory.status == "collapsed":
            return -r1
        if trajectory.status == "overflow":
            return 1.0 / RADIUS_FLOOR
        return float(trajectory.r[-1]) - r1

    if r0 == r1:
        return shoot(0.0)
    guess = (r1 - r0) / t_end
    near, far = 0.0, guess
    for _ in range(MAX_BRACKET_EXPANSIONS):
        if np.sign(residual(far)) != np.sign(residual(near)):
            break
        near, far = far, 2.0 * far
    else:
        raise BracketingError(
            f"no sign change of r({t_end}) - {r1} for initial velocities in [0, {far}]",
            interval=(0.0, far),
        )
    lo, hi = sorted((near, far))
    velocity = optimize.brentq(residual, lo, hi, xtol=1e-14, rtol=1e-15, maxiter=500)
    trajectory = shoot(velocity)
    miss = abs(float(trajectory.r[-1]) - r1)
    if trajectory.status != "ok" or miss >= SHOOTING_TOLERANCE:
        raise BracketingError(
            f"shooting ended {miss:.3e} from r1={r1} (status {trajectory.status})",
            interval=(lo, hi),
        )
    logger.info("sphere BVP %g -> %g: r_t(0)=%.12g, residual %.2e", r0, r1, velocity, miss)
    return trajectory


def trajectory_length(trajectory: Trajectory) -> float:
    """``∫ sqrt(Phi Area) |r_t| dt`` along a sampled trajectory (Simpson's rule)."""
    params = trajectory.params
    speed = np.array(
        [
            math.sqrt(params.phi(r) * _sphere_area(params.n, r)) * abs(v)
            for r, v in zip(trajectory.r, trajectory.r_t)
        ]
    )
    return float(integrate.simpson(speed, x=trajectory.t))


def shrink_path_length(params: SphereOdeParams, epsilon: float) -> float:
    """Length of the path of concentric spheres shrinking from radius 1 to ``epsilon``.

    ``2 sqrt(pi) ∫_epsilon^1 r sqrt(1 + B r**(-4l)) dr``, integrated in
    ``s = ln r`` where the integrand stays bounded as ``epsilon -> 0``.
    It diverges as ``epsilon -> 0`` exactly when ``l >= 1``.

    :param params: ``n`` must be 3.
    :param epsilon: Smallest radius, in ``(0, 1)``.
    """
    if params.n != 3:
        raise PreconditionError(f"shrink path length is defined for n = 3, got n = {params.n}")
    if not 0 < epsilon < 1:
        raise PreconditionError(f"epsilon must lie in (0, 1), got {epsilon}")

    def integrand(s: float) -> float:
        r = math.exp(s)
        return r * r * math.sqrt(1.0 + params.B * math.exp(-4.0 * params.l * s))

    value, error = integrate.quad(
        integrand, math.log(epsilon), 0.0, epsabs=0.0, epsrel=1e-12, limit=200
    )
    logger.debug("shrink length to %g: %.15g (quadrature error %.1e)", epsilon, value, error)
    return 2.0 * math.sqrt(math.pi) * value


def optimal_translation_radius(B: float, l: float) -> float:
    # pylint: disable=invalid-name
    """Radius of the sphere for which a rigid translation is a geodesic.

    For ``Phi = 1 + B det(L)**(2l)`` this is ``(B (2l - 1))**(1/(4l))``.

    :raises PreconditionError: unless ``B > 0`` and ``l >= 1``.
    """
    if not B > 0:
        raise PreconditionError(f"B must be positive, got {B}")
    if not l >= 1:
        raise PreconditionError(f"l must be >= 1 for a translating sphere, got {l}")
    return (B * (2.0 * l - 1.0)) ** (1.0 / (4.0 * l))


def translation_residual(B: float, l: float, r: float) -> float:
    # pylint: disable=invalid-name
    """``Phi(K) - Phi'(K) K`` at ``K = det(L) = 1/r**2``.

    This is the part of the geodesic equation of a translating sphere that
    must vanish. It is negative below :func:`optimal_translation_radius` and
    positive above it.
    """
    if not r > 0:
        raise PreconditionError(f"radius must be positive, got {r}")
    return 1.0 - (2.0 * l - 1.0) * B * r ** (-4.0 * l)


def sphere_reduced_acceleration(spec: PhiSpec, state: SphereState, n: int = 3) -> float:
    """``a_t`` from the general geodesic equation on a sphere with constant normal speed ``a``.

    All derivatives along the sphere vanish, leaving
    ``a_t = a**2 / 2 (Tr L - d_H Phi / Phi Tr(L**2) - d_K Phi / Phi Tr(L) det(L))``
    with ``Tr L = -(n-1)/r``, ``Tr(L**2) = (n-1)/r**2`` and ``det L = (-1/r)**(n-1)``.
    """
    if not state.r > 0:
        raise PreconditionError(f"radius must be positive, got {state.r}")
    r = state.r
    trace = -(n - 1) / r
    trace_sq = (n - 1) / r**2
    det = (-1.0 / r) ** (n - 1)
    phi = float(spec.value(trace, det))
    d_mean = float(spec.d_mean(trace))
    d_gauss = float(spec.d_gauss(det))
    return 0.5 * state.r_t**2 * (trace - d_mean / phi * trace_sq - d_gauss / phi * trace * det)


@dataclass(frozen=True)
class ReductionReport:
    """The general equation and the reduced ODE evaluated at one state."""

    state: SphereState
    general: float
    reduced: float

    @property
    def difference(self) -> float:
        """``|general - reduced|``."""
        return abs(self.general - self.reduced)


def sphere_reduction_consistency(spec: PhiSpec, state: SphereState) -> ReductionReport:
    """Evaluate both sides of the sphere reduction for a Gauss-weighted ``Phi``.

    :param spec: A weight with no mean curvature term.
    :param state: Sphere radius and constant normal speed, in ``R^3``.
    """
    if spec.mean_weight != 0.0:
        raise PreconditionError("the reduced ODE covers Phi(det L) only; set A = 0")
    params = SphereOdeParams(n=3, B=spec.gauss_weight, l=spec.l)
    return ReductionReport(
        state=state,
        general=sphere_reduced_acceleration(spec, state, n=3),
        reduced=sphere_ode_rhs(params, state),
    )


def adapted_mean_curvature_spec(B: float, l: float, n: int = 3) -> PhiSpec:
    # pylint: disable=invalid-name
    """The mean-curvature weight that agrees with ``1 + B det(L)**(2l)`` on spheres.

    On a sphere ``det(L) = (Tr(L)/(n-1))**(n-1)``, so ``2k = (n-1) 2l`` and
    ``A = B / (n-1)**(2k)``.
    """
    k = (n - 1) * l
    if int(k) != k:
        raise PreconditionError(f"(n-1) l = {k} is not an integer exponent")
    k = int(k)
    return PhiSpec(A=B / float(n - 1) ** (2 * k), k=k, B=0.0)


def lift_trajectory(
    sphere: TriMesh, trajectory: Trajectory, timesteps: int, center: Sequence[float] = (0, 0, 0)
) -> MeshPath:
    """Concentric sphere meshes following ``trajectory`` at ``timesteps + 1`` equal times."""
    times = np.linspace(trajectory.t[0], trajectory.t[-1], timesteps + 1)
    return MeshPath.from_radii(sphere, center, trajectory.resample(times))


def lift_translation(sphere: TriMesh, displacement: Sequence[float], timesteps: int) -> MeshPath:
    """Constant-speed rigid translation of ``sphere`` by ``displacement``."""
    fractions = np.linspace(0.0, 1.0, timesteps + 1)
    return MeshPath.translation(sphere, fractions[:, None] * np.asarray(displacement, dtype=float))


@dataclass(frozen=True)
class TranslationReport:
    """How a computed translation geodesic differs from a rigid translation.

    :param optimal_radius: Radius at which the rigid translation is a geodesic.
    :param radius: Radius of the start and end spheres.
    :param radius_profile: Mean vertex distance to the centroid, per timestep.
    :param axis_ratio: Extent along the translation over the largest extent
        across it, per timestep; below one the shape is shorter along the motion.
    :param deviation: Largest vertex distance from the rigid translation, in radii.
    :param solve: The optimiser report.
    """

    optimal_radius: float
    radius: float
    radius_profile: np.ndarray
    axis_ratio: np.ndarray
    deviation: float
    solve: SolveReport

    @property
    def middle_radius(self) -> float:
        """Mean radius at the middle timestep."""
        return float(self.radius_profile[len(self.radius_profile) // 2])

    @property
    def toward_optimum(self) -> bool:
        """``True`` if the middle of the path is closer to the optimal radius than its ends."""
        middle = abs(self.middle_radius - self.optimal_radius)
        return middle < abs(self.radius - self.optimal_radius)

    def to_dict(self) -> dict:
        """JSON-ready summary."""
        return {
            "optimal_radius": self.optimal_radius,
            "radius": self.radius,
            "middle_radius": self.middle_radius,
            "toward_optimum": self.toward_optimum,
            "min_axis_ratio": float(np.min(self.axis_ratio)),
            "deviation": self.deviation,
            "radius_profile": [float(r) for r in self.radius_profile],
            "axis_ratio": [float(a) for a in self.axis_ratio],
            "status": self.solve.status.value,
        }


def _axis_ratio(positions: np.ndarray, direction: np.ndarray) -> np.ndarray:
    offsets = positions - positions.mean(axis=1, keepdims=True)
    along = offsets @ direction
    across = np.linalg.norm(offsets - along[..., None] * direction, axis=2)
    return np.ptp(along, axis=1) / (2.0 * np.max(across, axis=1))


def translate_sphere(
    B: float,
    l: float,
    distance: float,
    timesteps: int,
    radius: Optional[float] = None,
    level: int = 2,
    config: Optional[SolverConfig] = None,
    direction: Sequence[float] = (1.0, 0.0, 0.0),
) -> Tuple[MeshPath, TranslationReport]:
    # pylint: disable=too-many-arguments,invalid-name
    """Geodesic between a sphere and its translate, for ``Phi = 1 + B det(L)**(2l)``.

    The optimisation starts from the rigid translation. At the optimal radius it
    stays close to it; at other radii the sphere is scaled towards the optimal
    radius on the way, and when that takes more scaling than the time allows
    it flattens along the direction of motion.

    :param B: Gauss curvature weight.
    :param l: Half the Gauss curvature exponent, ``>= 1``.
    :param distance: Length of the translation in units of ``radius``.
    :param timesteps: Number of intervals ``N``.
    :param radius: Sphere radius; the optimal radius by default.
    :param level: Icosphere subdivision level.
    :param config: Optimiser settings.
    :param direction: Direction of the translation.
    :raises PreconditionError: unless ``B > 0``, ``l >= 1``, ``radius > 0`` and
        ``direction`` is nonzero.
    """
    optimum = optimal_translation_radius(B, l)
    radius = optimum if radius is None else float(radius)
    if not radius > 0:
        raise PreconditionError(f"radius must be positive, got {radius}")
    unit = np.asarray(direction, dtype=float)
    if not np.linalg.norm(unit) > 0:
        raise PreconditionError("translation direction must be nonzero")
    unit = unit / np.linalg.norm(unit)
    sphere = make_icosphere(level, radius)
    displacement = distance * radius * unit
    rigid = lift_translation(sphere, displacement, timesteps)
    path, solve = solve_geodesic_bvp(
        PhiSpec(B=B, l=l), sphere, sphere.translated(displacement), timesteps, config, rigid
    )
    profile = center_radius_profile(path)
    deviation = float(np.max(np.linalg.norm(path.positions - rigid.positions, axis=2))) / radius
    report = TranslationReport(
        optimal_radius=optimum,
        radius=radius,
        radius_profile=profile.radius_mean,
        axis_ratio=_axis_ratio(path.positions, unit),
        deviation=deviation,
        solve=solve,
    )
    logger.info(
        "translation r=%g (optimal %g): middle radius %g, deviation %.3e, min axis ratio %.3f",
        radius,
        optimum,
        report.middle_radius,
        deviation,
        float(np.min(report.axis_ratio)),
    )
    return path, report


def sweep_parameters(values: Sequence[float] = (0.1, 1.0, 10.0, 100.0), l: float = 1.0) -> Tuple:
    # pylint: disable=invalid-name
    """The ``B`` values of the concentric-sphere comparison."""
    return tuple(SphereOdeParams(n=3, B=float(b), l=l) for b in values)
