# SPDX-FileCopyrightText: 2026 shapegeo contributors
#
# SPDX-License-Identifier: MIT

"""
`energy`
================================================================================

Discrete horizontal path energy, the parametrisation penalty, and their
gradient with respect to every vertex position of a :class:`~shapegeo.path.MeshPath`.

On interval ``i`` the geometry (``Phi``, vertex areas, normals) is taken from
the midpoint mesh ``(x_i + x_{i+1}) / 2`` and the velocity is the forward
difference ``v_i = (x_{i+1} - x_i) / dt``:

* horizontal energy ``dt * sum Phi (v . ν)² area``
* penalty ``dt * sum |v - (v . ν) ν|² area``
* total ``horizontal + lambda * penalty``

The gradient is reverse-mode differentiation written out by hand through
the cotangents, corner angles, vector areas and normals of
:mod:`shapegeo.curvature`.


* Author(s): shapegeo contributors

Implementation Notes
--------------------

**Software and Dependencies:**

* numpy

"""
import csv
import json
import logging
import math
from dataclasses import asdict, dataclass
from typing import Tuple

import numpy as np

from shapegeo.curvature import (
    NEXT,
    PREV,
    CornerGeometry,
    VertexGeometry,
    check_corner_geometry,
    corner_geometry,
    vertex_geometry,
)
from shapegeo.errors import PreconditionError
from shapegeo.path import MeshPath
from shapegeo.phi import PhiSpec

__version__ = "0.0.0-auto.0"
__repo__ = "https://github.com/shapegeo/shapegeo.git"

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EnergyBreakdown:
    """Energy of a path split into its parts.

    :param horizontal_energy: ``E_hor``.
    :param penalty_energy: Tangential-velocity penalty (unweighted).
    :param penalty_weight: ``lambda``.
    :param total: ``horizontal + lambda * penalty``.
    :param horizontal_per_interval: Contribution of every interval to ``E_hor``.
    :param penalty_per_interval: Contribution of every interval to the penalty.
    """

    horizontal_energy: float
    penalty_energy: float
    penalty_weight: float
    total: float
    horizontal_per_interval: tuple
    penalty_per_interval: tuple

    def to_dict(self) -> dict:
        """JSON-ready fields."""
        return asdict(self)

    def to_json(self) -> str:
        """Serialise as a JSON object."""
        return json.dumps(self.to_dict(), indent=2)

    def write_csv(self, path, midpoint_times) -> None:
        """Write ``t, horizontal, penalty`` per interval for plotting."""
        with open(path, "w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle)
            writer.writerow(["t", "horizontal", "penalty"])
            for t, hor, pen in zip(
                midpoint_times, self.horizontal_per_interval, self.penalty_per_interval
            ):
                writer.writerow([repr(float(t)), repr(hor), repr(pen)])


@dataclass(frozen=True)
class _Forward:
    # pylint: disable=too-many-instance-attributes
    corners: CornerGeometry
    vertex: VertexGeometry
    velocity: np.ndarray
    normal_speed: np.ndarray
    speed_sq: np.ndarray
    phi: np.ndarray
    horizontal_density: np.ndarray
    penalty_density: np.ndarray


def _forward(spec: PhiSpec, path: MeshPath) -> _Forward:
    topology = path.topology
    corners = corner_geometry(topology, path.midpoints())
    check_corner_geometry(corners, path.area_floor)
    vertex = vertex_geometry(topology, corners)
    velocity = path.velocities()
    normal_speed = np.einsum("tvd,tvd->tv", velocity, vertex.unit_normal)
    speed_sq = np.einsum("tvd,tvd->tv", velocity, velocity)
    phi = spec.value_from_mean_sq(vertex.mean_curvature_sq, vertex.gauss_curvature)
    tangential = velocity - normal_speed[..., None] * vertex.unit_normal
    area = vertex.vertex_area
    return _Forward(
        corners=corners,
        vertex=vertex,
        velocity=velocity,
        normal_speed=normal_speed,
        speed_sq=speed_sq,
        phi=phi,
        horizontal_density=phi * normal_speed**2 * area,
        penalty_density=np.einsum("tvd,tvd->tv", tangential, tangential) * area,
    )


def _breakdown(forward: _Forward, dt: float, weight: float) -> EnergyBreakdown:
    horizontal = tuple(dt * math.fsum(row) for row in forward.horizontal_density)
    penalty = tuple(dt * math.fsum(row) for row in forward.penalty_density)
    e_hor = math.fsum(horizontal)
    e_pen = math.fsum(penalty)
    return EnergyBreakdown(
        horizontal_energy=e_hor,
        penalty_energy=e_pen,
        penalty_weight=float(weight),
        total=e_hor + weight * e_pen,
        horizontal_per_interval=horizontal,
        penalty_per_interval=penalty,
    )


def horizontal_energy(spec: PhiSpec, path: MeshPath) -> float:
    """``E_hor = sum_i dt sum_p Phi_i(p) (v_i . ν_i)² area_i(p)``.

    :raises DegenerateMeshError: naming the interval whose midpoint mesh is degenerate.
    """
    return _breakdown(_forward(spec, path), path.dt, 0.0).horizontal_energy


def penalty_energy(path: MeshPath) -> float:
    """``sum_i dt sum_p |tangential part of v_i(p)|² area_i(p)``; zero on horizontal paths."""
    return _breakdown(_forward(PhiSpec(), path), path.dt, 1.0).penalty_energy


def energy_breakdown(spec: PhiSpec, path: MeshPath, penalty_weight: float = 1.0) -> EnergyBreakdown:
    """All energy terms without the gradient."""
    if penalty_weight < 0:
        raise PreconditionError(f"penalty weight must be >= 0, got {penalty_weight}")
    return _breakdown(_forward(spec, path), path.dt, penalty_weight)


def _corner_gather(topology, values: np.ndarray) -> np.ndarray:
    """Per-vertex ``(T, V, ...)`` values looked up at every corner, ``(T, F, 3, ...)``."""
    return values[:, topology.faces]


# pylint: disable=too-many-locals
def _backward(spec: PhiSpec, path: MeshPath, fwd: _Forward, weight: float) -> np.ndarray:
    """Gradient of ``E_hor + weight * penalty`` with respect to all positions."""
    topology = path.topology
    dt = path.dt
    vg = fwd.vertex
    cg = fwd.corners
    area = vg.vertex_area
    n = vg.unit_normal
    u = fwd.normal_speed
    w = fwd.velocity
    phi = fwd.phi

    # energy density dt * a * [phi u² + weight (|w|² - u²)]
    g_w = (dt * area)[..., None] * (
        2.0 * (phi - weight)[..., None] * u[..., None] * n + 2.0 * weight * w
    )
    g_n = (dt * area * 2.0 * (phi - weight) * u)[..., None] * w
    g_area = dt * (phi * u**2 + weight * (fwd.speed_sq - u**2))
    g_phi = dt * area * u**2

    g_mean_sq = g_phi * spec.d_mean_sq(vg.mean_curvature_sq)
    g_gauss = g_phi * spec.d_gauss(vg.gauss_curvature)

    # det(L) = deflection / area
    g_deflection = g_gauss / area
    g_area = g_area - g_gauss * vg.gauss_curvature / area

    # Tr(L)² = |Hv|² / |VA|² and ν = VA / |VA|
    va = vg.vector_area
    va_norm_sq = vg.vector_area_norm**2
    g_hv = (2.0 * g_mean_sq / va_norm_sq)[..., None] * vg.vector_mean_curvature
    g_va = (-2.0 * g_mean_sq * vg.mean_curvature_sq / va_norm_sq)[..., None] * va
    g_n_tangential = g_n - np.einsum("tvd,tvd->tv", g_n, n)[..., None] * n
    g_va = g_va + g_n_tangential / vg.vector_area_norm[..., None]

    # down to corners
    g_corner_area = _corner_gather(topology, g_area)
    g_face_normal = _corner_gather(topology, g_va).sum(axis=2) / 6.0
    g_angle = -_corner_gather(topology, g_deflection)
    g_hv_corner = _corner_gather(topology, g_hv)

    g_p = np.zeros_like(cg.corners)
    g_u = np.zeros_like(cg.u)
    g_w_edge = np.zeros_like(cg.w)
    s = cg.twice_area[..., None]
    c = cg.dot
    r_sq = s**2 + c**2

    # mixed areas: obtuse faces split |N| / 2 as 1/2, 1/4, 1/4
    obtuse_corner = c < 0.0
    obtuse = obtuse_corner.any(axis=2)
    split = np.where(obtuse_corner, 0.25, 0.125)
    g_twice_area = np.where(obtuse, np.sum(g_corner_area * split, axis=2), 0.0)

    # elsewhere the edge opposite corner i gives cot_i |e_i|² / 8 to NEXT and PREV
    g_cot = np.zeros_like(c)
    for i in range(3):
        edge = cg.w[:, :, i] - cg.u[:, :, i]
        g_term = np.where(
            obtuse, 0.0, g_corner_area[:, :, NEXT[i]] + g_corner_area[:, :, PREV[i]]
        )
        g_cot[:, :, i] += g_term * np.einsum("tfd,tfd->tf", edge, edge) / 8.0
        g_edge = (g_term * cg.cot[:, :, i] / 4.0)[..., None] * edge
        g_p[:, :, PREV[i]] += g_edge
        g_p[:, :, NEXT[i]] -= g_edge

    # corner i adds (1/2) cot_i (p_PREV - p_NEXT) to PREV and its negative to NEXT
    for i in range(3):
        edge = cg.w[:, :, i] - cg.u[:, :, i]
        d = g_hv_corner[:, :, PREV[i]] - g_hv_corner[:, :, NEXT[i]]
        g_cot[:, :, i] += 0.5 * np.einsum("tfd,tfd->tf", d, edge)
        g_edge = 0.5 * cg.cot[:, :, i][..., None] * d
        g_p[:, :, PREV[i]] += g_edge
        g_p[:, :, NEXT[i]] -= g_edge

    # cot = c / s, angle = atan2(s, c)
    g_dot = g_cot / s - g_angle * s / r_sq
    g_twice_area = g_twice_area + np.sum(-g_cot * c / s**2 + g_angle * c / r_sq, axis=2)
    g_u += g_dot[..., None] * cg.w
    g_w_edge += g_dot[..., None] * cg.u

    # |N| and N = u_0 x w_0
    g_face_normal = g_face_normal + (g_twice_area / cg.twice_area)[..., None] * cg.normal
    g_u[:, :, 0] += np.cross(cg.w[:, :, 0], g_face_normal)
    g_w_edge[:, :, 0] += np.cross(g_face_normal, cg.u[:, :, 0])

    for i in range(3):
        g_p[:, :, NEXT[i]] += g_u[:, :, i]
        g_p[:, :, PREV[i]] += g_w_edge[:, :, i]
        g_p[:, :, i] -= g_u[:, :, i] + g_w_edge[:, :, i]

    g_mid = topology.scatter(g_p, 1)
    grad = np.zeros_like(path.positions)
    grad[:-1] += 0.5 * g_mid - g_w / dt
    grad[1:] += 0.5 * g_mid + g_w / dt
    return grad


def total_energy_and_gradient(
    spec: PhiSpec, path: MeshPath, penalty_weight: float = 1.0
) -> Tuple[EnergyBreakdown, np.ndarray]:
    """Energy terms and the gradient over the free (interior) positions.

    :param spec: Weight function.
    :param path: Path with ``N + 1`` timesteps.
    :param penalty_weight: ``lambda >= 0``.
    :return: ``(breakdown, gradient)`` with gradient shape ``(N - 1, V, 3)``.
    """
    if penalty_weight < 0:
        raise PreconditionError(f"penalty weight must be >= 0, got {penalty_weight}")
    fwd = _forward(spec, path)
    breakdown = _breakdown(fwd, path.dt, penalty_weight)
    grad = _backward(spec, path, fwd, penalty_weight)
    return breakdown, grad[1:-1]


def full_gradient(spec: PhiSpec, path: MeshPath, penalty_weight: float = 1.0) -> np.ndarray:
    """Gradient over all ``N + 1`` timesteps, endpoints included."""
    return _backward(spec, path, _forward(spec, path), penalty_weight)


def path_length(spec: PhiSpec, path: MeshPath) -> float:
    """Discrete ``G^Phi`` length ``sum_i dt * sqrt(horizontal density sum of interval i)``."""
    fwd = _forward(spec, path)
    return math.fsum(path.dt * math.sqrt(math.fsum(row)) for row in fwd.horizontal_density)
