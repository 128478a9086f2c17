# SPDX-FileCopyrightText: 2026 shapegeo contributors
#
# SPDX-License-Identifier: MIT

"""
`curvature`
================================================================================

Discrete curvature of triangle meshes.

At each vertex ``p``:

* the *vector area* is the gradient of the enclosed volume,
  ``(1/6) * sum of (p1 - p0) x (p2 - p0)`` over the star of ``p``;
* the *vector mean curvature* is the gradient of the surface area, given by the
  cotangent formula ``(1/2) * sum (cot a + cot b) (p - p_i)``;
* the mean curvature ``Tr(L)`` is the ratio of their norms, signed so that an
  outward oriented sphere of radius ``r`` has ``Tr(L) = -2/r``;
* the Gauss curvature ``det(L)`` is the angular deflection
  ``2 pi - sum of corner angles`` divided by the vertex area, so that a sphere of
  radius ``r`` has ``det(L)`` close to ``1/r**2``.

Vertex areas are mixed Voronoi areas: the circumcentric dual cell where the
incident triangles are not obtuse, with the usual half and quarter split otherwise.
They are positive and sum to the total surface area. On a mesh inscribed in a
sphere the angular deflection is the spherical area of the dual cell, so the
Gauss curvature is uniform up to second order in the edge length.

The kernels work on a batch of vertex arrays sharing one :class:`~shapegeo.mesh.Topology`
(shape ``(T, V, 3)``) so that a whole path is evaluated at once.


* Author(s): shapegeo contributors

Implementation Notes
--------------------

**Software and Dependencies:**

* numpy

"""
import csv
import logging
import math
from dataclasses import dataclass

import numpy as np

from shapegeo.errors import DegenerateMeshError, PreconditionError
from shapegeo.mesh import TriMesh, Topology, as_vertex_field

__version__ = "0.0.0-auto.0"
__repo__ = "https://github.com/shapegeo/shapegeo.git"

logger = logging.getLogger(__name__)

#: Finite-difference steps below this are rejected (cancellation).
MIN_FD_STEP = 1e-8

# corner i is followed by NEXT[i] and PREV[i] in counter-clockwise order
NEXT = (1, 2, 0)
PREV = (2, 0, 1)


@dataclass(frozen=True)
class CornerGeometry:
    # pylint: disable=too-many-instance-attributes
    """Per-face, per-corner quantities for a batch of meshes.

    Arrays are shaped ``(T, F, ...)``. For corner ``i`` of a face,
    ``u = p[NEXT[i]] - p[i]`` and ``w = p[PREV[i]] - p[i]``.
    """

    corners: np.ndarray  #: (T, F, 3, 3) corner positions
    u: np.ndarray  #: (T, F, 3, 3)
    w: np.ndarray  #: (T, F, 3, 3)
    normal: np.ndarray  #: (T, F, 3) = u x w, twice the area
    twice_area: np.ndarray  #: (T, F) = |normal|
    dot: np.ndarray  #: (T, F, 3) = u . w
    cot: np.ndarray  #: (T, F, 3)
    angle: np.ndarray  #: (T, F, 3)


@dataclass(frozen=True)
class VertexGeometry:
    # pylint: disable=too-many-instance-attributes
    """Per-vertex quantities for a batch of meshes, shaped ``(T, V, ...)``."""

    vertex_area: np.ndarray
    vector_area: np.ndarray
    vector_area_norm: np.ndarray
    vector_mean_curvature: np.ndarray
    deflection: np.ndarray
    mean_curvature: np.ndarray
    mean_curvature_sq: np.ndarray
    gauss_curvature: np.ndarray
    unit_normal: np.ndarray
    star_area: np.ndarray


def corner_geometry(topology: Topology, positions: np.ndarray) -> CornerGeometry:
    """Evaluate :class:`CornerGeometry` for ``positions`` of shape ``(T, V, 3)``."""
    corners = positions[:, topology.faces]
    u = corners[:, :, NEXT] - corners
    w = corners[:, :, PREV] - corners
    normal = np.cross(u[:, :, 0], w[:, :, 0])
    twice_area = np.linalg.norm(normal, axis=-1)
    dot = np.einsum("tfcd,tfcd->tfc", u, w)
    s = twice_area[:, :, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        cot = dot / s
    angle = np.arctan2(np.broadcast_to(s, dot.shape), dot)
    return CornerGeometry(corners, u, w, normal, twice_area, dot, cot, angle)


def check_corner_geometry(geometry: CornerGeometry, area_floor: float) -> None:
    """Raise :class:`DegenerateMeshError` if a triangle is below the area floor.

    :param geometry: Corner quantities of a batch.
    :param area_floor: Minimum face area relative to the batch member's mean face area.
    """
    twice_area = geometry.twice_area
    floor = area_floor * np.mean(twice_area, axis=1, keepdims=True)
    bad = ~(twice_area > floor)
    if bad.any():
        t, f = (int(i) for i in np.argwhere(bad)[0])
        raise DegenerateMeshError(
            f"face {f} has area {0.5 * twice_area[t, f]:.3e} below the floor",
            face=f,
            timestep=t if twice_area.shape[0] > 1 else None,
        )


def corner_areas(geometry: CornerGeometry) -> np.ndarray:
    """Mixed Voronoi area each corner of a face contributes to its vertex, shape ``(T, F, 3)``.

    Non-obtuse triangles use the circumcentric split: the edge opposite corner ``i`` gives
    ``cot(i) |e|**2 / 8`` to both of its end points. An obtuse triangle gives half of its
    area to the obtuse corner and a quarter to each other corner. The two rules agree on
    right triangles, so the area is continuous in the positions.
    """
    edge_sq = np.einsum("tfcd,tfcd->tfc", geometry.w - geometry.u, geometry.w - geometry.u)
    term = geometry.cot * edge_sq / 8.0
    voronoi = term[:, :, NEXT] + term[:, :, PREV]
    obtuse = geometry.dot < 0.0
    quarter = geometry.twice_area[..., None] / 8.0
    split = np.where(obtuse, 2.0 * quarter, quarter)
    return np.where(obtuse.any(axis=2, keepdims=True), split, voronoi)


def vertex_geometry(topology: Topology, geometry: CornerGeometry) -> VertexGeometry:
    """Assemble per-vertex curvature from corner quantities."""
    twice_area = geometry.twice_area
    vertex_area = topology.scatter(corner_areas(geometry), 1)
    star_area = topology.scatter(np.repeat(twice_area[:, :, None] / 2.0, 3, axis=2), 1)
    vector_area = topology.scatter(
        np.repeat(geometry.normal[:, :, None, :] / 6.0, 3, axis=2), 1
    )
    # corner i weighs the opposite edge PREV - NEXT = w - u
    opposite = geometry.w - geometry.u
    weighted = 0.5 * geometry.cot[..., None] * opposite
    contrib = np.zeros_like(geometry.u)
    for i in range(3):
        contrib[:, :, NEXT[i]] -= weighted[:, :, i]
        contrib[:, :, PREV[i]] += weighted[:, :, i]
    vector_mean_curvature = topology.scatter(contrib, 1)
    deflection = 2.0 * math.pi - topology.scatter(geometry.angle, 1)

    va_norm = np.linalg.norm(vector_area, axis=-1)
    bad = ~(va_norm > 0.0)
    if bad.any():
        t, v = (int(i) for i in np.argwhere(bad)[0])
        raise DegenerateMeshError(
            f"vertex {v} has zero vector area",
            vertex=v,
            timestep=t if va_norm.shape[0] > 1 else None,
        )
    hv_sq = np.einsum("tvd,tvd->tv", vector_mean_curvature, vector_mean_curvature)
    mean_sq = hv_sq / va_norm**2
    alignment = np.einsum("tvd,tvd->tv", vector_mean_curvature, vector_area)
    sign = np.where(alignment >= 0.0, -1.0, 1.0)
    mean = sign * np.sqrt(mean_sq)
    gauss = deflection / vertex_area
    unit_normal = vector_area / va_norm[..., None]
    return VertexGeometry(
        vertex_area=vertex_area,
        vector_area=vector_area,
        vector_area_norm=va_norm,
        vector_mean_curvature=vector_mean_curvature,
        deflection=deflection,
        mean_curvature=mean,
        mean_curvature_sq=mean_sq,
        gauss_curvature=gauss,
        unit_normal=unit_normal,
        star_area=star_area,
    )


@dataclass(frozen=True)
class CurvatureField:
    # pylint: disable=too-many-instance-attributes
    """Discrete geometry at every vertex of a mesh.

    :param vertex_area: Mixed Voronoi area (length²); these sum to the surface area.
    :param vector_area: Gradient of the enclosed volume.
    :param vector_mean_curvature: Gradient of the surface area.
    :param mean_curvature: Signed ``Tr(L)`` (1/length); negative on outward spheres.
    :param gauss_curvature: ``det(L)`` (1/length²).
    :param unit_normal: Normalised vector area.
    :param star_area: Sum of incident triangle areas.
    :param angular_deflection: ``2 pi`` minus the corner angles at the vertex.
    """

    vertex_area: np.ndarray
    vector_area: np.ndarray
    vector_mean_curvature: np.ndarray
    mean_curvature: np.ndarray
    gauss_curvature: np.ndarray
    unit_normal: np.ndarray
    star_area: np.ndarray
    angular_deflection: np.ndarray

    def summary(self, mesh: TriMesh) -> dict:
        """Totals and ranges, as written by the ``curvature`` command."""
        return {
            "vertices": mesh.n_vertices,
            "faces": mesh.n_faces,
            "euler_characteristic": mesh.euler_characteristic,
            "total_angular_deflection": math.fsum(self.angular_deflection),
            "gauss_bonnet_target": 2.0 * math.pi * mesh.euler_characteristic,
            "total_area": math.fsum(self.vertex_area),
            "mean_curvature_min": float(np.min(self.mean_curvature)),
            "mean_curvature_max": float(np.max(self.mean_curvature)),
            "gauss_curvature_min": float(np.min(self.gauss_curvature)),
            "gauss_curvature_max": float(np.max(self.gauss_curvature)),
        }

    def to_csv(self, path) -> None:
        """Write one row per vertex: index, area, H, K, nx, ny, nz."""
        with open(path, "w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle)
            writer.writerow(["index", "area", "H", "K", "nx", "ny", "nz"])
            for i, (area, h, k, n) in enumerate(
                zip(self.vertex_area, self.mean_curvature, self.gauss_curvature, self.unit_normal)
            ):
                writer.writerow([i, repr(area), repr(h), repr(k)] + [repr(x) for x in n])


def compute_curvature(mesh: TriMesh) -> CurvatureField:
    """Discrete curvature of a closed mesh.

    :param mesh: A valid closed mesh.
    :raises DegenerateMeshError: if a vertex star has zero vector area.
    """
    positions = mesh.vertices[None]
    vertex = vertex_geometry(mesh.topology, corner_geometry(mesh.topology, positions))
    return CurvatureField(
        vertex_area=vertex.vertex_area[0],
        vector_area=vertex.vector_area[0],
        vector_mean_curvature=vertex.vector_mean_curvature[0],
        mean_curvature=vertex.mean_curvature[0],
        gauss_curvature=vertex.gauss_curvature[0],
        unit_normal=vertex.unit_normal[0],
        star_area=vertex.star_area[0],
        angular_deflection=vertex.deflection[0],
    )


def vertex_normals(mesh: TriMesh) -> np.ndarray:
    """Unit normals (normalised vector area) of every vertex."""
    return compute_curvature(mesh).unit_normal


def discrete_area_gradient(mesh: TriMesh) -> np.ndarray:
    """Vector mean curvature: the gradient of the total area."""
    return compute_curvature(mesh).vector_mean_curvature


def discrete_volume_gradient(mesh: TriMesh) -> np.ndarray:
    """Vector area: the gradient of the enclosed volume."""
    return compute_curvature(mesh).vector_area


def angular_deflection(mesh: TriMesh, vertex: int) -> float:
    """``2 pi`` minus the interior angles at ``vertex`` over its star.

    :param mesh: The mesh.
    :param vertex: Vertex index.
    """
    if not 0 <= vertex < mesh.n_vertices:
        raise PreconditionError(f"vertex {vertex} out of range [0, {mesh.n_vertices})")
    angles = []
    for face in mesh.vertex_stars[vertex]:
        corner = mesh.faces[face].tolist().index(vertex)
        p = mesh.vertices[mesh.faces[face]]
        u = p[NEXT[corner]] - p[corner]
        w = p[PREV[corner]] - p[corner]
        angles.append(math.atan2(np.linalg.norm(np.cross(u, w)), float(np.dot(u, w))))
    return 2.0 * math.pi - math.fsum(angles)


def total_angular_deflection(mesh: TriMesh) -> float:
    """Sum of the angular deflections; ``2 pi`` times the Euler characteristic."""
    return math.fsum(compute_curvature(mesh).angular_deflection)


@dataclass(frozen=True)
class VariationReport:
    """A finite difference next to the smooth variational formula it should match.

    :param finite_difference: Central difference of the discrete quantity.
    :param formula: The smooth formula evaluated with discrete curvatures.
    :param relative_discrepancy: Largest ``|fd - formula| / |formula|``.
    """

    finite_difference: np.ndarray
    formula: np.ndarray
    relative_discrepancy: float


def _relative(fd: np.ndarray, formula: np.ndarray) -> float:
    fd = np.atleast_1d(fd)
    formula = np.atleast_1d(formula)
    diff = np.abs(fd - formula)
    scale = np.abs(formula)
    if not diff.any():
        return 0.0
    with np.errstate(divide="ignore"):
        return float(np.max(np.where(scale > 0.0, diff / scale, np.inf)))


def _displaced(mesh: TriMesh, field: CurvatureField, normal_speed, h: float):
    if not h >= MIN_FD_STEP:
        raise PreconditionError(f"step {h} is below {MIN_FD_STEP} (cancellation)")
    speed = as_vertex_field(mesh, normal_speed)
    offset = h * speed[:, None] * field.unit_normal
    plus = mesh.with_vertices(mesh.vertices + offset)
    minus = mesh.with_vertices(mesh.vertices - offset)
    return speed, plus, minus


def verify_volume_variation(mesh: TriMesh, normal_speed, h: float = 1e-5) -> VariationReport:
    """Compare the derivative of the total area with ``-∫ Tr(L) a vol``.

    The mesh is displaced by ``±h·a·ν`` and the area difference quotient is
    compared with the first variation of the volume form for a normal field.

    :param mesh: A member of a refinement family, e.g. an icosphere.
    :param normal_speed: Per-vertex normal speed ``a`` (scalar broadcasts).
    :param h: Finite-difference step, at least ``1e-8``.
    """
    field = compute_curvature(mesh)
    speed, plus, minus = _displaced(mesh, field, normal_speed, h)
    fd = (plus.area() - minus.area()) / (2.0 * h)
    formula = -math.fsum(field.mean_curvature * speed * field.vertex_area)
    report = VariationReport(np.float64(fd), np.float64(formula), _relative(fd, formula))
    logger.info(
        "area variation: fd=%.10g formula=%.10g rel=%.3e",
        fd,
        formula,
        report.relative_discrepancy,
    )
    return report


def verify_gauss_variation(mesh: TriMesh, normal_speed, h: float = 1e-5) -> VariationReport:
    """Compare the derivative of ``det(L)`` with ``Tr(L) det(L) a``.

    Valid where ``a`` is constant and the motion is normal, so the Hessian and
    tangential terms of the variation of the Gauss curvature vanish.

    :param mesh: A sphere mesh.
    :param normal_speed: Per-vertex normal speed ``a`` (scalar broadcasts).
    :param h: Finite-difference step, at least ``1e-8``.
    """
    field = compute_curvature(mesh)
    speed, plus, minus = _displaced(mesh, field, normal_speed, h)
    fd = (compute_curvature(plus).gauss_curvature - compute_curvature(minus).gauss_curvature) / (
        2.0 * h
    )
    formula = field.mean_curvature * field.gauss_curvature * speed
    report = VariationReport(fd, formula, _relative(fd, formula))
    logger.info("gauss variation: max rel discrepancy %.3e", report.relative_discrepancy)
    return report


def curvature_error(mesh: TriMesh, radius: float) -> tuple:
    """Largest deviation of the discrete curvatures from a round sphere's.

    :param mesh: A sphere mesh.
    :param radius: Its radius.
    :return: ``(max |Tr(L) + 2/r|, max |det(L) - 1/r²|)``.
    """
    field = compute_curvature(mesh)
    return (
        float(np.max(np.abs(field.mean_curvature + 2.0 / radius))),
        float(np.max(np.abs(field.gauss_curvature - 1.0 / radius**2))),
    )
