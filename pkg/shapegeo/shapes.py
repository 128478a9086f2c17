# SPDX-FileCopyrightText: 2026 shapegeo contributors
#
# SPDX-License-Identifier: MIT

"""
`shapes`
================================================================================

Procedural closed meshes beyond the icosphere: ellipsoids, subdivided
cubes and bump deformations of a given surface.


* Author(s): shapegeo contributors

"""
import logging
from typing import Sequence

import numpy as np

from shapegeo.curvature import vertex_normals
from shapegeo.errors import PreconditionError
from shapegeo.mesh import TriMesh, make_icosphere

__version__ = "0.0.0-auto.0"
__repo__ = "https://github.com/shapegeo/shapegeo.git"

logger = logging.getLogger(__name__)


def make_ellipsoid(
    subdivision_level: int,
    axes: Sequence[float] = (1.0, 1.0, 1.0),
    center: Sequence[float] = (0.0, 0.0, 0.0),
) -> TriMesh:
    """An icosphere stretched to the semi-axes ``axes``.

    :param subdivision_level: Icosphere refinement level.
    :param axes: Three positive semi-axis lengths.
    :param center: Ellipsoid center.
    """
    axes = np.asarray(axes, dtype=float)
    if axes.shape != (3,) or not np.all(axes > 0):
        raise PreconditionError(f"axes must be three positive lengths, got {axes}")
    sphere = make_icosphere(subdivision_level)
    return sphere.with_vertices(sphere.vertices * axes + np.asarray(center, dtype=float))


def make_cube(
    divisions: int = 1, size: float = 1.0, origin: Sequence[float] = (0.0, 0.0, 0.0)
) -> TriMesh:
    """The surface of the cube ``origin + [0, size]**3``.

    Each square side is cut into ``divisions**2`` squares and every square
    into two triangles along the same diagonal, so vertices inside a side
    have six neighbours and zero angular deflection.

    :param divisions: Grid cells along each edge, at least 1.
    :param size: Edge length.
    :param origin: Lowest corner.
    """
    if int(divisions) != divisions or divisions < 1:
        raise PreconditionError(f"divisions must be a positive integer, got {divisions}")
    if not size > 0:
        raise PreconditionError(f"size must be positive, got {size}")
    d = int(divisions)
    grid = np.arange(d + 1)
    points = []
    triangles = []
    for axis in range(3):
        b, c = [a for a in range(3) if a != axis]
        for side in (0, d):
            base = len(points)
            for i in grid:
                for j in grid:
                    lattice = [0, 0, 0]
                    lattice[axis], lattice[b], lattice[c] = side, i, j
                    points.append(lattice)
            for i in range(d):
                for j in range(d):
                    p00 = base + i * (d + 1) + j
                    p10 = p00 + d + 1
                    triangles.append((p00, p10, p10 + 1))
                    triangles.append((p00, p10 + 1, p00 + 1))
    lattice, inverse = np.unique(np.array(points), axis=0, return_inverse=True)
    faces = inverse.reshape(-1)[np.array(triangles)]
    vertices = lattice / d
    # wind outward: the solid is convex and its center is (1/2, 1/2, 1/2)
    p = vertices[faces]
    normals = np.cross(p[:, 1] - p[:, 0], p[:, 2] - p[:, 0])
    inward = np.einsum("ij,ij->i", normals, p.mean(axis=1) - 0.5) < 0
    faces[inward] = faces[inward][:, ::-1]
    return TriMesh(size * vertices + np.asarray(origin, dtype=float), faces)


def bump_deform(
    mesh: TriMesh,
    amplitude: float,
    direction: Sequence[float] = (0.0, 0.0, 1.0),
    width: float = 0.5,
) -> TriMesh:
    """Push ``mesh`` along its vertex normals by a smooth bump.

    The displacement at vertex ``p`` is
    ``amplitude * exp(-(1 - <u_p, d>) / width**2)`` where ``u_p`` is the unit
    direction from the mesh centroid to ``p`` and ``d`` the normalised ``direction``.

    :param mesh: A closed mesh, roughly star-shaped about its centroid.
    :param amplitude: Peak displacement (negative values dent the surface).
    :param direction: Where the bump points.
    :param width: Angular width of the bump.
    """
    if not width > 0:
        raise PreconditionError(f"bump width must be positive, got {width}")
    direction = np.asarray(direction, dtype=float)
    norm = np.linalg.norm(direction)
    if direction.shape != (3,) or norm == 0:
        raise PreconditionError(f"bump direction must be a non-zero 3-vector, got {direction}")
    offsets = mesh.vertices - mesh.vertices.mean(axis=0)
    units = offsets / np.linalg.norm(offsets, axis=1)[:, None]
    profile = np.exp(-(1.0 - units @ (direction / norm)) / width**2)
    displacement = amplitude * profile[:, None] * vertex_normals(mesh)
    logger.debug("bump of amplitude %g, max displacement %g", amplitude, np.abs(displacement).max())
    return mesh.with_vertices(mesh.vertices + displacement)
