# SPDX-FileCopyrightText: 2026 shapegeo contributors
#
# SPDX-License-Identifier: MIT

"""
`path`
================================================================================

Time-discretised paths of meshes on one shared combinatorics.

A path with ``N`` intervals holds ``N + 1`` vertex arrays on ``[0, 1]``
(``dt = 1/N``). The first and last arrays are the boundary shapes and are
never modified by :meth:`MeshPath.with_interior`.


* Author(s): shapegeo contributors

"""
from typing import Iterator, List, Optional, Sequence

import numpy as np

from shapegeo.curvature import check_corner_geometry, corner_geometry
from shapegeo.errors import CombinatoricsMismatchError, PreconditionError
from shapegeo.mesh import DEFAULT_AREA_FLOOR, Topology, TriMesh

__version__ = "0.0.0-auto.0"
__repo__ = "https://github.com/shapegeo/shapegeo.git"


class MeshPath:
    """A path of immersions ``f: [0, 1] -> Imm``, sampled at ``N + 1`` times.

    :param topology: The shared combinatorics.
    :param positions: ``(N + 1, V, 3)`` vertex positions, ``N >= 1``.
    :param area_floor: Minimum relative face area for every timestep.
    :param validate: Check every timestep against the area floor.
    """

    def __init__(
        self,
        topology: Topology,
        positions,
        *,
        area_floor: float = DEFAULT_AREA_FLOOR,
        validate: bool = True,
    ) -> None:
        positions = np.array(positions, dtype=float)
        if positions.ndim != 3 or positions.shape[1:] != (topology.n_vertices, 3):
            raise CombinatoricsMismatchError(
                f"positions of shape {positions.shape} do not match "
                f"{topology.n_vertices} vertices"
            )
        if positions.shape[0] < 2:
            raise PreconditionError("a path needs at least two timesteps")
        positions.setflags(write=False)
        self._topology = topology
        self._positions = positions
        self._area_floor = float(area_floor)
        if validate:
            self.validate()

    @classmethod
    def from_meshes(cls, meshes: Sequence[TriMesh]) -> "MeshPath":
        """Stack meshes that share one face array."""
        first = meshes[0]
        for i, mesh in enumerate(meshes[1:], start=1):
            if not first.same_combinatorics(mesh):
                raise CombinatoricsMismatchError(f"mesh {i} does not share the face array")
        return cls(
            first.topology,
            np.stack([m.vertices for m in meshes]),
            area_floor=first.area_floor,
        )

    @classmethod
    def linear(cls, start: TriMesh, end: TriMesh, n_intervals: int) -> "MeshPath":
        """Vertex-wise linear interpolation from ``start`` to ``end``.

        :param start: Shape at ``t = 0``.
        :param end: Shape at ``t = 1``, same combinatorics.
        :param n_intervals: ``N >= 1``.
        """
        if not start.same_combinatorics(end):
            raise CombinatoricsMismatchError(
                f"start (V={start.n_vertices}, F={start.n_faces}) and end "
                f"(V={end.n_vertices}, F={end.n_faces}) do not share combinatorics"
            )
        if n_intervals < 1:
            raise PreconditionError(f"need at least one interval, got {n_intervals}")
        t = np.linspace(0.0, 1.0, n_intervals + 1)[:, None, None]
        positions = (1.0 - t) * start.vertices[None] + t * end.vertices[None]
        positions[0] = start.vertices
        positions[-1] = end.vertices
        return cls(start.topology, positions, area_floor=start.area_floor)

    @classmethod
    def from_radii(cls, sphere: TriMesh, center: Sequence[float], radii) -> "MeshPath":
        """Concentric spheres: every vertex of ``sphere`` projected to radius ``radii[i]``.

        :param sphere: A mesh whose vertices lie on a sphere about ``center``.
        :param center: Common center.
        :param radii: ``N + 1`` radii.
        """
        center = np.asarray(center, dtype=float)
        offsets = sphere.vertices - center
        directions = offsets / np.linalg.norm(offsets, axis=1)[:, None]
        radii = np.asarray(radii, dtype=float)
        positions = center + radii[:, None, None] * directions[None]
        return cls(sphere.topology, positions, area_floor=sphere.area_floor)

    @classmethod
    def translation(cls, mesh: TriMesh, offsets) -> "MeshPath":
        """Rigid translation of ``mesh`` by ``offsets[i]`` at timestep ``i``."""
        offsets = np.asarray(offsets, dtype=float)
        positions = mesh.vertices[None] + offsets[:, None, :]
        return cls(mesh.topology, positions, area_floor=mesh.area_floor)

    @property
    def topology(self) -> Topology:
        """The shared combinatorics."""
        return self._topology

    @property
    def positions(self) -> np.ndarray:
        """Read-only ``(N + 1, V, 3)`` positions."""
        return self._positions

    @property
    def area_floor(self) -> float:
        """Relative minimum face area."""
        return self._area_floor

    @property
    def timesteps(self) -> int:
        """Number of sampled shapes, ``N + 1``."""
        return self._positions.shape[0]

    @property
    def n_intervals(self) -> int:
        """Number of time intervals ``N``."""
        return self._positions.shape[0] - 1

    @property
    def dt(self) -> float:
        """Interval length ``1/N``."""
        return 1.0 / self.n_intervals

    @property
    def times(self) -> np.ndarray:
        """Sample times ``0, dt, ..., 1``."""
        return np.linspace(0.0, 1.0, self.timesteps)

    @property
    def midpoint_times(self) -> np.ndarray:
        """Centers of the time intervals."""
        return (np.arange(self.n_intervals) + 0.5) * self.dt

    def validate(self) -> None:
        """Raise :class:`~shapegeo.errors.DegenerateMeshError` naming the first bad timestep."""
        check_corner_geometry(corner_geometry(self._topology, self._positions), self._area_floor)

    def mesh(self, index: int) -> TriMesh:
        """The shape at timestep ``index``."""
        return TriMesh.from_topology(
            self._positions[index], self._topology, area_floor=self._area_floor
        )

    def meshes(self) -> Iterator[TriMesh]:
        """All shapes in time order."""
        for i in range(self.timesteps):
            yield self.mesh(i)

    def midpoints(self) -> np.ndarray:
        """``(N, V, 3)`` interval midpoint positions ``(x_i + x_{i+1}) / 2``."""
        return 0.5 * (self._positions[:-1] + self._positions[1:])

    def velocities(self) -> np.ndarray:
        """``(N, V, 3)`` forward differences ``(x_{i+1} - x_i) / dt``."""
        return np.diff(self._positions, axis=0) / self.dt

    def interior(self) -> np.ndarray:
        """Copy of the free positions, ``(N - 1, V, 3)``."""
        return self._positions[1:-1].copy()

    def with_interior(self, interior, *, validate: bool = True) -> "MeshPath":
        """A path with the same endpoints and new interior positions."""
        positions = np.array(self._positions)
        positions[1:-1] = np.reshape(interior, positions[1:-1].shape)
        return MeshPath(
            self._topology, positions, area_floor=self._area_floor, validate=validate
        )

    def reversed(self) -> "MeshPath":
        """The path traversed backwards."""
        return MeshPath(self._topology, self._positions[::-1], area_floor=self._area_floor)

    def permuted(self, permutation) -> "MeshPath":
        """Relabel the vertices of every timestep (see :meth:`TriMesh.permuted`)."""
        meshes: List[TriMesh] = [m.permuted(permutation) for m in self.meshes()]
        return MeshPath.from_meshes(meshes)

    def transformed(self, rotation=None, offset: Optional[Sequence[float]] = None) -> "MeshPath":
        """Apply ``x -> R x + offset`` to every timestep."""
        positions = self._positions
        if rotation is not None:
            positions = positions @ np.asarray(rotation, dtype=float).T
        if offset is not None:
            positions = positions + np.asarray(offset, dtype=float)
        return MeshPath(self._topology, positions, area_floor=self._area_floor)

    def __repr__(self) -> str:
        return (
            f"MeshPath(timesteps={self.timesteps}, V={self._topology.n_vertices}, "
            f"F={self._topology.n_faces})"
        )
