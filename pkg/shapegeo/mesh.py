# SPDX-FileCopyrightText: 2026 shapegeo contributors
#
# SPDX-License-Identifier: MIT

"""
`mesh`
================================================================================

Closed, oriented triangle meshes: the discrete immersion of a surface.

A :class:`TriMesh` owns an immutable vertex array and a reference to a shared
:class:`Topology` (face array, edges, cyclically ordered vertex stars and the
corner-to-vertex scatter matrix). Meshes along a path all share one topology;
only the vertex positions differ.


* Author(s): shapegeo contributors

Implementation Notes
--------------------

**Software and Dependencies:**

* numpy
* scipy (``scipy.sparse`` for the corner-to-vertex incidence matrix)

"""
import logging
import math
from typing import Optional, Sequence

import numpy as np
from scipy import sparse

from shapegeo.errors import DegenerateMeshError, MeshTopologyError, PreconditionError

__version__ = "0.0.0-auto.0"
__repo__ = "https://github.com/shapegeo/shapegeo.git"

logger = logging.getLogger(__name__)

#: Minimum triangle area, relative to the mean face area.
DEFAULT_AREA_FLOOR = 1e-12

#: Largest icosphere subdivision level accepted by :func:`make_icosphere`.
MAX_ICOSPHERE_LEVEL = 8


class Topology:
    """Combinatorics of a closed oriented triangle mesh.

    Validates on construction that every edge is shared by exactly two faces
    with opposite orientation, and that every vertex star is a single disc.

    :param faces: ``(F, 3)`` vertex indices, counter-clockwise seen from outside.
    :param n_vertices: Number of vertices ``V``.
    """

    def __init__(self, faces, n_vertices: int) -> None:
        faces = np.array(faces, dtype=np.int64)
        if faces.ndim != 2 or faces.shape[1] != 3 or faces.shape[0] == 0:
            raise MeshTopologyError("faces must be a non-empty (F, 3) index array")
        faces.setflags(write=False)
        self.faces = faces
        self.n_vertices = int(n_vertices)
        self._check_indices()
        self.edges = self._build_edges()
        self.vertex_stars = self._build_stars()
        n_corners = 3 * faces.shape[0]
        self.scatter_matrix = sparse.csr_matrix(
            (np.ones(n_corners), (faces.ravel(), np.arange(n_corners))),
            shape=(self.n_vertices, n_corners),
        )

    def _check_indices(self) -> None:
        faces = self.faces
        bad = np.nonzero((faces < 0).any(axis=1) | (faces >= self.n_vertices).any(axis=1))[0]
        if bad.size:
            f = int(bad[0])
            raise MeshTopologyError(
                f"face {f} {tuple(faces[f])} indexes outside [0, {self.n_vertices})",
                simplex=("face", f),
            )
        repeated = np.nonzero(
            (faces[:, 0] == faces[:, 1])
            | (faces[:, 1] == faces[:, 2])
            | (faces[:, 2] == faces[:, 0])
        )[0]
        if repeated.size:
            f = int(repeated[0])
            raise MeshTopologyError(
                f"face {f} {tuple(faces[f])} repeats a vertex", simplex=("face", f)
            )
        used = np.bincount(faces.ravel(), minlength=self.n_vertices)
        isolated = np.nonzero(used == 0)[0]
        if isolated.size:
            v = int(isolated[0])
            raise MeshTopologyError(f"vertex {v} belongs to no face", simplex=("vertex", v))

    def _build_edges(self) -> np.ndarray:
        directed = self.faces[:, [0, 1, 1, 2, 2, 0]].reshape(-1, 2)
        undirected = np.sort(directed, axis=1)
        edges, counts = np.unique(undirected, axis=0, return_counts=True)
        over = np.nonzero(counts > 2)[0]
        if over.size:
            e = tuple(int(i) for i in edges[over[0]])
            raise MeshTopologyError(
                f"non-manifold edge {e} is shared by {counts[over[0]]} faces",
                simplex=("edge", e),
            )
        boundary = np.nonzero(counts < 2)[0]
        if boundary.size:
            e = tuple(int(i) for i in edges[boundary[0]])
            raise MeshTopologyError(f"boundary edge {e} has a single face", simplex=("edge", e))
        _, directed_counts = np.unique(directed, axis=0, return_counts=True)
        if (directed_counts > 1).any():
            uniq, inverse = np.unique(directed, axis=0, return_inverse=True)
            twice = np.nonzero(np.bincount(inverse.ravel()) > 1)[0][0]
            e = tuple(int(i) for i in uniq[twice])
            raise MeshTopologyError(
                f"edge {e} is traversed in the same direction by both faces "
                "(inconsistent orientation)",
                simplex=("edge", e),
            )
        edges.setflags(write=False)
        return edges

    def _build_stars(self) -> tuple:
        # outgoing[(p, q)] is the face containing the directed edge p -> q
        outgoing = {}
        incident = [[] for _ in range(self.n_vertices)]
        for f, (a, b, c) in enumerate(self.faces.tolist()):
            outgoing[(a, b)] = f
            outgoing[(b, c)] = f
            outgoing[(c, a)] = f
            incident[a].append(f)
            incident[b].append(f)
            incident[c].append(f)
        faces = self.faces.tolist()
        stars = []
        for p in range(self.n_vertices):
            start = incident[p][0]
            ring = [start]
            face = start
            while True:
                corner = faces[face].index(p)
                previous = faces[face][(corner + 2) % 3]
                face = outgoing[(p, previous)]
                if face == start:
                    break
                ring.append(face)
                if len(ring) > len(incident[p]):
                    break
            if len(ring) != len(incident[p]):
                raise MeshTopologyError(
                    f"vertex {p} has a star that is not a single disc", simplex=("vertex", p)
                )
            stars.append(tuple(ring))
        return tuple(stars)

    @property
    def n_faces(self) -> int:
        """Number of faces ``F``."""
        return self.faces.shape[0]

    @property
    def n_edges(self) -> int:
        """Number of edges ``E``."""
        return self.edges.shape[0]

    @property
    def euler_characteristic(self) -> int:
        """``V - E + F``; 2 for a sphere."""
        return self.n_vertices - self.n_edges + self.n_faces

    def scatter(self, corner_values: np.ndarray, batch_ndim: int = 0) -> np.ndarray:
        """Sum per-corner values onto vertices.

        :param corner_values: Array of shape ``(*batch, F, 3, *rest)``.
        :param batch_ndim: Number of leading batch axes (e.g. 1 for timesteps).
        :return: Array of shape ``(*batch, V, *rest)``.
        """
        values = np.asarray(corner_values, dtype=float)
        batch = values.shape[:batch_ndim]
        if values.shape[batch_ndim : batch_ndim + 2] != (self.n_faces, 3):
            raise ValueError(f"expected (F, 3) corner axes, got array of shape {values.shape}")
        rest = values.shape[batch_ndim + 2 :]
        n_corners = 3 * self.n_faces
        moved = np.moveaxis(values.reshape(batch + (n_corners,) + rest), batch_ndim, 0)
        summed = np.asarray(self.scatter_matrix @ moved.reshape(n_corners, -1))
        summed = summed.reshape((self.n_vertices,) + batch + rest)
        return np.moveaxis(summed, 0, batch_ndim)


class TriMesh:
    """A closed, oriented triangle mesh.

    :param vertices: ``(V, 3)`` vertex positions.
    :param faces: ``(F, 3)`` vertex indices, counter-clockwise seen from outside.
    :param area_floor: Minimum face area relative to the mean face area.
    """

    def __init__(self, vertices, faces, *, area_floor: float = DEFAULT_AREA_FLOOR) -> None:
        vertices = np.array(vertices, dtype=float)
        if vertices.ndim != 2 or vertices.shape[1] != 3:
            raise MeshTopologyError("vertices must be a (V, 3) array")
        topology = Topology(faces, vertices.shape[0])
        self._init(vertices, topology, area_floor)

    def _init(self, vertices: np.ndarray, topology: Topology, area_floor: float) -> None:
        if not np.all(np.isfinite(vertices)):
            raise DegenerateMeshError("vertex positions must be finite")
        vertices.setflags(write=False)
        self._vertices = vertices
        self._topology = topology
        self._area_floor = float(area_floor)
        self._check_areas()

    @classmethod
    def from_topology(cls, vertices, topology: Topology, *, area_floor=DEFAULT_AREA_FLOOR):
        """Build a mesh on an already validated topology."""
        vertices = np.array(vertices, dtype=float)
        if vertices.shape != (topology.n_vertices, 3):
            raise MeshTopologyError(
                f"expected vertices of shape ({topology.n_vertices}, 3), got {vertices.shape}"
            )
        mesh = cls.__new__(cls)
        mesh._init(vertices, topology, area_floor)
        return mesh

    def _check_areas(self) -> None:
        areas = self.face_areas()
        floor = self._area_floor * float(np.mean(areas))
        small = np.nonzero(areas <= floor)[0]
        if small.size or not np.mean(areas) > 0.0:
            f = int(small[0]) if small.size else 0
            logger.warning("face %d has area %.3e below floor %.3e", f, areas[f], floor)
            raise DegenerateMeshError(
                f"face {f} {tuple(self.faces[f])} has area {areas[f]:.3e} "
                f"below the floor {floor:.3e}",
                face=f,
            )

    @property
    def vertices(self) -> np.ndarray:
        """Read-only ``(V, 3)`` vertex positions."""
        return self._vertices

    @property
    def faces(self) -> np.ndarray:
        """Read-only ``(F, 3)`` face indices."""
        return self._topology.faces

    @property
    def topology(self) -> Topology:
        """The shared combinatorics."""
        return self._topology

    @property
    def edges(self) -> np.ndarray:
        """``(E, 2)`` sorted vertex pairs."""
        return self._topology.edges

    @property
    def vertex_stars(self) -> tuple:
        """Per vertex, the incident faces in cyclic order."""
        return self._topology.vertex_stars

    @property
    def area_floor(self) -> float:
        """Relative minimum face area."""
        return self._area_floor

    @property
    def n_vertices(self) -> int:
        """Number of vertices ``V``."""
        return self._topology.n_vertices

    @property
    def n_faces(self) -> int:
        """Number of faces ``F``."""
        return self._topology.n_faces

    @property
    def n_edges(self) -> int:
        """Number of edges ``E``."""
        return self._topology.n_edges

    @property
    def euler_characteristic(self) -> int:
        """``V - E + F``."""
        return self._topology.euler_characteristic

    def corners(self) -> np.ndarray:
        """``(F, 3, 3)`` positions of each face's corners."""
        return self._vertices[self.faces]

    def face_normals(self) -> np.ndarray:
        """Un-normalised face normals ``(p1 - p0) x (p2 - p0)``; length is twice the area."""
        p = self.corners()
        return np.cross(p[:, 1] - p[:, 0], p[:, 2] - p[:, 0])

    def face_areas(self) -> np.ndarray:
        """Area of every face."""
        return 0.5 * np.linalg.norm(self.face_normals(), axis=1)

    def area(self) -> float:
        """Total surface area."""
        return math.fsum(self.face_areas())

    def enclosed_volume(self) -> float:
        """Signed enclosed volume, see :func:`enclosed_volume`."""
        return enclosed_volume(self)

    def same_combinatorics(self, other: "TriMesh") -> bool:
        """``True`` if ``other`` has the same vertex count and face array."""
        if other.topology is self._topology:
            return True
        return other.n_vertices == self.n_vertices and np.array_equal(other.faces, self.faces)

    def with_vertices(self, vertices) -> "TriMesh":
        """A mesh with new positions on the same combinatorics."""
        return TriMesh.from_topology(vertices, self._topology, area_floor=self._area_floor)

    def translated(self, offset: Sequence[float]) -> "TriMesh":
        """The mesh moved by ``offset``."""
        return self.with_vertices(self._vertices + np.asarray(offset, dtype=float))

    def scaled(self, factor: float, center: Optional[Sequence[float]] = None) -> "TriMesh":
        """The mesh scaled by ``factor`` about ``center`` (default: origin)."""
        c = np.zeros(3) if center is None else np.asarray(center, dtype=float)
        return self.with_vertices(c + factor * (self._vertices - c))

    def rotated(self, rotation) -> "TriMesh":
        """The mesh rotated by the 3x3 matrix ``rotation`` about the origin."""
        rotation = np.asarray(rotation, dtype=float)
        return self.with_vertices(self._vertices @ rotation.T)

    def permuted(self, permutation) -> "TriMesh":
        """Relabel vertices: new vertex ``i`` is old vertex ``permutation[i]``."""
        permutation = np.asarray(permutation, dtype=np.int64)
        inverse = np.empty_like(permutation)
        inverse[permutation] = np.arange(permutation.size)
        return TriMesh(
            self._vertices[permutation], inverse[self.faces], area_floor=self._area_floor
        )

    def reversed(self) -> "TriMesh":
        """The same surface with every face wound the other way."""
        return TriMesh(self._vertices, self.faces[:, ::-1], area_floor=self._area_floor)

    def __repr__(self) -> str:
        return f"TriMesh(V={self.n_vertices}, E={self.n_edges}, F={self.n_faces})"


def as_vertex_field(mesh: TriMesh, values, *, vector: bool = False) -> np.ndarray:
    """Check that ``values`` is a per-vertex field on ``mesh``.

    Scalars may be given as a single number and are broadcast.

    :param mesh: The mesh the field lives on.
    :param values: ``(V,)`` scalars or ``(V, 3)`` vectors.
    :param vector: Whether a vector field is expected.
    """
    shape = (mesh.n_vertices, 3) if vector else (mesh.n_vertices,)
    values = np.asarray(values, dtype=float)
    if values.ndim == 0 and not vector:
        return np.full(shape, float(values))
    if values.shape != shape:
        raise PreconditionError(f"vertex field has shape {values.shape}, expected {shape}")
    return values


def enclosed_volume(mesh: TriMesh) -> float:
    """Signed volume enclosed by a closed mesh.

    Divergence theorem: the sum over faces of ``det[p0, p1, p2] / 6``.
    Positive for outward orientation; flips sign with the winding.

    :param mesh: A closed oriented mesh.
    """
    p = mesh.corners()
    dets = np.einsum("ij,ij->i", p[:, 0], np.cross(p[:, 1], p[:, 2]))
    return math.fsum(dets) / 6.0


def _icosahedron():
    phi = (1.0 + math.sqrt(5.0)) / 2.0
    vertices = np.array(
        [
            (-1, phi, 0), (1, phi, 0), (-1, -phi, 0), (1, -phi, 0),
            (0, -1, phi), (0, 1, phi), (0, -1, -phi), (0, 1, -phi),
            (phi, 0, -1), (phi, 0, 1), (-phi, 0, -1), (-phi, 0, 1),
        ],
        dtype=float,
    )  # fmt: skip
    vertices /= np.linalg.norm(vertices, axis=1)[:, None]
    faces = np.array(
        [
            (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
            (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
            (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
            (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
        ],
        dtype=np.int64,
    )  # fmt: skip
    # orient every face outward (the solid is convex and centred at the origin)
    p = vertices[faces]
    outward = np.einsum("ij,ij->i", np.cross(p[:, 1] - p[:, 0], p[:, 2] - p[:, 0]), p.sum(axis=1))
    faces[outward < 0] = faces[outward < 0][:, ::-1]
    return vertices, faces


def _subdivide(vertices: np.ndarray, faces: np.ndarray):
    """Split every triangle in four, pushing new vertices onto the unit sphere."""
    points = [tuple(v) for v in vertices]
    midpoint = {}

    def middle(a: int, b: int) -> int:
        key = (a, b) if a < b else (b, a)
        if key not in midpoint:
            s = vertices[a] + vertices[b]
            points.append(tuple(s / np.linalg.norm(s)))
            midpoint[key] = len(points) - 1
        return midpoint[key]

    refined = []
    for a, b, c in faces.tolist():
        ab = middle(a, b)
        bc = middle(b, c)
        ca = middle(c, a)
        refined.extend([(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)])
    return np.array(points, dtype=float), np.array(refined, dtype=np.int64)


def make_icosphere(
    subdivision_level: int, radius: float = 1.0, center: Sequence[float] = (0.0, 0.0, 0.0)
) -> TriMesh:
    """A subdivided icosahedron with all vertices on a sphere.

    Level ``l`` has ``20 * 4**l`` faces, ``30 * 4**l`` edges and
    ``2 + 10 * 4**l`` vertices.

    :param subdivision_level: Number of 1-to-4 refinements, 0 to 8.
    :param radius: Sphere radius.
    :param center: Sphere center.
    """
    if int(subdivision_level) != subdivision_level or subdivision_level < 0:
        raise PreconditionError(
            f"subdivision level must be a non-negative integer, got {subdivision_level}"
        )
    if subdivision_level > MAX_ICOSPHERE_LEVEL:
        raise PreconditionError(
            f"subdivision level {subdivision_level} exceeds the limit {MAX_ICOSPHERE_LEVEL}"
        )
    if not radius > 0:
        raise PreconditionError(f"radius must be positive, got {radius}")
    vertices, faces = _icosahedron()
    for _ in range(int(subdivision_level)):
        vertices, faces = _subdivide(vertices, faces)
    vertices = radius * vertices + np.asarray(center, dtype=float)
    logger.debug("icosphere level %d: V=%d F=%d", subdivision_level, len(vertices), len(faces))
    return TriMesh(vertices, faces)
