# SPDX-FileCopyrightText: 2026 shapegeo contributors
#
# SPDX-License-Identifier: MIT

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from shapegeo.errors import CombinatoricsMismatchError, DegenerateMeshError, PreconditionError
from shapegeo.mesh import make_icosphere
from shapegeo.path import MeshPath


def test_linear_path_endpoints(sphere1):
    end = sphere1.scaled(2.0).translated((0.1, 0.2, 0.3))
    path = MeshPath.linear(sphere1, end, 7)
    assert path.timesteps == 8
    assert path.n_intervals == 7
    assert path.dt == pytest.approx(1.0 / 7.0)
    assert_array_equal(path.positions[0], sphere1.vertices)
    assert_array_equal(path.positions[-1], end.vertices)
    assert_allclose(path.positions[3], (4 * sphere1.vertices + 3 * end.vertices) / 7.0)


def test_times(sphere1):
    path = MeshPath.linear(sphere1, sphere1, 4)
    assert_allclose(path.times, [0.0, 0.25, 0.5, 0.75, 1.0])
    assert_allclose(path.midpoint_times, [0.125, 0.375, 0.625, 0.875])


def test_from_radii_is_concentric(sphere1):
    radii = [1.0, 1.5, 2.0]
    path = MeshPath.from_radii(sphere1, (1.0, 0.0, 0.0), radii)
    for positions, radius in zip(path.positions, radii):
        assert_allclose(np.linalg.norm(positions - (1.0, 0.0, 0.0), axis=1), radius, rtol=1e-14)


def test_translation_path(sphere1):
    offsets = np.outer(np.linspace(0.0, 1.0, 5), (2.0, 0.0, 0.0))
    path = MeshPath.translation(sphere1, offsets)
    assert_allclose(path.velocities(), np.broadcast_to((8.0, 0.0, 0.0), path.velocities().shape))


def test_midpoints_and_velocities(sphere1):
    path = MeshPath.from_radii(sphere1, (0, 0, 0), [1.0, 2.0, 4.0])
    assert_allclose(path.midpoints()[1], 3.0 * sphere1.vertices)
    assert_allclose(path.velocities()[1], 4.0 * sphere1.vertices)


def test_with_interior_keeps_endpoints(sphere1, rng):
    path = MeshPath.linear(sphere1, sphere1.scaled(1.5), 4)
    interior = path.interior() + 0.01 * rng.normal(size=path.interior().shape)
    moved = path.with_interior(interior)
    assert_array_equal(moved.positions[0], path.positions[0])
    assert_array_equal(moved.positions[-1], path.positions[-1])
    assert_array_equal(moved.interior(), interior)


def test_interior_is_a_copy(sphere1):
    path = MeshPath.linear(sphere1, sphere1.scaled(1.5), 4)
    interior = path.interior()
    interior += 1.0
    assert not np.array_equal(interior, path.interior())


def test_reversed(sphere1):
    path = MeshPath.from_radii(sphere1, (0, 0, 0), [1.0, 1.2, 1.7])
    assert_array_equal(path.reversed().positions, path.positions[::-1])


def test_mismatched_meshes(sphere1, sphere2):
    with pytest.raises(CombinatoricsMismatchError):
        MeshPath.linear(sphere1, sphere2, 3)
    with pytest.raises(CombinatoricsMismatchError):
        MeshPath.from_meshes([sphere1, sphere2])


def test_needs_two_timesteps(sphere1):
    with pytest.raises(PreconditionError):
        MeshPath(sphere1.topology, sphere1.vertices[None])
    with pytest.raises(PreconditionError):
        MeshPath.linear(sphere1, sphere1, 0)


def test_degenerate_timestep_is_named(sphere1):
    positions = [sphere1.vertices, sphere1.vertices, 0.0 * sphere1.vertices]
    with pytest.raises(DegenerateMeshError) as info:
        MeshPath(sphere1.topology, positions)
    assert info.value.timestep == 2


def test_permuted_path(rng):
    sphere = make_icosphere(1)
    path = MeshPath.from_radii(sphere, (0, 0, 0), [1.0, 2.0])
    permutation = rng.permutation(sphere.n_vertices)
    relabelled = path.permuted(permutation)
    assert_allclose(relabelled.positions, path.positions[:, permutation])


def test_transformed(sphere1, rotation):
    path = MeshPath.from_radii(sphere1, (0, 0, 0), [1.0, 2.0])
    moved = path.transformed(rotation, (1.0, 2.0, 3.0))
    assert_allclose(moved.positions[1], sphere1.vertices @ rotation.T * 2.0 + (1.0, 2.0, 3.0))


def test_meshes_share_topology(sphere1):
    path = MeshPath.linear(sphere1, sphere1.scaled(2.0), 3)
    assert all(mesh.topology is sphere1.topology for mesh in path.meshes())
