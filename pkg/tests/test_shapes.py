# SPDX-FileCopyrightText: 2026 shapegeo contributors
#
# SPDX-License-Identifier: MIT

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from shapegeo.errors import PreconditionError
from shapegeo.shapes import bump_deform, make_cube, make_ellipsoid


def test_ellipsoid_volume():
    mesh = make_ellipsoid(4, axes=(2.0, 1.0, 0.5), center=(1.0, 1.0, 1.0))
    expected = 4.0 / 3.0 * math.pi * 2.0 * 1.0 * 0.5
    assert mesh.enclosed_volume() == pytest.approx(expected, rel=1e-2)
    assert_allclose(mesh.vertices.mean(axis=0), (1.0, 1.0, 1.0), atol=1e-12)


def test_ellipsoid_rejects_axes():
    with pytest.raises(PreconditionError):
        make_ellipsoid(1, axes=(1.0, 0.0, 1.0))
    with pytest.raises(PreconditionError):
        make_ellipsoid(1, axes=(1.0, 1.0))


@pytest.mark.parametrize("divisions", [1, 2, 3])
def test_cube_counts(divisions):
    cube = make_cube(divisions)
    assert cube.n_faces == 12 * divisions**2
    assert cube.n_vertices == 6 * divisions**2 + 2
    assert cube.euler_characteristic == 2
    assert cube.enclosed_volume() == pytest.approx(1.0, abs=1e-12)


def test_cube_size_and_origin():
    cube = make_cube(2, size=2.0, origin=(-1.0, -1.0, -1.0))
    assert cube.enclosed_volume() == pytest.approx(8.0, abs=1e-12)
    assert_allclose(cube.vertices.min(axis=0), (-1.0, -1.0, -1.0))
    assert_allclose(cube.vertices.max(axis=0), (1.0, 1.0, 1.0))


@pytest.mark.parametrize("kwargs", [{"divisions": 0}, {"divisions": 1.5}, {"size": -1.0}])
def test_cube_rejects(kwargs):
    with pytest.raises(PreconditionError):
        make_cube(**kwargs)


def test_zero_bump_is_identity(sphere2):
    assert_array_equal(bump_deform(sphere2, 0.0).vertices, sphere2.vertices)


def test_bump_peaks_in_its_direction(sphere2):
    bumped = bump_deform(sphere2, 0.2, direction=(0.0, 0.0, 2.0), width=0.5)
    radii = np.linalg.norm(bumped.vertices, axis=1)
    top = int(np.argmax(sphere2.vertices[:, 2]))
    bottom = int(np.argmin(sphere2.vertices[:, 2]))
    assert radii[top] == pytest.approx(1.2, rel=1e-2)
    assert radii[bottom] == pytest.approx(1.0, abs=1e-3)
    assert bumped.enclosed_volume() > sphere2.enclosed_volume()
    assert bumped.same_combinatorics(sphere2)


def test_bump_rejects_bad_arguments(sphere1):
    with pytest.raises(PreconditionError):
        bump_deform(sphere1, 0.1, direction=(0.0, 0.0, 0.0))
    with pytest.raises(PreconditionError):
        bump_deform(sphere1, 0.1, width=0.0)
