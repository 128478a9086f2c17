# SPDX-FileCopyrightText: 2026 shapegeo contributors
#
# SPDX-License-Identifier: MIT

import numpy as np
import pytest
from numpy.testing import assert_array_equal

from shapegeo.errors import MeshParseError, MeshTopologyError
from shapegeo.mesh import make_icosphere
from shapegeo.meshfile import load_mesh, save_mesh

from conftest import CUBE_OFF


def test_load_cube(cube_file):
    mesh = load_mesh(cube_file)
    assert (mesh.n_vertices, mesh.n_edges, mesh.n_faces) == (8, 18, 12)
    assert mesh.euler_characteristic == 2


def test_non_manifold_edge(tmp_path):
    text = CUBE_OFF.replace("8 12 18", "9 13 0").replace("0 1 1\n3", "0 1 1\n5 5 5\n3", 1)
    text += "3 0 1 8\n"
    path = tmp_path / "bad.off"
    path.write_text(text, encoding="utf-8")
    with pytest.raises(MeshTopologyError, match="non-manifold") as info:
        load_mesh(path)
    assert info.value.simplex == ("edge", (0, 1))


@pytest.mark.parametrize("fmt", ["off", "obj"])
def test_round_trip(tmp_path, sphere1, fmt):
    path = tmp_path / f"sphere.{fmt}"
    save_mesh(sphere1, path)
    again = load_mesh(path)
    assert_array_equal(again.vertices, sphere1.vertices)
    assert_array_equal(again.faces, sphere1.faces)


def test_perturbed_round_trip_is_exact(tmp_path, rng):
    sphere = make_icosphere(1)
    noisy = sphere.with_vertices(sphere.vertices + 1e-3 * rng.normal(size=sphere.vertices.shape))
    path = tmp_path / "noisy.off"
    save_mesh(noisy, path)
    assert_array_equal(load_mesh(path).vertices, noisy.vertices)


def test_explicit_format_overrides_suffix(tmp_path, sphere1):
    path = tmp_path / "sphere.txt"
    save_mesh(sphere1, path, "obj")
    assert path.read_text(encoding="utf-8").startswith("v ")
    assert load_mesh(path, "obj").n_faces == sphere1.n_faces


def test_off_header_counts(tmp_path, sphere1):
    path = tmp_path / "sphere.off"
    save_mesh(sphere1, path)
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "OFF"
    assert lines[1] == f"{sphere1.n_vertices} {sphere1.n_faces} {sphere1.n_edges}"


def test_missing_header(tmp_path):
    path = tmp_path / "bad.off"
    path.write_text("PLY\n3 1 0\n", encoding="utf-8")
    with pytest.raises(MeshParseError, match="header") as info:
        load_mesh(path)
    assert info.value.line == 1
    assert info.value.exit_code == 2


def test_truncated_file(tmp_path):
    path = tmp_path / "short.off"
    path.write_text("OFF\n3 1 0\n0 0 0\n1 0 0\n", encoding="utf-8")
    with pytest.raises(MeshParseError, match="truncated"):
        load_mesh(path)


def test_bad_coordinate_reports_line(tmp_path):
    path = tmp_path / "bad.off"
    path.write_text(CUBE_OFF.replace("1 1 0\n", "1 x 0\n", 1), encoding="utf-8")
    with pytest.raises(MeshParseError) as info:
        load_mesh(path)
    assert info.value.line == 6
    assert f"{path}:6:" in str(info.value)


def test_quad_is_rejected(tmp_path):
    path = tmp_path / "quad.obj"
    path.write_text("v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n", encoding="utf-8")
    with pytest.raises(MeshParseError, match="triangles"):
        load_mesh(path)


def test_obj_ignores_texture_indices(tmp_path, cube):
    lines = ["v " + " ".join(repr(x) for x in v) for v in cube.vertices.tolist()]
    lines += [f"f {a + 1}/1 {b + 1}/1 {c + 1}/1" for a, b, c in cube.faces.tolist()]
    path = tmp_path / "cube.obj"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    assert_array_equal(load_mesh(path).faces, cube.faces)


def test_unknown_format(tmp_path, sphere1):
    with pytest.raises(MeshParseError, match="unknown mesh format"):
        save_mesh(sphere1, tmp_path / "sphere.stl")


def test_missing_file(tmp_path):
    with pytest.raises(MeshParseError, match="cannot read"):
        load_mesh(tmp_path / "nowhere.off")


def test_unwritable_destination(tmp_path, sphere1):
    with pytest.raises(OSError):
        save_mesh(sphere1, tmp_path / "no" / "such" / "dir" / "sphere.off")


def test_loaded_vertices_are_floats(cube_file):
    assert load_mesh(cube_file).vertices.dtype == np.float64
