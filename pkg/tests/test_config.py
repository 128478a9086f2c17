# SPDX-FileCopyrightText: 2026 shapegeo contributors
#
# SPDX-License-Identifier: MIT

import json

import numpy as np
import pytest
from numpy.testing import assert_allclose

from shapegeo.config import (
    THREADS_VARIABLE,
    DeformConfig,
    ExperimentConfig,
    MeshConfig,
    SphereConfig,
    config_hash,
    load_config,
    thread_count,
)
from shapegeo.errors import ConfigError
from shapegeo.meshfile import save_mesh
from shapegeo.phi import PhiSpec


def test_defaults():
    config = ExperimentConfig.from_dict({})
    assert config.phi is None
    assert config.timesteps == 50
    assert config.output == "out"
    assert config.mesh.level == 2
    assert config.solver.penalty_weight == 1.0
    assert config.deform is None and config.sphere is None


def test_full_document():
    config = ExperimentConfig.from_dict(
        {
            "phi": {"A": 1.0, "k": 1, "B": 1.0, "l": 1},
            "solver": {"lambda": 0.5, "max_iterations": 20},
            "mesh": {"level": 1, "end_radius": 1.5, "end_offset": [1, 0, 0]},
            "timesteps": 8,
            "deform": {"amplitude": 0.05},
            "sphere": {"B": 10.0, "r1": 3.0, "sweep": [1, 2]},
        }
    )
    assert config.phi == PhiSpec(A=1.0, k=1, B=1.0, l=1)
    assert config.solver.penalty_weight == 0.5
    assert config.mesh.end_offset == (1.0, 0.0, 0.0)
    assert config.deform.amplitude == 0.05
    assert config.sphere.params.B == 10.0
    assert config.sphere.sweep == (1.0, 2.0)
    again = ExperimentConfig.from_dict(json.loads(json.dumps(config.to_dict())))
    assert again.to_dict() == config.to_dict()


@pytest.mark.parametrize(
    "data",
    [
        {"colour": "blue"},
        {"timesteps": 1},
        {"timesteps": 2.5},
        {"timesteps": True},
        {"phi": {"A": -1}},
        {"phi": []},
        {"solver": {"memory": 0}},
        {"mesh": {"level": 2, "shape": "torus"}},
        {"mesh": {"start": "a.off"}},
        {"mesh": {"center": [0, 0]}},
        {"mesh": {"start_radius": 0}},
        {"deform": {"width": 0}},
        {"sphere": {"r0": -1}},
        {"sphere": {"sweep": [-1]}},
        {"sphere": {"B": -2}},
    ],
)
def test_invalid_documents(data):
    with pytest.raises(ConfigError) as info:
        ExperimentConfig.from_dict(data)
    assert info.value.exit_code == 2


def test_load_config(tmp_path):
    path = tmp_path / "experiment.json"
    path.write_text(json.dumps({"timesteps": 4, "mesh": {"level": 0}}), encoding="utf-8")
    config = load_config(path)
    assert config.timesteps == 4
    assert config.mesh.level == 0


def test_load_config_reports_json_errors(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"timesteps": 4,\n', encoding="utf-8")
    with pytest.raises(ConfigError, match="invalid JSON"):
        load_config(path)
    with pytest.raises(ConfigError, match="cannot read"):
        load_config(tmp_path / "missing.json")


def test_config_hash_is_canonical():
    assert config_hash({"a": 1, "b": [1, 2]}) == config_hash({"b": [1, 2], "a": 1})
    assert config_hash({"a": 1}) != config_hash({"a": 2})
    assert len(config_hash({})) == 64


def test_thread_count(monkeypatch):
    monkeypatch.setenv(THREADS_VARIABLE, "3")
    assert thread_count() == 3
    monkeypatch.delenv(THREADS_VARIABLE)
    assert thread_count() >= 1
    for value in ("0", "many"):
        monkeypatch.setenv(THREADS_VARIABLE, value)
        with pytest.raises(ConfigError):
            thread_count()


def test_mesh_config_builds_spheres():
    start, end = MeshConfig.from_dict(
        {"level": 1, "start_radius": 1.0, "end_radius": 2.0, "end_offset": [3, 0, 0]}
    ).build()
    assert start.same_combinatorics(end)
    assert_allclose(np.linalg.norm(end.vertices - (3.0, 0.0, 0.0), axis=1), 2.0)


def test_mesh_config_loads_files(tmp_path, sphere1):
    save_mesh(sphere1, tmp_path / "a.off")
    save_mesh(sphere1.scaled(2.0), tmp_path / "b.off")
    config = MeshConfig.from_dict({"start": "a.off", "end": "b.off"})
    start, end = config.build(tmp_path)
    assert_allclose(end.vertices, 2.0 * start.vertices)


def test_mesh_config_rejects_level():
    with pytest.raises(ConfigError):
        MeshConfig.from_dict({"level": 12}).build()


def test_deform_config_applies_bumps(sphere2):
    start, end = DeformConfig.from_dict({"amplitude": 0.1}).apply(sphere2, sphere2.scaled(2.0))
    assert start.same_combinatorics(end)
    assert np.max(np.linalg.norm(start.vertices, axis=1)) == pytest.approx(1.1, rel=1e-2)
    top = int(np.argmax(sphere2.vertices[:, 2]))
    side = int(np.argmax(sphere2.vertices[:, 0]))
    assert np.linalg.norm(start.vertices[top]) > np.linalg.norm(start.vertices[side])
    assert np.linalg.norm(end.vertices[side]) > np.linalg.norm(end.vertices[top])


def test_sphere_config_defaults():
    config = SphereConfig.from_dict({})
    assert (config.r0, config.r1, config.t_end, config.dt) == (1.0, 2.0, 1.0, 1e-3)
    assert config.epsilon is None
    assert SphereConfig.from_dict({"epsilon": 0.01}).epsilon == 0.01
