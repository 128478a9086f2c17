# SPDX-FileCopyrightText: 2026 shapegeo contributors
#
# SPDX-License-Identifier: MIT

import csv
import json

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from shapegeo import solver
from shapegeo.energy import energy_breakdown
from shapegeo.errors import CombinatoricsMismatchError, ConfigError, PreconditionError
from shapegeo.mesh import make_icosphere
from shapegeo.momenta import conservation_report, momenta_along_path
from shapegeo.path import MeshPath
from shapegeo.phi import PhiSpec
from shapegeo.solver import (
    SolverConfig,
    SolveStatus,
    _Stage,
    center_radius_profile,
    initial_path,
    radius_profile_to_csv,
    solve_geodesic_bvp,
)
from shapegeo.spheres import SphereOdeParams, solve_sphere_bvp


def test_identical_endpoints_converge_immediately(sphere1):
    path, report = solve_geodesic_bvp(PhiSpec(A=1.0, B=1.0), sphere1, sphere1, 4)
    assert report.status is SolveStatus.CONVERGED
    assert report.converged
    assert report.iterations == 0
    assert report.final.total == 0.0
    assert_array_equal(path.positions[2], sphere1.vertices)


def test_short_solve_decreases_energy(sphere1):
    end = sphere1.scaled(1.5)
    config = SolverConfig(max_iterations=15)
    path, report = solve_geodesic_bvp(PhiSpec(), sphere1, end, 4, config)
    assert report.iterations <= 15
    assert report.status in (SolveStatus.CONVERGED, SolveStatus.MAX_ITER)
    history = (report.initial.total,) + report.energy_history
    assert all(b <= a for a, b in zip(history, history[1:]))
    assert report.final.total <= report.initial.total
    assert_array_equal(path.positions[0], sphere1.vertices)
    assert_array_equal(path.positions[-1], end.vertices)
    assert len(report.lambda_history) == len(report.energy_history)


def test_report_serialises(sphere1):
    _, report = solve_geodesic_bvp(
        PhiSpec(), sphere1, sphere1.scaled(1.2), 3, SolverConfig(max_iterations=3)
    )
    data = json.loads(json.dumps(report.to_dict()))
    assert data["status"] in ("converged", "max_iter")
    assert data["config"]["max_iterations"] == 3
    assert data["config"]["lambda_schedule"] == [1.0]
    assert data["final"]["total"] == report.final.total


def test_lambda_schedule_runs_every_stage(sphere1):
    config = SolverConfig(max_iterations=2, lambda_schedule=(1.0, 0.5))
    _, report = solve_geodesic_bvp(PhiSpec(), sphere1, sphere1.scaled(1.3), 3, config)
    assert set(report.lambda_history) <= {1.0, 0.5}
    assert report.final.penalty_weight == 0.5


def test_mismatched_endpoints(sphere1, sphere2):
    with pytest.raises(CombinatoricsMismatchError) as info:
        solve_geodesic_bvp(PhiSpec(), sphere1, sphere2, 4)
    assert info.value.exit_code == 3


def test_needs_two_timesteps(sphere1):
    with pytest.raises(PreconditionError):
        solve_geodesic_bvp(PhiSpec(), sphere1, sphere1.scaled(2.0), 1)


def test_perturbed_initialisation_is_reproducible(sphere1):
    config = SolverConfig(initialization="perturbed", perturbation_amplitude=0.05, seed=3)
    first = initial_path(sphere1, sphere1.scaled(2.0), 4, config)
    second = initial_path(sphere1, sphere1.scaled(2.0), 4, config)
    linear = MeshPath.linear(sphere1, sphere1.scaled(2.0), 4)
    assert_array_equal(first.positions, second.positions)
    assert_array_equal(first.positions[0], linear.positions[0])
    assert_array_equal(first.positions[-1], linear.positions[-1])
    offsets = np.linalg.norm(first.interior() - linear.interior(), axis=2)
    assert 0.0 < offsets.max() <= 0.05 + 1e-12


def test_custom_initialisation(sphere1):
    end = sphere1.scaled(2.0)
    guess = MeshPath.from_radii(sphere1, (0, 0, 0), [1.0, 1.5, 1.8, 2.0])
    path = initial_path(sphere1, end, 3, SolverConfig(initialization="custom"), guess)
    assert_allclose(path.positions[1], 1.5 * sphere1.vertices)
    with pytest.raises(PreconditionError):
        initial_path(sphere1, end, 3, SolverConfig(initialization="custom"))
    with pytest.raises(CombinatoricsMismatchError):
        initial_path(sphere1, end, 5, SolverConfig(), guess)


def test_config_from_dict():
    config = SolverConfig.from_dict({"lambda": 0.5, "max_iterations": 10})
    assert config.penalty_weight == 0.5
    assert config.stages == (0.5,)
    assert SolverConfig.from_dict({"lambda_schedule": [1, 0.1]}).stages == (1.0, 0.1)
    assert SolverConfig.from_dict(config.to_dict()).stages == config.stages


@pytest.mark.parametrize(
    "data",
    [
        {"tolerance": 1e-3},
        {"memory": 0},
        {"lambda": -1.0},
        {"lambda": "heavy"},
        {"initialization": "random"},
        {"max_iterations": "many"},
        {"shrink": 1.5},
    ],
)
def test_config_rejects(data):
    with pytest.raises(ConfigError):
        SolverConfig.from_dict(data)


def test_radius_profile_of_sphere_path(tmp_path, sphere2):
    path = MeshPath.from_radii(sphere2, (1.0, 2.0, 3.0), [1.0, 1.5, 2.0])
    profile = center_radius_profile(path)
    assert_allclose(profile.centers, np.tile((1.0, 2.0, 3.0), (3, 1)), atol=1e-12)
    assert_allclose(profile.radius_mean, [1.0, 1.5, 2.0], rtol=1e-12)
    assert profile.sphericity < 1e-12
    assert profile.center_drift < 1e-12
    target = tmp_path / "radius_profile.csv"
    radius_profile_to_csv(profile, target)
    with open(target, newline="", encoding="utf-8") as handle:
        rows = list(csv.reader(handle))
    assert rows[0] == ["t", "cx", "cy", "cz", "radius_mean", "radius_std"]
    assert float(rows[2][0]) == 0.5


def test_worst_status_order():
    assert SolveStatus.worst([]) is SolveStatus.CONVERGED
    assert SolveStatus.worst([SolveStatus.MAX_ITER, SolveStatus.CONVERGED]) is SolveStatus.MAX_ITER
    assert (
        SolveStatus.worst([SolveStatus.LINE_SEARCH_FAILURE, SolveStatus.DEGENERATE_MESH])
        is SolveStatus.DEGENERATE_MESH
    )


def fake_minimize(statuses):
    def minimize(spec, path, weight, config, scale):
        del config, scale
        stage = _Stage(status=statuses[weight], message=f"stopped at {weight}")
        return path, energy_breakdown(spec, path, weight), stage

    return minimize


def test_report_keeps_an_early_stage_failure(monkeypatch, sphere1):
    statuses = {1.0: SolveStatus.MAX_ITER, 0.1: SolveStatus.CONVERGED}
    monkeypatch.setattr(solver, "_minimize", fake_minimize(statuses))
    config = SolverConfig(lambda_schedule=(1.0, 0.1))
    _, report = solve_geodesic_bvp(PhiSpec(), sphere1, sphere1.scaled(1.5), 3, config)
    assert report.stage_statuses == (SolveStatus.MAX_ITER, SolveStatus.CONVERGED)
    assert report.status is SolveStatus.MAX_ITER
    assert not report.converged
    assert "lambda=1" in report.message
    assert report.to_dict()["stage_statuses"] == ["max_iter", "converged"]


def test_line_search_failure_stops_the_schedule(monkeypatch, sphere1):
    statuses = {1.0: SolveStatus.LINE_SEARCH_FAILURE, 0.1: SolveStatus.CONVERGED}
    monkeypatch.setattr(solver, "_minimize", fake_minimize(statuses))
    config = SolverConfig(lambda_schedule=(1.0, 0.1))
    _, report = solve_geodesic_bvp(PhiSpec(), sphere1, sphere1.scaled(1.5), 3, config)
    assert report.stage_statuses == (SolveStatus.LINE_SEARCH_FAILURE,)
    assert report.status is SolveStatus.LINE_SEARCH_FAILURE


def concentric_solve(gauss_weight, timesteps, **settings):
    sphere = make_icosphere(2)
    config = SolverConfig(max_iterations=3000, **settings)
    return solve_geodesic_bvp(
        PhiSpec(B=gauss_weight, l=1), sphere, sphere.scaled(2.0), timesteps, config
    )


@pytest.mark.slow
@pytest.mark.parametrize("gauss_weight", [0.1, 1.0, 10.0, 100.0])
def test_concentric_geodesic_matches_reduced_equation(gauss_weight):
    path, report = concentric_solve(gauss_weight, 50)
    assert path.topology.n_faces == 320
    assert report.status in (SolveStatus.CONVERGED, SolveStatus.MAX_ITER)
    profile = center_radius_profile(path)
    reference = solve_sphere_bvp(SphereOdeParams(B=gauss_weight, l=1), 1.0, 2.0)
    expected = reference.resample(profile.times)
    assert_allclose(profile.radius_mean, expected, rtol=3e-2)
    assert profile.sphericity < 1e-2
    assert profile.center_drift < 1e-2


@pytest.mark.slow
def test_solution_does_not_depend_on_initialisation():
    linear, _ = concentric_solve(1.0, 20, gradient_tolerance=1e-7)
    perturbed, _ = concentric_solve(
        1.0, 20, gradient_tolerance=1e-7, initialization="perturbed", seed=1
    )
    first = center_radius_profile(linear).radius_mean
    second = center_radius_profile(perturbed).radius_mean
    assert_allclose(second, first, rtol=1e-2)


@pytest.mark.slow
def test_momenta_are_conserved_and_improve_with_timesteps():
    drifts = []
    for timesteps in (25, 100):
        path, report = concentric_solve(1.0, timesteps)
        assert report.status in (SolveStatus.CONVERGED, SolveStatus.MAX_ITER)
        samples = momenta_along_path(PhiSpec(B=1.0, l=1), path, report.config.stages[-1])
        conservation = conservation_report(samples)
        assert conservation.passed, conservation.to_dict()
        drifts.append(max(conservation.linear, conservation.angular, conservation.reparam))
    assert drifts[1] <= drifts[0] + 1e-3
