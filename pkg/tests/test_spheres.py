# SPDX-FileCopyrightText: 2026 shapegeo contributors
#
# SPDX-License-Identifier: MIT

import csv
import json
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from shapegeo import spheres
from shapegeo.errors import BracketingError, ConfigError, PreconditionError
from shapegeo.momenta import conservation_report, momenta_along_path
from shapegeo.phi import PhiSpec
from shapegeo.solver import SolverConfig, SolveStatus
from shapegeo.spheres import (
    SphereOdeParams,
    SphereState,
    adapted_mean_curvature_spec,
    integrate_sphere_geodesic,
    lift_trajectory,
    lift_translation,
    optimal_translation_radius,
    shrink_path_length,
    solve_sphere_bvp,
    sphere_energy,
    sphere_ode_rhs,
    sphere_reduction_consistency,
    sweep_parameters,
    trajectory_length,
    translate_sphere,
    translation_residual,
)


def closed_form_error(dt):
    trajectory = integrate_sphere_geodesic(SphereOdeParams(), SphereState(1.0, 1.5), 1.0, dt)
    return float(np.max(np.abs(trajectory.r - np.sqrt(1.0 + 3.0 * trajectory.t))))


def test_rhs_values():
    assert sphere_ode_rhs(SphereOdeParams(), SphereState(1.0, 1.0)) == pytest.approx(-1.0)
    assert sphere_ode_rhs(SphereOdeParams(B=1.0, l=1), SphereState(1.0, 1.0)) == pytest.approx(
        0.0, abs=1e-15
    )
    assert sphere_ode_rhs(SphereOdeParams(B=5.0, l=1.5), SphereState(0.7, 0.0)) == 0.0


def test_rhs_rejects_radius():
    with pytest.raises(PreconditionError):
        sphere_ode_rhs(SphereOdeParams(), SphereState(0.0, 1.0))


@pytest.mark.parametrize("kwargs", [{"n": 1}, {"B": -1.0}, {"l": 0.25}])
def test_params_validation(kwargs):
    with pytest.raises(PreconditionError):
        SphereOdeParams(**kwargs)


def test_params_from_dict():
    assert SphereOdeParams.from_dict({"B": 2, "l": 1.5}) == SphereOdeParams(B=2.0, l=1.5)
    with pytest.raises(ConfigError):
        SphereOdeParams.from_dict({"C": 1})
    with pytest.raises(ConfigError):
        SphereOdeParams.from_dict({"B": -3})


def test_closed_form_without_gauss_term():
    assert closed_form_error(1.0 / 50.0) < 1e-5
    assert closed_form_error(1e-3) < 1e-9


def test_fourth_order_convergence():
    ratio = closed_form_error(1.0 / 50.0) / closed_form_error(1.0 / 100.0)
    assert 14.0 <= ratio <= 18.0


def test_energy_is_conserved():
    params = SphereOdeParams(B=1.0, l=1)
    trajectory = integrate_sphere_geodesic(params, SphereState(1.0, 1.0), 1.0, 1e-3)
    assert trajectory.status == "ok"
    drift = np.max(np.abs(trajectory.energy - trajectory.energy[0]))
    assert drift < 1e-8 * trajectory.energy[0]


def test_step_ends_on_t_end():
    trajectory = integrate_sphere_geodesic(SphereOdeParams(), SphereState(1.0, 0.5), 1.0, 0.3)
    assert len(trajectory.t) == 5
    assert trajectory.t[-1] == pytest.approx(1.0)


def test_collapse_is_reported():
    trajectory = integrate_sphere_geodesic(SphereOdeParams(), SphereState(1.0, -10.0), 1.0, 1e-3)
    assert trajectory.status == "collapsed"
    assert trajectory.t[-1] < 0.06
    assert np.all(trajectory.r > 0)


@pytest.mark.parametrize("gauss_weight", [0.0, 1.0, 10.0])
def test_shooting_hits_target(gauss_weight):
    trajectory = solve_sphere_bvp(SphereOdeParams(B=gauss_weight, l=1), 1.0, 2.0)
    assert trajectory.status == "ok"
    assert abs(trajectory.final.r - 2.0) < 1e-8
    assert trajectory.r[0] == 1.0


def test_shooting_without_gauss_term_is_closed_form():
    trajectory = solve_sphere_bvp(SphereOdeParams(), 1.0, 2.0)
    # r**2 is linear in t
    assert_allclose(trajectory.r**2, 1.0 + 3.0 * trajectory.t, atol=1e-7)


def test_equal_radii_stay_put():
    trajectory = solve_sphere_bvp(SphereOdeParams(B=1.0), 1.3, 1.3)
    assert_allclose(trajectory.r, 1.3)
    assert_allclose(trajectory.r_t, 0.0)


def test_time_reversal():
    params = SphereOdeParams(B=1.0, l=1)
    forward = solve_sphere_bvp(params, 1.0, 2.0)
    backward = solve_sphere_bvp(params, 2.0, 1.0)
    assert_allclose(backward.r[::-1], forward.r, atol=1e-7)


def test_bracketing_failure(monkeypatch):
    monkeypatch.setattr(spheres, "MAX_BRACKET_EXPANSIONS", 0)
    with pytest.raises(BracketingError) as info:
        solve_sphere_bvp(SphereOdeParams(), 1.0, 2.0)
    assert info.value.exit_code == 4


def test_trajectory_length():
    trajectory = solve_sphere_bvp(SphereOdeParams(), 1.0, 2.0)
    assert trajectory_length(trajectory) == pytest.approx(3.0 * math.sqrt(math.pi), rel=1e-8)


def test_trajectory_resample_and_csv(tmp_path):
    trajectory = solve_sphere_bvp(SphereOdeParams(), 1.0, 2.0, dt=1e-2)
    assert_allclose(trajectory.resample([0.0, 0.5, 1.0]), np.sqrt([1.0, 2.5, 4.0]), atol=1e-6)
    target = tmp_path / "trajectory.csv"
    trajectory.to_csv(target)
    with open(target, newline="", encoding="utf-8") as handle:
        rows = list(csv.reader(handle))
    assert rows[0] == ["t", "r", "r_t", "energy"]
    assert len(rows) == len(trajectory.t) + 1


@pytest.mark.parametrize("epsilon", [0.5, 1e-3])
def test_shrink_length_without_gauss_term(epsilon):
    assert shrink_path_length(SphereOdeParams(), epsilon) == pytest.approx(
        math.sqrt(math.pi) * (1.0 - epsilon**2), rel=1e-10
    )


def test_shrink_length_diverges_logarithmically():
    params = SphereOdeParams(B=1.0, l=1)
    slope = shrink_path_length(params, 1e-5) - shrink_path_length(params, 1e-4)
    assert slope == pytest.approx(2.0 * math.sqrt(math.pi) * math.log(10.0), rel=2e-2)


def test_shrink_length_converges_for_half_exponent():
    params = SphereOdeParams(B=1.0, l=0.5)
    assert abs(shrink_path_length(params, 1e-8) - shrink_path_length(params, 1e-6)) < 1e-3


def test_shrink_length_preconditions():
    with pytest.raises(PreconditionError):
        shrink_path_length(SphereOdeParams(), 1.0)
    with pytest.raises(PreconditionError):
        shrink_path_length(SphereOdeParams(n=4), 0.5)


def test_optimal_translation_radius():
    assert optimal_translation_radius(1.0, 1.0) == pytest.approx(1.0)
    assert optimal_translation_radius(16.0, 1.0) == pytest.approx(2.0)
    with pytest.raises(PreconditionError):
        optimal_translation_radius(1.0, 0.5)
    with pytest.raises(PreconditionError):
        optimal_translation_radius(0.0, 1.0)


def test_translation_residual_changes_sign():
    radius = optimal_translation_radius(20.0, 1.0)
    assert translation_residual(20.0, 1.0, 0.9 * radius) < 0.0
    assert translation_residual(20.0, 1.0, 1.1 * radius) > 0.0
    assert translation_residual(20.0, 1.0, radius) == pytest.approx(0.0, abs=1e-12)


def test_reduction_agrees_with_general_equation():
    rng = np.random.default_rng(5)
    for _ in range(1000):
        r = float(rng.uniform(0.1, 10.0))
        r_t = float(rng.uniform(-5.0, 5.0))
        spec = PhiSpec(B=float(rng.uniform(0.0, 100.0)), l=float(rng.choice([0.5, 1.0, 1.5, 2.0])))
        report = sphere_reduction_consistency(spec, SphereState(r, r_t))
        assert report.difference <= 1e-12 * max(1.0, r_t * r_t / r)


def test_reduction_needs_gauss_only_weight():
    with pytest.raises(PreconditionError):
        sphere_reduction_consistency(PhiSpec(A=1.0), SphereState(1.0, 1.0))


@pytest.mark.parametrize("half_exponent", [0.5, 1.0, 1.5])
def test_adapted_weight_agrees_on_spheres(half_exponent):
    gauss = PhiSpec(B=3.0, l=half_exponent)
    mean = adapted_mean_curvature_spec(3.0, half_exponent)
    assert mean.gauss_weight == 0.0
    for r in (0.5, 1.0, 2.5):
        assert float(mean.value(-2.0 / r, 0.0)) == pytest.approx(
            float(gauss.value(0.0, 1.0 / r**2)), rel=1e-12
        )


def test_energy_first_integral():
    params = SphereOdeParams(B=2.0, l=1)
    state = SphereState(2.0, 0.5)
    expected = (1.0 + 2.0 / 16.0) * 4.0 * math.pi * 4.0 * 0.25
    assert sphere_energy(params, state) == pytest.approx(expected)


def test_lift_trajectory(sphere1):
    trajectory = solve_sphere_bvp(SphereOdeParams(), 1.0, 2.0)
    path = lift_trajectory(sphere1, trajectory, 4, center=(0.0, 0.0, 1.0))
    radii = np.linalg.norm(path.positions - (0.0, 0.0, 1.0), axis=2)
    assert_allclose(radii[:, 0], np.sqrt(1.0 + 3.0 * path.times), atol=1e-8)


def test_lift_translation(sphere1):
    path = lift_translation(sphere1, (2.0, 0.0, 0.0), 4)
    assert_allclose(path.positions[-1], sphere1.vertices + (2.0, 0.0, 0.0))
    assert_allclose(path.velocities()[0], np.tile((2.0, 0.0, 0.0), (sphere1.n_vertices, 1)))


def test_sweep_parameters():
    params = sweep_parameters()
    assert [p.B for p in params] == [0.1, 1.0, 10.0, 100.0]
    assert all(p.n == 3 and p.l == 1.0 for p in params)


def test_translate_sphere_preconditions():
    with pytest.raises(PreconditionError):
        translate_sphere(0.0, 1.0, 0.5, 2, level=0)
    with pytest.raises(PreconditionError):
        translate_sphere(1.0, 1.0, 0.5, 2, radius=-1.0, level=0)
    with pytest.raises(PreconditionError):
        translate_sphere(1.0, 1.0, 0.5, 2, level=0, direction=(0.0, 0.0, 0.0))


def test_translate_sphere_report():
    config = SolverConfig(max_iterations=3)
    path, report = translate_sphere(16.0, 1.0, 0.5, 2, level=0, config=config)
    assert report.optimal_radius == pytest.approx(2.0)
    assert report.radius == report.optimal_radius
    assert path.timesteps == 3
    assert report.radius_profile.shape == (3,)
    assert report.axis_ratio.shape == (3,)
    assert_allclose(path.positions[-1] - path.positions[0], np.tile((1.0, 0.0, 0.0), (12, 1)))
    data = json.loads(json.dumps(report.to_dict()))
    assert data["status"] == report.solve.status.value
    assert data["middle_radius"] == report.middle_radius


@pytest.mark.slow
def test_translation_at_optimal_radius_stays_rigid():
    path, report = translate_sphere(1.0, 1.0, 0.5, 25)
    assert report.solve.status in (SolveStatus.CONVERGED, SolveStatus.MAX_ITER)
    assert report.deviation < 5e-2
    samples = momenta_along_path(PhiSpec(B=1.0, l=1), path, report.solve.config.stages[-1])
    conservation = conservation_report(samples)
    assert conservation.linear < 1e-2
    assert conservation.passed, conservation.to_dict()


@pytest.mark.slow
@pytest.mark.parametrize("radius", [0.6, 1.5])
def test_translation_scales_towards_optimal_radius(radius):
    _, report = translate_sphere(1.0, 1.0, 1.0, 10, radius=radius)
    assert report.solve.status in (SolveStatus.CONVERGED, SolveStatus.MAX_ITER)
    assert report.toward_optimum
