# SPDX-FileCopyrightText: 2026 shapegeo contributors
#
# SPDX-License-Identifier: MIT

"""
`momenta`
================================================================================

Momenta of the translation, rotation and reparametrisation symmetries along
a discrete path. They are constant along geodesics, so their drift measures
how far a computed path is from one.

Each interval is evaluated at its midpoint mesh with the forward-difference
velocity, like the path energy.


* Author(s): shapegeo contributors

"""
import csv
import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from shapegeo.curvature import check_corner_geometry, corner_geometry, vertex_geometry
from shapegeo.errors import PreconditionError
from shapegeo.path import MeshPath
from shapegeo.phi import PhiSpec

__version__ = "0.0.0-auto.0"
__repo__ = "https://github.com/shapegeo/shapegeo.git"

logger = logging.getLogger(__name__)

CSV_HEADER = ("t", "Lx", "Ly", "Lz", "Ax", "Ay", "Az", "reparam_norm")


@dataclass(frozen=True)
class MomentumSample:
    # pylint: disable=too-many-instance-attributes
    """Momenta of one interval.

    :param t: Midpoint time of the interval.
    :param linear: Sum of the momentum density ``m``.
    :param angular: ``sum x × m``, the 3-vector of ``x ∧ m``.
    :param reparam_norm: Metric norm of the tangential density, ``sqrt(sum weight |v_tan|² area)``.
    :param linear_scale: ``sum |m|``, the size linear momentum is measured against.
    :param angular_scale: ``sum |x| |m|``.
    :param reparam_scale: Metric speed of the interval.
    """

    t: float
    linear: np.ndarray
    angular: np.ndarray
    reparam_norm: float
    linear_scale: float = 0.0
    angular_scale: float = 0.0
    reparam_scale: float = 0.0

    def to_row(self) -> Tuple[float, ...]:
        """Values in :data:`CSV_HEADER` order."""
        return (
            float(self.t),
            *(float(x) for x in self.linear),
            *(float(x) for x in self.angular),
            float(self.reparam_norm),
        )


def _fsum_vector(values: np.ndarray) -> np.ndarray:
    return np.array([math.fsum(values[:, d]) for d in range(values.shape[1])])


def momenta_along_path(
    spec: PhiSpec, path: MeshPath, tangential_weight: Optional[float] = None
) -> List[MomentumSample]:
    """Linear, angular and reparametrisation momenta of every interval.

    The metric weighs the normal speed by ``Phi`` and the tangential velocity
    by ``tangential_weight``, so the momentum density is
    ``(Phi u ν + weight v_tan) area``. With the default weight ``Phi`` this
    is ``Phi v area``. Paths computed by the solver should pass its penalty
    weight ``lambda``: their energy is that metric, and its momenta are the
    ones the discrete optimum conserves.

    :param spec: Weight function.
    :param path: Path with at least one interval.
    :param tangential_weight: Weight of ``|v_tan|²``; ``None`` means ``Phi``.
    :raises DegenerateMeshError: if a midpoint mesh is degenerate.
    :raises PreconditionError: if ``tangential_weight`` is negative.
    """
    if tangential_weight is not None and tangential_weight < 0:
        raise PreconditionError(f"tangential weight must be >= 0, got {tangential_weight}")
    topology = path.topology
    midpoints = path.midpoints()
    corners = corner_geometry(topology, midpoints)
    check_corner_geometry(corners, path.area_floor)
    geometry = vertex_geometry(topology, corners)
    velocities = path.velocities()
    phi = spec.value_from_mean_sq(geometry.mean_curvature_sq, geometry.gauss_curvature)
    if tangential_weight is None:
        weight = phi
    else:
        weight = np.full_like(phi, float(tangential_weight))

    samples = []
    for i, t in enumerate(path.midpoint_times):
        v = velocities[i]
        x = midpoints[i]
        n = geometry.unit_normal[i]
        area = geometry.vertex_area[i]
        u = np.einsum("vd,vd->v", v, n)
        tangential = v - u[:, None] * n
        tangential_sq = np.einsum("vd,vd->v", tangential, tangential)
        normal_part = (phi[i] * u)[:, None] * n
        density = area[:, None] * (normal_part + weight[i][:, None] * tangential)
        magnitude = np.linalg.norm(density, axis=1)
        samples.append(
            MomentumSample(
                t=float(t),
                linear=_fsum_vector(density),
                angular=_fsum_vector(np.cross(x, density)),
                reparam_norm=math.sqrt(math.fsum(weight[i] * area * tangential_sq)),
                linear_scale=math.fsum(magnitude),
                angular_scale=math.fsum(np.linalg.norm(x, axis=1) * magnitude),
                reparam_scale=math.sqrt(
                    math.fsum(area * (phi[i] * u**2 + weight[i] * tangential_sq))
                ),
            )
        )
    return samples


@dataclass(frozen=True)
class ConservationReport:
    """Drift of each momentum from its time mean, relative to its scale.

    A drift is ``max_i |m_i - mean(m)|`` divided by the larger of
    ``max_i |m_i|`` and the largest scale of the intervals. Zero over zero
    counts as zero.
    """

    linear: float
    angular: float
    reparam: float
    threshold: float

    @property
    def violated(self) -> Tuple[str, ...]:
        """Names of the momenta whose drift reaches the threshold."""
        return tuple(
            name
            for name in ("linear", "angular", "reparam")
            if not getattr(self, name) < self.threshold
        )

    @property
    def passed(self) -> bool:
        """``True`` if every drift is below the threshold."""
        return not self.violated

    def to_dict(self) -> dict:
        """JSON-ready drifts and verdict."""
        return {
            "linear": self.linear,
            "angular": self.angular,
            "reparam": self.reparam,
            "threshold": self.threshold,
            "passed": self.passed,
            "violated": list(self.violated),
        }


def _drift(values: np.ndarray, scale: float) -> float:
    values = values.reshape(len(values), -1)
    deviation = float(np.max(np.linalg.norm(values - values.mean(axis=0), axis=1)))
    scale = max(float(np.max(np.linalg.norm(values, axis=1))), scale)
    if scale == 0.0:
        return 0.0
    return deviation / scale


def conservation_report(
    samples: Sequence[MomentumSample], threshold: float = 1e-2
) -> ConservationReport:
    """How well the momenta of a path are conserved.

    :param samples: Output of :func:`momenta_along_path`, at least two.
    :param threshold: Largest relative drift that passes.
    """
    if len(samples) < 2:
        raise PreconditionError(f"need at least two momentum samples, got {len(samples)}")
    report = ConservationReport(
        linear=_drift(
            np.array([s.linear for s in samples]), max(s.linear_scale for s in samples)
        ),
        angular=_drift(
            np.array([s.angular for s in samples]), max(s.angular_scale for s in samples)
        ),
        reparam=_drift(
            np.array([s.reparam_norm for s in samples]), max(s.reparam_scale for s in samples)
        ),
        threshold=threshold,
    )
    if not report.passed:
        logger.warning("momentum drift above %g: %s", threshold, ", ".join(report.violated))
    return report


def momenta_to_csv(samples: Sequence[MomentumSample], path) -> None:
    """Write one :data:`CSV_HEADER` row per interval."""
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(CSV_HEADER)
        for sample in samples:
            writer.writerow([repr(x) for x in sample.to_row()])
