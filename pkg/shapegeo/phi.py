# SPDX-FileCopyrightText: 2026 shapegeo contributors
#
# SPDX-License-Identifier: MIT

"""
`phi`
================================================================================

The curvature weight ``Phi = 1 + A*Tr(L)**(2k) + B*det(L)**(2l)`` and the
almost-local inner product it defines on vector fields along a mesh,
``G(h, k) = ∫ Phi <h, k> vol``.

``l`` may be a half-integer; ``det(L)**(2l)`` then means ``|det(L)|**(2l)``.


* Author(s): shapegeo contributors

"""
import math
from dataclasses import asdict, dataclass
from typing import Optional, Tuple

import numpy as np

from shapegeo.curvature import CurvatureField, compute_curvature
from shapegeo.errors import CombinatoricsMismatchError, ConfigError
from shapegeo.mesh import TriMesh, as_vertex_field

__version__ = "0.0.0-auto.0"
__repo__ = "https://github.com/shapegeo/shapegeo.git"


@dataclass(frozen=True)
class PhiSpec:
    # pylint: disable=invalid-name
    """Parameters of the weight function.

    :param A: Weight of the mean curvature term, ``>= 0``.
    :param k: Half the mean curvature exponent, a positive integer.
    :param B: Weight of the Gauss curvature term, ``>= 0``.
    :param l: Half the Gauss curvature exponent, an integer or half-integer ``>= 1/2``.
    :param include_mean: Drop the mean curvature term when ``False``.
    :param include_gauss: Drop the Gauss curvature term when ``False``.
    """

    A: float = 0.0
    k: int = 1
    B: float = 0.0
    l: float = 1.0
    include_mean: bool = True
    include_gauss: bool = True

    def __post_init__(self) -> None:
        if not (math.isfinite(self.A) and self.A >= 0):
            raise ConfigError(f"A must be a non-negative number, got {self.A}")
        if not (math.isfinite(self.B) and self.B >= 0):
            raise ConfigError(f"B must be a non-negative number, got {self.B}")
        if int(self.k) != self.k or self.k < 1:
            raise ConfigError(f"k must be a positive integer, got {self.k}")
        if self.l < 0.5 or int(2 * self.l) != 2 * self.l:
            raise ConfigError(f"l must be an integer or half-integer >= 1/2, got {self.l}")

    @classmethod
    def from_dict(cls, data: dict) -> "PhiSpec":
        """Build from a JSON object such as ``{"A": 0, "k": 1, "B": 1, "l": 1}``.

        :raises ConfigError: on unknown keys or out-of-range values.
        """
        known = {"A", "k", "B", "l", "include_mean", "include_gauss"}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown phi keys: {sorted(unknown)}")
        try:
            return cls(
                A=float(data.get("A", 0.0)),
                k=int(data.get("k", 1)),
                B=float(data.get("B", 0.0)),
                l=float(data.get("l", 1.0)),
                include_mean=bool(data.get("include_mean", True)),
                include_gauss=bool(data.get("include_gauss", True)),
            )
        except (TypeError, ValueError) as error:
            if isinstance(error, ConfigError):
                raise
            raise ConfigError(f"bad phi value: {error}") from error

    def to_dict(self) -> dict:
        """JSON-ready parameters."""
        return asdict(self)

    @property
    def mean_weight(self) -> float:
        """Effective ``A`` after the ``include_mean`` switch."""
        return self.A if self.include_mean else 0.0

    @property
    def gauss_weight(self) -> float:
        """Effective ``B`` after the ``include_gauss`` switch."""
        return self.B if self.include_gauss else 0.0

    @property
    def is_constant(self) -> bool:
        """``True`` for the unweighted L² metric, ``Phi == 1``."""
        return self.mean_weight == 0.0 and self.gauss_weight == 0.0

    def value(self, mean, gauss) -> np.ndarray:
        """``Phi(Tr(L), det(L))``."""
        mean = np.asarray(mean, dtype=float)
        return self.value_from_mean_sq(mean * mean, gauss)

    def value_from_mean_sq(self, mean_sq, gauss) -> np.ndarray:
        """``Phi`` written in terms of ``Tr(L)**2``, which is how the path energy sees it."""
        mean_sq = np.asarray(mean_sq, dtype=float)
        gauss = np.asarray(gauss, dtype=float)
        return (
            1.0
            + self.mean_weight * mean_sq**self.k
            + self.gauss_weight * np.abs(gauss) ** (2.0 * self.l)
        )

    def d_mean(self, mean) -> np.ndarray:
        """``∂Phi/∂Tr(L) = 2k A Tr(L)**(2k-1)``."""
        mean = np.asarray(mean, dtype=float)
        return 2.0 * self.k * self.mean_weight * mean ** (2 * self.k - 1)

    def d_mean_sq(self, mean_sq) -> np.ndarray:
        """``∂Phi/∂(Tr(L)**2) = k A (Tr(L)**2)**(k-1)``."""
        mean_sq = np.asarray(mean_sq, dtype=float)
        return self.k * self.mean_weight * mean_sq ** (self.k - 1)

    def d_gauss(self, gauss) -> np.ndarray:
        """``∂Phi/∂det(L) = 2l B sign(det L) |det L|**(2l-1)``."""
        gauss = np.asarray(gauss, dtype=float)
        return (
            2.0
            * self.l
            * self.gauss_weight
            * np.sign(gauss)
            * np.abs(gauss) ** (2.0 * self.l - 1.0)
        )

    def on_sphere(self, radius, n: int = 3) -> np.ndarray:
        """``Phi`` on a round sphere: ``Tr(L) = -(n-1)/r``, ``det(L) = 1/(-r)**(n-1)``."""
        radius = np.asarray(radius, dtype=float)
        return self.value(-(n - 1) / radius, (-1.0) ** (n - 1) / radius ** (n - 1))


def phi_eval(spec: PhiSpec, field: CurvatureField) -> np.ndarray:
    """Per-vertex ``Phi`` values, all positive."""
    return spec.value(field.mean_curvature, field.gauss_curvature)


class TangentVectorField:
    """A vector at every vertex of a mesh (a field along the immersion).

    :param mesh: The mesh the field lives on.
    :param values: ``(V, 3)`` vectors.
    """

    def __init__(self, mesh: TriMesh, values) -> None:
        self.mesh = mesh
        self.values = as_vertex_field(mesh, values, vector=True)

    def __add__(self, other: "TangentVectorField") -> "TangentVectorField":
        _check_same_mesh(self.mesh, other.mesh)
        return TangentVectorField(self.mesh, self.values + other.values)

    def __mul__(self, factor: float) -> "TangentVectorField":
        return TangentVectorField(self.mesh, factor * self.values)

    __rmul__ = __mul__


def _check_same_mesh(mesh: TriMesh, other: TriMesh) -> None:
    if other is mesh:
        return
    if not (mesh.same_combinatorics(other) and np.array_equal(mesh.vertices, other.vertices)):
        raise CombinatoricsMismatchError("vector fields live on different meshes")


def g_phi_inner(
    spec: PhiSpec,
    mesh: TriMesh,
    h: TangentVectorField,
    k: TangentVectorField,
    field: Optional[CurvatureField] = None,
) -> float:
    """``G_f(h, k) = sum Phi(p) <h(p), k(p)> vertex_area(p)``.

    :param spec: Weight function.
    :param mesh: Footpoint immersion.
    :param h: First field.
    :param k: Second field.
    :param field: Precomputed curvature of ``mesh``, if available.
    """
    _check_same_mesh(mesh, h.mesh)
    _check_same_mesh(mesh, k.mesh)
    field = field or compute_curvature(mesh)
    weights = phi_eval(spec, field) * field.vertex_area
    return math.fsum(weights * np.einsum("vd,vd->v", h.values, k.values))


def g_phi_norm(spec: PhiSpec, mesh: TriMesh, h: TangentVectorField) -> float:
    """``sqrt(G_f(h, h))``."""
    return math.sqrt(g_phi_inner(spec, mesh, h, h))


def horizontal_inner(spec: PhiSpec, mesh: TriMesh, a, b) -> float:
    """``G_f(a ν, b ν) = ∫ Phi a b vol`` for normal speeds ``a`` and ``b``."""
    field = compute_curvature(mesh)
    a = as_vertex_field(mesh, a)
    b = as_vertex_field(mesh, b)
    return math.fsum(phi_eval(spec, field) * a * b * field.vertex_area)


def normal_decompose(
    mesh: TriMesh, field: CurvatureField, h: TangentVectorField
) -> Tuple[np.ndarray, TangentVectorField]:
    """Split ``h = h_perp ν + h_tan`` with ``h_perp = <h, ν>``.

    :return: ``(h_perp, h_tan)``.
    """
    _check_same_mesh(mesh, h.mesh)
    h_perp = np.einsum("vd,vd->v", h.values, field.unit_normal)
    h_tan = h.values - h_perp[:, None] * field.unit_normal
    return h_perp, TangentVectorField(mesh, h_tan)
