# SPDX-FileCopyrightText: 2026 shapegeo contributors
#
# SPDX-License-Identifier: MIT

"""
`errors`
================================================================================

Exceptions raised by shapegeo.

Every class carries an ``exit_code`` that the command line maps to the process
exit status: 2 for bad input files, 3 for violated preconditions, 1 otherwise.

"""

__version__ = "0.0.0-auto.0"
__repo__ = "https://github.com/shapegeo/shapegeo.git"


class ShapeGeoError(Exception):
    """Base class of all shapegeo errors."""

    exit_code = 1


class MeshParseError(ShapeGeoError, ValueError):
    """A mesh file could not be parsed.

    :param message: What went wrong.
    :param path: The file being read.
    :param line: 1-based line number, or ``None`` if unknown.
    """

    exit_code = 2

    def __init__(self, message: str, path=None, line=None) -> None:
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}"
            if line is not None:
                where += f":{line}"
            where += ": "
        super().__init__(where + message)


class MeshTopologyError(ShapeGeoError, ValueError):
    """The mesh is not a closed, consistently oriented 2-manifold.

    :param message: What went wrong.
    :param simplex: The offending vertex index, edge or face.
    """

    exit_code = 2

    def __init__(self, message: str, simplex=None) -> None:
        self.simplex = simplex
        super().__init__(message)


class DegenerateMeshError(ShapeGeoError, ValueError):
    """A triangle fell below the area floor, or a vertex star has no vector area.

    :param message: What went wrong.
    :param face: Offending face index, if any.
    :param vertex: Offending vertex index, if any.
    :param timestep: Timestep of a path where it happened, if any.
    :param iteration: Optimizer iteration where it happened, if any.
    """

    exit_code = 3

    # pylint: disable=too-many-arguments
    def __init__(
        self, message: str, *, face=None, vertex=None, timestep=None, iteration=None
    ) -> None:
        self.face = face
        self.vertex = vertex
        self.timestep = timestep
        self.iteration = iteration
        details = []
        if timestep is not None:
            details.append(f"timestep {timestep}")
        if iteration is not None:
            details.append(f"iteration {iteration}")
        if details:
            message = f"{message} ({', '.join(details)})"
        super().__init__(message)


class CombinatoricsMismatchError(ShapeGeoError, ValueError):
    """Two meshes or fields that must share one face array do not."""

    exit_code = 3


class PreconditionError(ShapeGeoError, ValueError):
    """An argument is outside its documented domain."""

    exit_code = 3


class BracketingError(ShapeGeoError, RuntimeError):
    """Shooting could not bracket the initial velocity.

    :param message: What went wrong.
    :param interval: The last ``(low, high)`` interval tried.
    """

    exit_code = 4

    def __init__(self, message: str, interval=None) -> None:
        self.interval = interval
        if interval is not None:
            message = f"{message} (tried r_t(0) in [{interval[0]:g}, {interval[1]:g}])"
        super().__init__(message)


class ConfigError(ShapeGeoError, ValueError):
    """A configuration document failed validation."""

    exit_code = 2
