# SPDX-FileCopyrightText: 2026 shapegeo contributors
#
# SPDX-License-Identifier: MIT

"""
`meshfile`
================================================================================

Reading and writing triangle meshes as OFF or OBJ text.

OFF is the canonical interchange format. Coordinates are written with 17
significant digits so that a save/load round trip reproduces every float.


* Author(s): shapegeo contributors

"""
import logging
from pathlib import Path
from typing import List, Optional, Tuple

from shapegeo.errors import MeshParseError
from shapegeo.mesh import TriMesh

__version__ = "0.0.0-auto.0"
__repo__ = "https://github.com/shapegeo/shapegeo.git"

logger = logging.getLogger(__name__)

FORMATS = ("off", "obj")


def _resolve_format(path: Path, mesh_format: Optional[str]) -> str:
    fmt = (mesh_format or path.suffix.lstrip(".")).lower()
    if fmt not in FORMATS:
        raise MeshParseError(f"unknown mesh format {fmt!r}, expected one of {FORMATS}", path)
    return fmt


def _content_lines(text: str) -> List[Tuple[int, List[str]]]:
    lines = []
    for number, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if stripped:
            lines.append((number, stripped.split()))
    return lines


def _parse_off(text: str, path) -> Tuple[list, list]:
    lines = _content_lines(text)
    if not lines or not lines[0][1][0].upper().endswith("OFF"):
        raise MeshParseError("missing OFF header", path, lines[0][0] if lines else 1)
    header = lines[0][1][1:]
    cursor = 1
    if not header:
        if len(lines) < 2:
            raise MeshParseError("missing counts line", path)
        header = lines[1][1]
        cursor = 2
    counts_line = lines[cursor - 1][0]
    try:
        n_vertices, n_faces = int(header[0]), int(header[1])
    except (IndexError, ValueError) as error:
        raise MeshParseError("counts line must read 'V F E'", path, counts_line) from error
    if len(lines) < cursor + n_vertices + n_faces:
        raise MeshParseError(
            f"expected {n_vertices} vertices and {n_faces} faces, file is truncated", path
        )
    vertices = []
    for number, tokens in lines[cursor : cursor + n_vertices]:
        try:
            vertices.append([float(t) for t in tokens[:3]])
        except ValueError as error:
            raise MeshParseError("bad vertex coordinates", path, number) from error
        if len(vertices[-1]) != 3:
            raise MeshParseError("vertex needs three coordinates", path, number)
    faces = []
    for number, tokens in lines[cursor + n_vertices : cursor + n_vertices + n_faces]:
        try:
            count = int(tokens[0])
            indices = [int(t) for t in tokens[1 : 1 + count]]
        except ValueError as error:
            raise MeshParseError("bad face indices", path, number) from error
        if count != 3 or len(indices) != 3:
            raise MeshParseError(f"only triangles are supported, got a {count}-gon", path, number)
        faces.append(indices)
    return vertices, faces


def _parse_obj(text: str, path) -> Tuple[list, list]:
    vertices = []
    faces = []
    for number, tokens in _content_lines(text):
        kind = tokens[0]
        if kind == "v":
            try:
                vertices.append([float(t) for t in tokens[1:4]])
            except ValueError as error:
                raise MeshParseError("bad vertex coordinates", path, number) from error
            if len(vertices[-1]) != 3:
                raise MeshParseError("vertex needs three coordinates", path, number)
        elif kind == "f":
            if len(tokens) != 4:
                raise MeshParseError(
                    f"only triangles are supported, got {len(tokens) - 1} corners", path, number
                )
            face = []
            for token in tokens[1:]:
                try:
                    index = int(token.split("/", 1)[0])
                except ValueError as error:
                    raise MeshParseError("bad face index", path, number) from error
                face.append(index - 1 if index > 0 else len(vertices) + index)
            faces.append(face)
    return vertices, faces


def load_mesh(path, mesh_format: Optional[str] = None) -> TriMesh:
    """Read a closed triangle mesh.

    The orientation is validated, never repaired.

    :param path: File to read.
    :param mesh_format: ``"off"`` or ``"obj"``; inferred from the suffix if ``None``.
    :raises MeshParseError: if the text is malformed.
    :raises MeshTopologyError: if the mesh is not closed, manifold and consistently oriented.
    """
    path = Path(path)
    fmt = _resolve_format(path, mesh_format)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as error:
        raise MeshParseError(f"cannot read file: {error.strerror}", path) from error
    parse = _parse_off if fmt == "off" else _parse_obj
    vertices, faces = parse(text, path)
    if not faces:
        raise MeshParseError("mesh has no faces", path)
    logger.debug("read %s: %d vertices, %d faces", path, len(vertices), len(faces))
    return TriMesh(vertices, faces)


def save_mesh(mesh: TriMesh, path, mesh_format: Optional[str] = None) -> None:
    """Write a mesh.

    :param mesh: The mesh to write.
    :param path: Destination file.
    :param mesh_format: ``"off"`` or ``"obj"``; inferred from the suffix if ``None``.
    :raises OSError: if the file cannot be written.
    """
    path = Path(path)
    fmt = _resolve_format(path, mesh_format)
    out = []
    if fmt == "off":
        out.append("OFF")
        out.append(f"{mesh.n_vertices} {mesh.n_faces} {mesh.n_edges}")
        out.extend(" ".join(f"{x:.17g}" for x in v) for v in mesh.vertices.tolist())
        out.extend(f"3 {a} {b} {c}" for a, b, c in mesh.faces.tolist())
    else:
        out.extend("v " + " ".join(f"{x:.17g}" for x in v) for v in mesh.vertices.tolist())
        out.extend(f"f {a + 1} {b + 1} {c + 1}" for a, b, c in mesh.faces.tolist())
    path.write_text("\n".join(out) + "\n", encoding="utf-8")
