import os
from warnings import warn

import numpy as np

from ..exceptions import DataError, MeshError
from .trimesh import TriangleMesh

__all__ = [
    "load_mesh",
    "save_obj",
    "load_pairs",
    "save_pairs",
    "load_seam_map",
    "save_seam_map",
    "load_indices",
    "save_indices",
]


def _parse_corner(token, n_v, n_vt, lineno):
    parts = token.split("/")
    try:
        vi = int(parts[0])
        ti = int(parts[1]) if len(parts) > 1 and parts[1] != "" else None
    except ValueError:
        raise MeshError("bad face corner '{}'".format(token), line=lineno)
    # OBJ indices are 1-based, negative ones count back from the last record
    vi = vi - 1 if vi > 0 else n_v + vi
    if ti is not None:
        ti = ti - 1 if ti > 0 else n_vt + ti
    return vi, ti


def load_mesh(path, symmetric_pairs=None, per_vertex_uv=False):
    r"""Reads an ASCII OBJ file holding a triangle mesh.

    Only ``v``, ``vt`` and ``f`` records are interpreted; other records are skipped. ``vt``
    coordinates are kept when they are in one-to-one correspondence with the vertices (same
    count, every corner referencing ``vt`` index equal to its ``v`` index). The file's v axis
    points up while torchuv stores v pointing down, so ``v = 1 - v_file`` on load.

    Args:
        path (str): Path of the OBJ file.
        symmetric_pairs (array-like, optional): Mirror pairs forwarded to ``TriangleMesh``.
        per_vertex_uv (bool, optional): When the ``vt`` records are not one-to-one (a
            multi-chart map with split seams), give every vertex the ``vt`` of the first face
            corner that uses it instead of ignoring them.

    Returns:
        A tuple ``(mesh, atlas)`` where ``atlas`` is a ``torchuv.atlas.UVAtlas`` built from the
        ``vt`` records or ``None``.

    Raises:
        MeshError: On a malformed record (with its line number), an out of range index,
            a degenerate face or a non-manifold edge.
    """
    from ..atlas.atlas import UVAtlas

    positions, uvs, faces, corner_uvs = [], [], [], []
    with open(path, "r") as fp:
        for lineno, line in enumerate(fp, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            tokens = line.split()
            tag = tokens[0]
            try:
                if tag == "v":
                    if len(tokens) < 4:
                        raise ValueError
                    positions.append([float(t) for t in tokens[1:4]])
                elif tag == "vt":
                    if len(tokens) < 3:
                        raise ValueError
                    uvs.append([float(tokens[1]), float(tokens[2])])
                elif tag == "f":
                    if len(tokens) != 4:
                        raise MeshError(
                            "only triangles are supported, got {} corners".format(
                                len(tokens) - 1
                            ),
                            line=lineno,
                        )
                    corners = [
                        _parse_corner(t, len(positions), len(uvs), lineno)
                        for t in tokens[1:]
                    ]
                    for vi, ti in corners:
                        if vi < 0 or vi >= len(positions):
                            raise MeshError(
                                "face index {} out of range for {} vertices".format(
                                    vi + 1, len(positions)
                                ),
                                line=lineno,
                            )
                    faces.append([c[0] for c in corners])
                    corner_uvs.append([c[1] for c in corners])
            except ValueError:
                raise MeshError(
                    "cannot parse '{}' record".format(tag), line=lineno
                )
    if len(positions) == 0:
        raise MeshError("{} contains no vertices".format(path))
    mesh = TriangleMesh(
        np.array(positions), np.array(faces, dtype=np.int64).reshape(-1, 3),
        symmetric_pairs,
    )
    atlas = None
    if len(uvs) > 0:
        one_to_one = len(uvs) == len(positions) and all(
            t is None or t == v
            for f, tf in zip(faces, corner_uvs)
            for v, t in zip(f, tf)
        )
        if not one_to_one and per_vertex_uv:
            uv = _first_corner_uvs(path, uvs, faces, corner_uvs, len(positions))
            atlas = UVAtlas(uv, faces=mesh.faces)
        elif one_to_one:
            uv = np.array(uvs)
            uv[:, 1] = 1.0 - uv[:, 1]
            atlas = UVAtlas(uv, faces=mesh.faces)
        else:
            warn(
                "{}: vt records are not one-to-one with vertices, ignoring them".format(
                    path
                )
            )
    return mesh, atlas


def save_obj(path, mesh, atlas=None):
    r"""Writes ``mesh`` (and optionally one ``vt`` per vertex from ``atlas``) as ASCII OBJ.

    Coordinates are written with 17 significant digits so a reload reproduces them exactly.
    """
    lines = []
    for p in mesh.positions.tolist():
        lines.append("v {!r} {!r} {!r}".format(*p))
    if atlas is not None:
        if atlas.n_vertices != mesh.n_vertices:
            raise DataError(
                "atlas has {} coordinates for {} vertices".format(
                    atlas.n_vertices, mesh.n_vertices
                )
            )
        for u, v in atlas.coords.tolist():
            lines.append("vt {!r} {!r}".format(u, 1.0 - v))
        for a, b, c in (mesh.faces + 1).tolist():
            lines.append("f {0}/{0} {1}/{1} {2}/{2}".format(a, b, c))
    else:
        for a, b, c in (mesh.faces + 1).tolist():
            lines.append("f {} {} {}".format(a, b, c))
    _write_lines(path, lines)


def _write_lines(path, lines):
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w") as fp:
        fp.write("\n".join(lines) + "\n")


def _read_int_rows(path, width, tag=None):
    rows = []
    with open(path, "r") as fp:
        for lineno, line in enumerate(fp, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            tokens = line.split()
            if tag is not None:
                if tokens[0] != tag:
                    raise DataError(
                        "{} line {}: expected '{}' record".format(
                            path, lineno, tag
                        )
                    )
                tokens = tokens[1:]
            if len(tokens) != width:
                raise DataError(
                    "{} line {}: expected {} integers".format(
                        path, lineno, width
                    )
                )
            try:
                rows.append([int(t) for t in tokens])
            except ValueError:
                raise DataError(
                    "{} line {}: expected integers".format(path, lineno)
                )
    return np.array(rows, dtype=np.int64).reshape(-1, width)


def load_pairs(path):
    r"""Reads ``i j`` symmetric vertex pairs, one per line."""
    return _read_int_rows(path, 2)


def save_pairs(path, mesh):
    _write_lines(
        path, ["{} {}".format(i, j) for i, j in mesh.symmetric_pairs.tolist()]
    )


def load_seam_map(path):
    r"""Reads an ``open_idx orig_idx`` sidecar and returns the ``orig_idx`` array.

    Raises:
        DataError: If the open indices are not exactly ``0 .. n-1``.
    """
    rows = _read_int_rows(path, 2)
    order = np.argsort(rows[:, 0], kind="stable")
    rows = rows[order]
    if not np.array_equal(rows[:, 0], np.arange(len(rows))):
        raise DataError(
            "{}: open indices must cover 0..{} exactly once".format(
                path, len(rows) - 1
            )
        )
    return rows[:, 1]


def save_seam_map(path, seam_map):
    _write_lines(
        path,
        ["{} {}".format(i, int(j)) for i, j in enumerate(np.asarray(seam_map))],
    )


def load_indices(path):
    r"""Reads whitespace separated vertex indices (seed lists and similar)."""
    with open(path, "r") as fp:
        text = fp.read()
    values = []
    for line in text.splitlines():
        values.extend(line.split("#", 1)[0].split())
    try:
        return np.array([int(v) for v in values], dtype=np.int64)
    except ValueError:
        raise DataError("{}: expected integer vertex indices".format(path))


def save_indices(path, indices):
    _write_lines(path, [" ".join(str(int(i)) for i in indices)])


def _first_corner_uvs(path, uvs, faces, corner_uvs, n_vertices):
    uv = np.full((n_vertices, 2), np.nan)
    for f, tf in zip(faces, corner_uvs):
        for v, t in zip(f, tf):
            if t is not None and np.isnan(uv[v, 0]):
                if t < 0 or t >= len(uvs):
                    raise MeshError(
                        "{}: vt index {} out of range".format(path, t + 1)
                    )
                uv[v] = uvs[t]
    missing = np.nonzero(np.isnan(uv[:, 0]))[0]
    if len(missing) > 0:
        raise MeshError(
            "{}: vertex {} has no vt coordinate".format(path, int(missing[0]))
        )
    uv[:, 1] = 1.0 - uv[:, 1]
    return uv
