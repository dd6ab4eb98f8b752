import os

import numpy as np

from ..exceptions import DataError, ShapeError
from ..mesh.trimesh import TriangleMesh

__all__ = ["UVAtlas", "SeamSpec", "signed_areas", "fold_overs"]

# slack for coordinates written out with limited precision
_RANGE_EPS = 1e-9


def signed_areas(coords, faces):
    r"""Signed area of every UV triangle; positive for faces in chart orientation.

    Args:
        coords (numpy.ndarray): ``(n, 2)`` UV coordinates.
        faces (numpy.ndarray): ``(m, 3)`` vertex indices.

    Returns:
        ``(m,)`` array of signed areas.
    """
    p = np.asarray(coords, dtype=np.float64)[faces]
    return 0.5 * (
        (p[:, 1, 0] - p[:, 0, 0]) * (p[:, 2, 1] - p[:, 0, 1])
        - (p[:, 2, 0] - p[:, 0, 0]) * (p[:, 1, 1] - p[:, 0, 1])
    )


def fold_overs(atlas, faces=None):
    r"""Indices of the faces of ``atlas`` whose signed UV area is not positive.

    Args:
        atlas (UVAtlas): The layout to check.
        faces (numpy.ndarray, optional): Faces to use when the atlas carries none.
    """
    faces = atlas.faces if faces is None else faces
    if faces is None:
        raise ShapeError("fold-over check needs the chart faces")
    return np.nonzero(~(signed_areas(atlas.coords, faces) > 0))[0]


class UVAtlas(object):
    r"""Per-vertex UV coordinates of a single chart.

    Coordinates live in the unit square with u growing to the right and v growing downward,
    the row direction of every raster torchuv produces (OBJ files store ``1 - v``). A texel
    ``(r, c)`` of an ``H x W`` raster covers ``[c/W, (c+1)/W) x [r/H, (r+1)/H)``.

    Args:
        coords (array-like): ``(n, 2)`` coordinates within ``[0, 1]^2``.
        seam_map (array-like, optional): For an atlas of a cut mesh, the source vertex of
            every chart vertex. ``None`` means the identity.
        faces (array-like, optional): ``(m, 3)`` chart faces indexing ``coords``. ``None``
            means the faces of whatever mesh the atlas is combined with.

    Raises:
        DataError: If a coordinate lies outside the unit square.
    """

    def __init__(self, coords, seam_map=None, faces=None):
        coords = np.array(coords, dtype=np.float64)
        if coords.ndim != 2 or coords.shape[1] != 2:
            raise ShapeError(
                "UV coordinates must have shape (n, 2), got {}".format(
                    coords.shape
                )
            )
        if not np.all(np.isfinite(coords)):
            raise DataError("UV coordinates must be finite")
        outside = np.nonzero(
            (coords < -_RANGE_EPS).any(1) | (coords > 1 + _RANGE_EPS).any(1)
        )[0]
        if len(outside) > 0:
            raise DataError(
                "UV coordinate of vertex {} is outside the unit square: {}".format(
                    int(outside[0]), coords[outside[0]].tolist()
                )
            )
        coords = np.clip(coords, 0.0, 1.0)
        coords.setflags(write=False)
        self.coords = coords
        if seam_map is not None:
            seam_map = np.array(seam_map, dtype=np.int64)
            if seam_map.shape != (len(coords),):
                raise ShapeError(
                    "seam map has {} entries for {} coordinates".format(
                        seam_map.size, len(coords)
                    )
                )
            seam_map.setflags(write=False)
        self.seam_map = seam_map
        if faces is not None:
            faces = np.array(faces, dtype=np.int64).reshape(-1, 3)
            if faces.size and (faces.min() < 0 or faces.max() >= len(coords)):
                raise ShapeError("atlas face index out of range")
            faces.setflags(write=False)
        self.faces = faces

    @property
    def n_vertices(self):
        return self.coords.shape[0]

    @property
    def n_source_vertices(self):
        if self.seam_map is None:
            return self.n_vertices
        return int(self.seam_map.max()) + 1 if len(self.seam_map) else 0

    def with_coords(self, coords):
        r"""Same chart bookkeeping with new coordinates."""
        return UVAtlas(coords, self.seam_map, self.faces)

    def source_coords(self):
        r"""One coordinate per source vertex: the copy with the smallest chart index."""
        if self.seam_map is None:
            return self.coords
        first = np.unique(self.seam_map, return_index=True)
        if len(first[0]) != self.n_source_vertices:
            raise DataError("seam map does not cover every source vertex")
        return self.coords[first[1]]

    def chart_mesh(self, mesh):
        r"""The mesh whose vertices correspond one to one with the atlas coordinates.

        Args:
            mesh (TriangleMesh): Either the chart (open) mesh itself or the source mesh the
                chart was cut from, in any pose.

        Returns:
            A ``TriangleMesh`` with ``n_vertices == atlas.n_vertices``.

        Raises:
            ShapeError: If ``mesh`` matches neither the chart nor its source.
        """
        faces = self.faces if self.faces is not None else mesh.faces
        if mesh.n_vertices == self.n_vertices:
            if faces is mesh.faces or np.array_equal(faces, mesh.faces):
                return mesh
            return TriangleMesh(mesh.positions, faces, validate=False)
        if self.seam_map is not None and mesh.n_vertices == self.n_source_vertices:
            if self.faces is None:
                raise ShapeError(
                    "atlas of a cut mesh needs its chart faces to be combined with the source mesh"
                )
            return TriangleMesh(
                mesh.positions[self.seam_map], faces, validate=False
            )
        raise ShapeError(
            "mesh with {} vertices does not match an atlas of {} coordinates".format(
                mesh.n_vertices, self.n_vertices
            )
        )

    def __repr__(self):
        return "UVAtlas(n_vertices={}, cut={})".format(
            self.n_vertices, self.seam_map is not None
        )


class SeamSpec(object):
    r"""Edges along which a closed mesh is cut open.

    Args:
        edges (array-like): ``(k, 2)`` vertex index pairs.
    """

    def __init__(self, edges=()):
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        self.edges = np.sort(edges, axis=1)

    def __len__(self):
        return len(self.edges)

    def validate(self, mesh):
        r"""Checks that every seam edge is an edge of ``mesh``.

        Raises:
            DataError: Naming the first edge that does not exist.
        """
        known = {tuple(e) for e in mesh.edges().tolist()}
        for a, b in self.edges.tolist():
            if a == b or (a, b) not in known:
                raise DataError(
                    "seam edge ({}, {}) is not an edge of the mesh".format(a, b)
                )

    @classmethod
    def load(cls, path):
        r"""Reads ``edge i j`` lines; ``#`` starts a comment."""
        edges = []
        with open(path, "r") as fp:
            for lineno, line in enumerate(fp, start=1):
                tokens = line.split("#", 1)[0].split()
                if not tokens:
                    continue
                if tokens[0] != "edge" or len(tokens) != 3:
                    raise DataError(
                        "{} line {}: expected 'edge i j'".format(path, lineno)
                    )
                try:
                    edges.append((int(tokens[1]), int(tokens[2])))
                except ValueError:
                    raise DataError(
                        "{} line {}: expected integer indices".format(
                            path, lineno
                        )
                    )
        return cls(edges)

    def save(self, path):
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(path, "w") as fp:
            for a, b in self.edges.tolist():
                fp.write("edge {} {}\n".format(a, b))
