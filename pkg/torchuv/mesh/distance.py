from concurrent.futures import ThreadPoolExecutor

import numpy as np
from scipy.sparse import csgraph
from scipy.spatial.distance import cdist

from ..exceptions import DataError, ShapeError, TopologyError
from ..utils import chunks, num_threads

__all__ = [
    "DistanceMatrix",
    "surface_distance_matrix",
    "uv_distance_matrix",
    "MAX_DENSE_VERTICES",
]

MAX_DENSE_VERTICES = 10000


class DistanceMatrix(object):
    r"""Dense symmetric matrix of pairwise vertex distances.

    Args:
        values (array-like): ``(n, n)`` nonnegative distances with a zero diagonal.
        indices (array-like, optional): Vertex index of every row. Defaults to ``0 .. n-1``;
            differs when the matrix was computed on a strided subset of vertices.
        units (str, optional): ``meters``, ``hops`` or ``uv``. Informative only.
    """

    def __init__(self, values, indices=None, units="meters"):
        values = np.array(values, dtype=np.float64)
        if values.ndim != 2 or values.shape[0] != values.shape[1]:
            raise ShapeError(
                "distance matrix must be square, got {}".format(values.shape)
            )
        values.setflags(write=False)
        self.values = values
        if indices is None:
            indices = np.arange(values.shape[0])
        self.indices = np.asarray(indices, dtype=np.int64)
        self.units = units

    @property
    def n(self):
        return self.values.shape[0]

    def __repr__(self):
        return "DistanceMatrix(n={}, units={})".format(self.n, self.units)


def _sample(n, stride, what):
    if stride is None or stride <= 1:
        indices = np.arange(n)
    else:
        indices = np.arange(0, n, int(stride))
    if len(indices) > MAX_DENSE_VERTICES:
        raise DataError(
            "{} needs a {}x{} dense matrix; pass a sampling stride of at least {}".format(
                what,
                len(indices),
                len(indices),
                int(np.ceil(n / MAX_DENSE_VERTICES)),
            )
        )
    return indices


def surface_distance_matrix(mesh, metric="edge-length", stride=None):
    r"""All-pairs shortest path distances on the vertex-edge graph of ``mesh``.

    Each row is an independent single-source Dijkstra run; rows are computed in blocks on
    ``UVT_THREADS`` workers and the block layout does not affect the values.

    Args:
        mesh (torchuv.mesh.TriangleMesh): A connected mesh.
        metric (str, optional): ``edge-length`` weights each edge by its Euclidean length,
            ``hop-count`` weights every edge by ``1``.
        stride (int, optional): Keep only every ``stride``-th vertex as row/column. Needed
            above ``MAX_DENSE_VERTICES`` vertices.

    Returns:
        A ``DistanceMatrix``.

    Raises:
        TopologyError: If the mesh has more than one connected component.
    """
    components = mesh.n_components()
    if components != 1:
        raise TopologyError(
            "mesh is disconnected: {} components".format(components),
            components=components,
        )
    indices = _sample(mesh.n_vertices, stride, "surface distance matrix")
    adjacency = mesh.adjacency(metric)
    unweighted = metric == "hop-count"

    def rows(block):
        start, stop = block
        d = csgraph.dijkstra(
            adjacency,
            directed=False,
            indices=indices[start:stop],
            unweighted=unweighted,
        )
        return d[:, indices]

    blocks = chunks(len(indices), num_threads())
    if len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=len(blocks)) as pool:
            values = np.concatenate(list(pool.map(rows, blocks)), axis=0)
    else:
        values = rows(blocks[0])
    # a path summed from either end can differ in the last ulp
    values = np.minimum(values, values.T)
    np.fill_diagonal(values, 0.0)
    return DistanceMatrix(
        values, indices, "hops" if unweighted else "meters"
    )


def uv_distance_matrix(atlas, stride=None, collapse_seams=False):
    r"""Euclidean distances between the UV coordinates of every vertex pair.

    Args:
        atlas (torchuv.atlas.UVAtlas): The UV layout.
        stride (int, optional): Keep only every ``stride``-th vertex.
        collapse_seams (bool, optional): For an atlas of a cut mesh, use one coordinate per
            source vertex (the copy with the smallest chart index), so the matrix lines up
            with ``surface_distance_matrix`` of the uncut mesh.

    Returns:
        A ``DistanceMatrix`` in UV units.
    """
    coords = atlas.source_coords() if collapse_seams else atlas.coords
    coords = np.asarray(coords, dtype=np.float64)
    if coords.ndim != 2 or coords.shape[1] != 2:
        raise ShapeError(
            "expected (n, 2) UV coordinates, got {}".format(coords.shape)
        )
    indices = _sample(len(coords), stride, "UV distance matrix")
    sub = coords[indices]
    return DistanceMatrix(cdist(sub, sub), indices, "uv")
