import numpy as np
from scipy.sparse import csgraph

from ..exceptions import DataError, TopologyError
from .location import rasterize_atlas
from .raster import interpolate
from .types import GridTensor

__all__ = ["vertex_weights", "weight_map"]


def vertex_weights(mesh, seeds, alpha=2.0):
    r"""Per-vertex weights growing with the surface distance from the torso.

    .. math:: w_i = 1 + \alpha \frac{d_i}{\max_j d_j}

    where :math:`d_i` is the edge-length graph distance from vertex :math:`i` to the nearest
    seed.

    Args:
        mesh (TriangleMesh): Connected mesh the seeds index into.
        seeds (array-like): Non-empty list of seed vertices.
        alpha (float, optional): Weight added at the farthest vertex.

    Returns:
        ``(n,)`` weights in ``[1, 1 + alpha]``.

    Raises:
        DataError: If ``seeds`` is empty or out of range.
        TopologyError: If a vertex cannot be reached from any seed.
    """
    seeds = np.unique(np.asarray(seeds, dtype=np.int64).ravel())
    if len(seeds) == 0:
        raise DataError("weight map needs at least one torso seed")
    if seeds.min() < 0 or seeds.max() >= mesh.n_vertices:
        raise DataError(
            "torso seed out of range for a mesh of {} vertices".format(
                mesh.n_vertices
            )
        )
    if alpha < 0:
        raise ValueError("alpha must be nonnegative, got {}".format(alpha))
    d = csgraph.dijkstra(
        mesh.adjacency("edge-length"), directed=False, indices=seeds, min_only=True
    )
    if not np.all(np.isfinite(d)):
        raise TopologyError(
            "vertex {} is not reachable from any torso seed".format(
                int(np.nonzero(~np.isfinite(d))[0][0])
            ),
            components=mesh.n_components(),
        )
    far = d.max()
    if far == 0:
        return np.ones(mesh.n_vertices)
    return 1.0 + alpha * d / far


def weight_map(mesh, atlas, torso_seeds, alpha=2.0, resolution=128):
    r"""Rasterizes ``vertex_weights`` into UV space.

    Distances are measured on ``mesh`` as given: pass the closed source mesh of a cut atlas
    so the seam does not lengthen paths.

    Args:
        mesh (TriangleMesh): The source mesh or the chart mesh; the seeds index into it.
        atlas (UVAtlas): The layout.
        torso_seeds (array-like): Seed vertices of ``mesh``.
        alpha (float, optional): Weight added at the farthest vertex.
        resolution (int or tuple): ``N`` or ``(H, W)``; at least ``8 x 8``.

    Returns:
        A single channel ``GridTensor``, ``0`` on texels outside the chart.
    """
    w = vertex_weights(mesh, torso_seeds, alpha)
    chart = atlas.chart_mesh(mesh)
    if chart is not mesh and atlas.seam_map is not None and (
        mesh.n_vertices != atlas.n_vertices
    ):
        w = w[atlas.seam_map]
    face_index, bary = rasterize_atlas(atlas, chart.faces, resolution)
    return GridTensor(interpolate(face_index, bary, chart.faces, w))
