import numpy as np
from scipy import ndimage

from ..exceptions import DataError, ShapeError
from .raster import interpolate, rasterize
from .types import MIN_MAP_RESOLUTION, LocationMap, as_resolution

__all__ = [
    "rasterize_atlas",
    "encode_location_map",
    "reference_location_map",
    "decode_vertices",
    "sample_bilinear",
    "merge_seam_vertices",
]


def rasterize_atlas(atlas, faces, resolution):
    r"""Rasterizes the UV triangles of ``atlas`` at texel centres.

    Args:
        atlas (UVAtlas): The layout.
        faces (numpy.ndarray): Chart faces.
        resolution (int or tuple): ``N`` or ``(H, W)``; at least ``8 x 8``.

    Returns:
        ``(face_index, bary)`` as returned by ``rasterize``.
    """
    height, width = as_resolution(resolution, MIN_MAP_RESOLUTION)
    texel = atlas.coords * np.array([width, height], dtype=np.float64)
    return rasterize(texel, faces, height, width)


def encode_location_map(mesh, atlas, resolution):
    r"""Encodes the surface of ``mesh`` as a location map over the atlas.

    Every texel whose centre lies inside a UV triangle holds the barycentric blend of that
    triangle's 3D vertices; texels on a shared edge belong to one face only and any overlap
    goes to the lower face index.

    Args:
        mesh (TriangleMesh): The chart mesh or the source mesh of a cut atlas, in any pose.
        atlas (UVAtlas): A fold-over free layout.
        resolution (int or tuple): ``N`` or ``(H, W)``; at least ``8 x 8``.

    Returns:
        A ``LocationMap``.

    Raises:
        ShapeError: If the resolution is below ``8 x 8`` or the mesh does not fit the atlas.
    """
    chart = atlas.chart_mesh(mesh)
    face_index, bary = rasterize_atlas(atlas, chart.faces, resolution)
    values = interpolate(face_index, bary, chart.faces, chart.positions)
    return LocationMap(values, face_index >= 0)


def reference_location_map(template, atlas, resolution):
    r"""Location map of the template (mean pose) mesh, the fixed input of the location
    network. Identical to ``encode_location_map``."""
    return encode_location_map(template, atlas, resolution)


def sample_bilinear(location_map, uv):
    r"""Samples a location map at UV coordinates among valid texels.

    Texel centres sit at ``((c + 0.5) / W, (r + 0.5) / H)``. The four texels around a point
    are blended bilinearly; invalid or out of range neighbours are dropped and the remaining
    weights renormalized. A point with no valid neighbour takes the value of the nearest
    valid texel.

    Args:
        location_map (LocationMap): The map.
        uv (numpy.ndarray): ``(n, 2)`` coordinates.

    Returns:
        ``(n, 3)`` points.

    Raises:
        DataError: If the map has no valid texel.
    """
    values, mask = location_map.values, location_map.mask
    if not mask.any():
        raise DataError("location map has an empty mask")
    height, width = mask.shape
    uv = np.asarray(uv, dtype=np.float64).reshape(-1, 2)
    x = uv[:, 0] * width - 0.5
    y = uv[:, 1] * height - 0.5
    c0 = np.floor(x).astype(np.int64)
    r0 = np.floor(y).astype(np.int64)
    fx, fy = x - c0, y - r0
    total = np.zeros(len(uv))
    out = np.zeros((len(uv), values.shape[2]))
    for dr, dc, w in (
        (0, 0, (1 - fy) * (1 - fx)),
        (0, 1, (1 - fy) * fx),
        (1, 0, fy * (1 - fx)),
        (1, 1, fy * fx),
    ):
        r, c = r0 + dr, c0 + dc
        ok = (r >= 0) & (r < height) & (c >= 0) & (c < width)
        ok[ok] = mask[r[ok], c[ok]]
        w = np.where(ok, w, 0.0)
        out[ok] += w[ok, None] * values[r[ok], c[ok]]
        total += w
    found = total > 0
    out[found] /= total[found, None]
    if not found.all():
        # nearest valid texel of the texel containing the point
        _, (near_r, near_c) = ndimage.distance_transform_edt(
            ~mask, return_indices=True
        )
        r = np.clip(np.floor(uv[~found, 1] * height).astype(np.int64), 0, height - 1)
        c = np.clip(np.floor(uv[~found, 0] * width).astype(np.int64), 0, width - 1)
        out[~found] = values[near_r[r, c], near_c[r, c]]
    return out


def decode_vertices(location_map, atlas):
    r"""Reads the 3D position of every atlas vertex off a location map.

    Args:
        location_map (LocationMap): Map produced by the network or by
            ``encode_location_map``.
        atlas (UVAtlas): The layout the map was made with.

    Returns:
        ``(n, 3)`` positions of the chart vertices. Use ``merge_seam_vertices`` to get one
        position per source vertex.
    """
    return sample_bilinear(location_map, atlas.coords)


def merge_seam_vertices(points, seam_map, n_source=None):
    r"""Averages the copies of every cut vertex back onto the source mesh.

    Args:
        points (numpy.ndarray): ``(n, C)`` values of the chart vertices.
        seam_map (array-like or None): Source vertex of every chart vertex.
        n_source (int, optional): Number of source vertices; defaults to
            ``max(seam_map) + 1``.

    Returns:
        ``(n_source, C)`` values.
    """
    points = np.asarray(points, dtype=np.float64)
    if seam_map is None:
        return points
    seam_map = np.asarray(seam_map, dtype=np.int64)
    if len(seam_map) != len(points):
        raise ShapeError(
            "seam map has {} entries for {} points".format(
                len(seam_map), len(points)
            )
        )
    if n_source is None:
        n_source = int(seam_map.max()) + 1 if len(seam_map) else 0
    sums = np.zeros((n_source,) + points.shape[1:])
    np.add.at(sums, seam_map, points)
    counts = np.bincount(seam_map, minlength=n_source)
    if np.any(counts == 0):
        raise DataError(
            "source vertex {} has no chart copy".format(
                int(np.nonzero(counts == 0)[0][0])
            )
        )
    return sums / counts.reshape((-1,) + (1,) * (points.ndim - 1))
