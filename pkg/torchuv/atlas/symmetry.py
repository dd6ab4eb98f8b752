import warnings

import numpy as np

from ..exceptions import DataError, MeshError, ShapeError
from .atlas import fold_overs
from .cut import _open_mirror

__all__ = ["symmetrize_atlas", "mirror_residual", "fit_mirror_axis"]


def _chart_mirror(atlas, mesh):
    if mesh.mirror is None:
        raise DataError("symmetrization needs a mesh with symmetric pairs")
    if mesh.n_vertices == atlas.n_vertices:
        return mesh.mirror
    if (
        atlas.seam_map is not None
        and atlas.faces is not None
        and mesh.n_vertices == atlas.n_source_vertices
    ):
        try:
            return _open_mirror(mesh, atlas.faces)
        except MeshError as e:
            raise DataError(str(e))
    raise ShapeError(
        "mesh with {} vertices does not match an atlas of {} coordinates".format(
            mesh.n_vertices, atlas.n_vertices
        )
    )


def mirror_residual(atlas, mirror):
    r"""Largest deviation from mirror symmetry about ``u = 0.5``.

    Args:
        atlas (UVAtlas): The layout.
        mirror (array-like): Partner of every atlas vertex.

    Returns:
        ``max_i max(|u_i + u_j - 1|, |v_i - v_j|)`` as a float.
    """
    uv = atlas.coords
    other = uv[np.asarray(mirror)]
    if len(uv) == 0:
        return 0.0
    return float(
        max(
            np.abs(uv[:, 0] + other[:, 0] - 1.0).max(),
            np.abs(uv[:, 1] - other[:, 1]).max(),
        )
    )


def fit_mirror_axis(coords, mirror):
    r"""Least-squares reflection mapping the pair-permuted points onto the points.

    The reflection ``x -> R x + t`` (``det R = -1``) is fitted in closed form from the SVD of
    the cross covariance. Its fixed line is the symmetry axis of the layout.

    Args:
        coords (numpy.ndarray): ``(n, 2)`` points.
        mirror (numpy.ndarray): Partner of every point.

    Returns:
        A tuple ``(angle, centre)``: direction angle of the axis in ``(-pi/2, pi/2]`` and the
        projection of the centroid onto the axis.
    """
    p = np.asarray(coords, dtype=np.float64)
    q = p[mirror]
    mu = p.mean(axis=0)
    h = (q - mu).T @ (p - mu)
    u, _, vt = np.linalg.svd(h)
    d = -np.sign(np.linalg.det(vt.T @ u.T))
    if d == 0:
        d = -1.0
    r = vt.T @ np.diag([1.0, d]) @ u.T
    t = mu - r @ mu
    alpha = 0.5 * np.arctan2(r[1, 0], r[0, 0])
    normal = np.array([-np.sin(alpha), np.cos(alpha)])
    centre = mu - normal * (normal @ mu - 0.5 * (normal @ t))
    return float(alpha), centre


def _fit_unit_square(uv):
    u_extent = np.abs(uv[:, 0] - 0.5).max()
    v_low, v_high = uv[:, 1].min(), uv[:, 1].max()
    if u_extent <= 0.5 and v_low >= 0.0 and v_high <= 1.0:
        return uv
    v_mid = 0.5 * (v_low + v_high)
    scale = 1.0
    if u_extent > 0.5:
        scale = 0.5 / u_extent
    if v_high - v_low > 1.0:
        scale = min(scale, 1.0 / (v_high - v_low))
    uv = np.stack(
        [0.5 + scale * (uv[:, 0] - 0.5), v_mid + scale * (uv[:, 1] - v_mid)], 1
    )
    v_low, v_high = uv[:, 1].min(), uv[:, 1].max()
    if v_low < 0.0:
        uv[:, 1] -= v_low
    elif v_high > 1.0:
        uv[:, 1] -= v_high - 1.0
    return uv


def symmetrize_atlas(atlas, mesh):
    r"""Aligns the layout with its fitted symmetry axis and makes it exactly mirror symmetric.

    The axis fitted by ``fit_mirror_axis`` is turned to the vertical by the smallest rotation
    about its centre and moved onto ``u = 0.5``. Every coordinate is then replaced by the
    average of itself and the mirror image of its partner,
    ``u_i <- (u_i + 1 - u_j) / 2`` and ``v_i <- (v_i + v_j) / 2``. A result that leaves the
    unit square is scaled uniformly about ``(0.5, v)`` and shifted back in, which keeps the
    symmetry. A layout that is already symmetric about ``u = 0.5`` is a fixed point.

    Args:
        atlas (UVAtlas): The layout to refine.
        mesh (TriangleMesh): Either the chart mesh or its source mesh, carrying symmetric
            pairs.

    Returns:
        A new ``UVAtlas``. A warning is issued if averaging flipped faces.

    Raises:
        DataError: If ``mesh`` has no symmetric pairs.
    """
    mirror = _chart_mirror(atlas, mesh)
    uv = np.array(atlas.coords)
    if len(uv) == 0:
        return atlas
    alpha, centre = fit_mirror_axis(uv, mirror)
    theta = 0.5 * np.pi - alpha
    if theta > 0.5 * np.pi:
        theta -= np.pi
    if theta != 0.0:
        c, s = np.cos(theta), np.sin(theta)
        rot = np.array([[c, -s], [s, c]])
        uv = (uv - centre) @ rot.T + centre
    uv[:, 0] += 0.5 - centre[0]
    other = uv[mirror]
    uv = np.stack(
        [0.5 * (uv[:, 0] + 1.0 - other[:, 0]), 0.5 * (uv[:, 1] + other[:, 1])], 1
    )
    uv = _fit_unit_square(uv)
    result = atlas.with_coords(np.clip(uv, 0.0, 1.0))
    faces = result.faces if result.faces is not None else mesh.faces
    if len(faces) and len(fold_overs(result, faces)) > 0:
        warnings.warn(
            "symmetrization flipped {} face(s)".format(
                len(fold_overs(result, faces))
            )
        )
    return result
