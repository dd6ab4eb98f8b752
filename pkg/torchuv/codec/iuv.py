import warnings

import numpy as np

from .raster import interpolate, rasterize
from .types import IUVImage, as_resolution, project

__all__ = ["render_iuv", "render_faces"]


def render_faces(mesh, camera, size):
    r"""Z-buffered face visibility of ``mesh`` under ``camera``.

    Returns:
        ``(face_index, bary)`` over an ``h x w`` image; see ``rasterize``.
    """
    height, width = as_resolution(size)
    points = project(mesh.positions, camera)
    return rasterize(
        points, mesh.faces, height, width, depth=mesh.positions[:, 2]
    )


def render_iuv(mesh, atlas, camera, size):
    r"""Renders the ground truth IUV image of a posed mesh.

    A pixel whose centre is covered by the projected surface gets ``fore = 1`` and the UV
    coordinate of the visible point, interpolated barycentrically in the nearest face
    (largest ``z``; ties go to the lower face index). Other pixels get ``fore = 0`` and
    ``uv = (0, 0)``.

    Args:
        mesh (TriangleMesh): The chart mesh or the source mesh of a cut atlas.
        atlas (UVAtlas): The layout supplying the UV coordinates.
        camera (Camera): The camera.
        size (int or tuple): ``N`` or ``(h, w)``.

    Returns:
        An ``IUVImage``. A mesh entirely outside the frame gives an all-background image and
        a warning.
    """
    chart = atlas.chart_mesh(mesh)
    face_index, bary = render_faces(chart, camera, size)
    fore = face_index >= 0
    if not fore.any():
        warnings.warn(
            "mesh is entirely outside the {}x{} frame of {}".format(
                face_index.shape[0], face_index.shape[1], camera
            )
        )
    uv = interpolate(face_index, bary, chart.faces, atlas.coords)
    return IUVImage(fore.astype(np.float64), np.clip(uv, 0.0, 1.0))
