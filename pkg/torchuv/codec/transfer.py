import numpy as np

from ..exceptions import ShapeError
from .location import sample_bilinear
from .types import GridTensor, as_resolution

__all__ = ["transfer_to_uv", "transfer_to_image"]


def _grid_values(image):
    values = getattr(image, "values", image)
    values = np.asarray(values, dtype=np.float64)
    if values.ndim == 2:
        values = values[:, :, None]
    return values


def _check_size(values, iuv):
    if values.shape[:2] != iuv.resolution:
        raise ShapeError(
            "image of size {} does not match IUV image of size {}".format(
                values.shape[:2], iuv.resolution
            )
        )


def transfer_to_uv(image, iuv, resolution, threshold=0.5):
    r"""Scatters image space features into UV space through an IUV image.

    Every pixel with ``fore >= threshold`` adds its feature vector to the texel containing
    its ``(u, v)``. Each texel holds the mean of what it received, so the result does not
    depend on pixel order; texels that received nothing hold ``0``.

    Args:
        image (GridTensor or numpy.ndarray): ``(h, w, C)`` features.
        iuv (IUVImage): Correspondences of the same size.
        resolution (int or tuple): ``N`` or ``(H, W)`` of the UV grid.
        threshold (float, optional): Foreground threshold in ``[0, 1]``.

    Returns:
        A tuple ``(GridTensor, counts)`` where ``counts`` is the ``(H, W)`` number of
        contributions per texel.

    Raises:
        ValueError: If ``threshold`` is outside ``[0, 1]``.
    """
    values = _grid_values(image)
    _check_size(values, iuv)
    fore = iuv.foreground(threshold)
    height, width = as_resolution(resolution)
    uv = iuv.uv[fore]
    c = np.clip(np.floor(uv[:, 0] * width).astype(np.int64), 0, width - 1)
    r = np.clip(np.floor(uv[:, 1] * height).astype(np.int64), 0, height - 1)
    flat = r * width + c
    counts = np.bincount(flat, minlength=height * width)
    sums = np.zeros((height * width, values.shape[2]))
    np.add.at(sums, flat, values[fore])
    hit = counts > 0
    sums[hit] /= counts[hit, None]
    return (
        GridTensor(sums.reshape(height, width, -1)),
        counts.reshape(height, width).astype(np.float64),
    )


def transfer_to_image(location_map, iuv, threshold=0.5):
    r"""Gathers a location map back into image space through an IUV image.

    Args:
        location_map (LocationMap): The map to sample.
        iuv (IUVImage): Correspondences.
        threshold (float, optional): Foreground threshold in ``[0, 1]``.

    Returns:
        A ``(h, w, 3)`` ``GridTensor`` holding the bilinearly sampled 3D point of every
        foreground pixel and ``0`` elsewhere.
    """
    fore = iuv.foreground(threshold)
    out = np.zeros(iuv.resolution + (3,))
    if fore.any():
        out[fore] = sample_bilinear(location_map, iuv.uv[fore])
    return GridTensor(out)
