import numpy as np
import torch

from ..exceptions import DataError, ShapeError

__all__ = [
    "Camera",
    "GridTensor",
    "LocationMap",
    "IUVImage",
    "project",
    "as_resolution",
]

MIN_MAP_RESOLUTION = 8


def as_resolution(resolution, minimum=1):
    r"""Turns ``N`` or ``(H, W)`` into an ``(H, W)`` tuple of ints.

    Raises:
        ShapeError: If either side is below ``minimum``.
    """
    if np.isscalar(resolution):
        resolution = (resolution, resolution)
    height, width = (int(r) for r in resolution)
    if height < minimum or width < minimum:
        raise ShapeError(
            "resolution {}x{} is below the minimum of {}x{}".format(
                height, width, minimum, minimum
            )
        )
    return height, width


class Camera(object):
    r"""Weak-perspective camera ``pi(X) = s * (X_x, X_y) + (t_x, t_y)``.

    Image rows grow with ``y``; depth only orders visibility and ``+z`` points toward the
    camera.

    Args:
        scale (float): Pixels per meter. Must be positive.
        tx (float): Horizontal offset in pixels.
        ty (float): Vertical offset in pixels.
    """

    def __init__(self, scale, tx=0.0, ty=0.0):
        scale, tx, ty = float(scale), float(tx), float(ty)
        if not scale > 0 or not np.isfinite([scale, tx, ty]).all():
            raise DataError(
                "camera scale must be positive and finite, got {}".format(scale)
            )
        self.scale = scale
        self.tx = tx
        self.ty = ty

    @classmethod
    def parse(cls, text):
        r"""Reads the command line form ``s,tx,ty``."""
        try:
            values = [float(v) for v in text.split(",")]
        except ValueError:
            values = []
        if len(values) != 3:
            raise ValueError(
                "camera must be given as s,tx,ty, got '{}'".format(text)
            )
        return cls(*values)

    @classmethod
    def from_dict(cls, record):
        try:
            return cls(record["scale"], record["tx"], record["ty"])
        except (KeyError, TypeError):
            raise DataError(
                "camera record needs scale, tx and ty, got {}".format(record)
            )

    def to_dict(self):
        return {"scale": self.scale, "tx": self.tx, "ty": self.ty}

    def translated(self, dx, dy):
        return Camera(self.scale, self.tx + dx, self.ty + dy)

    def __repr__(self):
        return "Camera(scale={}, tx={}, ty={})".format(
            self.scale, self.tx, self.ty
        )


def project(points, camera):
    r"""Projects 3D points into the image with ``camera``.

    Args:
        points (numpy.ndarray or torch.Tensor): ``(..., 3)`` points in meters.
        camera (Camera): The camera.

    Returns:
        ``(..., 2)`` pixel coordinates of the same array type as ``points``.
    """
    if torch.is_tensor(points):
        offset = torch.tensor(
            [camera.tx, camera.ty], dtype=points.dtype, device=points.device
        )
    else:
        points = np.asarray(points, dtype=np.float64)
        offset = np.array([camera.tx, camera.ty])
    return camera.scale * points[..., :2] + offset


class GridTensor(object):
    r"""An ``H x W x C`` grid of scalars: image features, UV features or weights.

    Args:
        values (array-like): ``(H, W)`` or ``(H, W, C)`` finite values.
    """

    def __init__(self, values):
        values = np.array(values, dtype=np.float64)
        if values.ndim == 2:
            values = values[:, :, None]
        if values.ndim != 3:
            raise ShapeError(
                "grid must have shape (H, W, C), got {}".format(values.shape)
            )
        if not np.all(np.isfinite(values)):
            raise DataError("grid values must be finite")
        self.values = values

    @property
    def resolution(self):
        return self.values.shape[:2]

    @property
    def channels(self):
        return self.values.shape[2]

    def __repr__(self):
        return "GridTensor(shape={})".format(self.values.shape)


class LocationMap(object):
    r"""A mesh stored as an image: every covered texel holds a 3D surface point.

    Args:
        values (array-like): ``(H, W, 3)`` coordinates in meters.
        mask (array-like): ``(H, W)`` flags of the texels covered by the chart.

    Raises:
        DataError: If a masked texel is not finite.
    """

    def __init__(self, values, mask):
        values = np.array(values, dtype=np.float64)
        mask = np.array(mask, dtype=bool)
        if values.ndim != 3 or values.shape[2] != 3:
            raise ShapeError(
                "location map must have shape (H, W, 3), got {}".format(
                    values.shape
                )
            )
        if mask.shape != values.shape[:2]:
            raise ShapeError(
                "mask shape {} does not match map shape {}".format(
                    mask.shape, values.shape[:2]
                )
            )
        if not np.all(np.isfinite(values[mask])):
            raise DataError("location map has non-finite values on its mask")
        values[~mask] = 0.0
        self.values = values
        self.mask = mask

    @property
    def resolution(self):
        return self.values.shape[:2]

    def to_array(self):
        r"""``(H, W, 4)`` layout ``x, y, z, mask`` used by the UVT container."""
        return np.concatenate(
            [self.values, self.mask[:, :, None].astype(np.float64)], axis=2
        )

    @classmethod
    def from_array(cls, array):
        array = np.asarray(array)
        if array.ndim != 3 or array.shape[2] != 4:
            raise ShapeError(
                "location map array must have shape (H, W, 4), got {}".format(
                    array.shape
                )
            )
        return cls(array[:, :, :3], array[:, :, 3] > 0.5)

    def __repr__(self):
        return "LocationMap(resolution={}, covered={})".format(
            self.resolution, int(self.mask.sum())
        )


class IUVImage(object):
    r"""Per-pixel foreground probability and UV coordinate of the visible surface.

    With a single-chart atlas the classic part index degenerates to the foreground channel.

    Args:
        fore (array-like): ``(h, w)`` values in ``[0, 1]``.
        uv (array-like): ``(h, w, 2)`` coordinates in ``[0, 1]``, meaningful on foreground.
    """

    def __init__(self, fore, uv):
        fore = np.array(fore, dtype=np.float64)
        uv = np.array(uv, dtype=np.float64)
        if fore.ndim != 2 or uv.shape != fore.shape + (2,):
            raise ShapeError(
                "IUV image needs fore (h, w) and uv (h, w, 2), got {} and {}".format(
                    fore.shape, uv.shape
                )
            )
        if not np.all(np.isfinite(fore)) or fore.min(initial=0.0) < 0.0 or (
            fore.max(initial=0.0) > 1.0
        ):
            raise DataError("foreground values must lie in [0, 1]")
        if not np.all(np.isfinite(uv)):
            raise DataError("IUV coordinates must be finite")
        self.fore = fore
        self.uv = uv

    @property
    def resolution(self):
        return self.fore.shape

    def foreground(self, threshold=0.5):
        r"""Boolean mask of the pixels with ``fore >= threshold``."""
        if not 0.0 <= threshold <= 1.0:
            raise ValueError(
                "threshold must lie in [0, 1], got {}".format(threshold)
            )
        return self.fore >= threshold

    def to_array(self):
        r"""``(h, w, 3)`` layout ``fore, u, v`` used by the UVT container."""
        return np.concatenate([self.fore[:, :, None], self.uv], axis=2)

    @classmethod
    def from_array(cls, array):
        array = np.asarray(array)
        if array.ndim != 3 or array.shape[2] != 3:
            raise ShapeError(
                "IUV array must have shape (h, w, 3), got {}".format(array.shape)
            )
        return cls(array[:, :, 0], array[:, :, 1:])

    def __repr__(self):
        return "IUVImage(resolution={})".format(self.resolution)
