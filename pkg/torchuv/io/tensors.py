import numpy as np

from ..codec.types import GridTensor, IUVImage, LocationMap
from ..exceptions import ShapeError
from .uvt import read_uvt, write_uvt

__all__ = [
    "save_location_map",
    "load_location_map",
    "save_iuv",
    "load_iuv",
    "save_grid",
    "load_grid",
    "save_mask",
    "load_mask",
]


def _load(path, rank, channels=None):
    array = read_uvt(path)
    if array.ndim != rank or (channels is not None and array.shape[-1] != channels):
        raise ShapeError(
            "{}: expected a rank {} tensor{}, found shape {}".format(
                path,
                rank,
                "" if channels is None else " with {} channels".format(channels),
                list(array.shape),
            )
        )
    return array


def save_location_map(path, location_map):
    r"""Stores a location map as ``(H, W, 4)`` float32: ``x, y, z, mask``."""
    write_uvt(path, location_map.to_array().astype(np.float32))


def load_location_map(path):
    return LocationMap.from_array(_load(path, 3, 4).astype(np.float64))


def save_iuv(path, iuv):
    r"""Stores an IUV image as ``(h, w, 3)`` float32: ``fore, u, v``."""
    write_uvt(path, iuv.to_array().astype(np.float32))


def load_iuv(path):
    return IUVImage.from_array(_load(path, 3, 3).astype(np.float64))


def save_grid(path, grid):
    r"""Stores a grid as ``(H, W, C)`` float32, or any float array (count maps are ``(H, W)``)."""
    write_uvt(path, np.asarray(getattr(grid, "values", grid), dtype=np.float32))


def load_grid(path):
    array = read_uvt(path)
    if array.ndim not in (2, 3):
        raise ShapeError(
            "{}: expected an (H, W) or (H, W, C) grid, found shape {}".format(
                path, list(array.shape)
            )
        )
    return GridTensor(array.astype(np.float64))


def save_mask(path, mask):
    r"""Stores a boolean ``(H, W)`` mask as uint8."""
    write_uvt(path, np.asarray(mask, dtype=bool).astype(np.uint8))


def load_mask(path):
    return _load(path, 2) > 0
