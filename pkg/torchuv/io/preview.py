import os

import numpy as np
import torch
import torchvision
from PIL import Image

__all__ = [
    "iuv_preview",
    "location_preview",
    "save_png",
    "save_contact_sheet",
]


def iuv_preview(iuv):
    r"""8-bit RGB view of an IUV image: ``u`` in red, ``v`` in green, ``fore`` in blue."""
    rgb = np.stack([iuv.uv[:, :, 0], iuv.uv[:, :, 1], iuv.fore], axis=2)
    rgb[iuv.fore <= 0, :2] = 0.0
    return np.round(np.clip(rgb, 0.0, 1.0) * 255.0).astype(np.uint8)


def location_preview(location_map):
    r"""8-bit RGB view of a location map, each channel stretched over its range on the mask."""
    values, mask = location_map.values, location_map.mask
    rgb = np.zeros(values.shape)
    if mask.any():
        low = values[mask].min(axis=0)
        span = values[mask].max(axis=0) - low
        span[span == 0] = 1.0
        rgb[mask] = (values[mask] - low) / span
    return np.round(rgb * 255.0).astype(np.uint8)


def save_png(path, rgb):
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    Image.fromarray(np.ascontiguousarray(rgb, dtype=np.uint8)).save(path)


def save_contact_sheet(path, images, nrow=4):
    r"""Tiles equally sized 8-bit RGB images into one PNG.

    Args:
        path (str): Destination file.
        images (list): ``(h, w, 3)`` uint8 arrays.
        nrow (int, optional): Number of images in each row of the sheet.
    """
    if not images:
        return
    batch = torch.stack(
        [torch.from_numpy(np.asarray(im)).permute(2, 0, 1) for im in images]
    ).float() / 255.0
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    grid = torchvision.utils.make_grid(batch, nrow=nrow, padding=2)
    torchvision.utils.save_image(grid, path)
