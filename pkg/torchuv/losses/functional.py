import numpy as np
import torch

from ..codec.location import sample_bilinear
from ..codec.types import project
from ..exceptions import DataError, ShapeError
from ..utils import as_float64, reduce
from .weights import COMPONENTS, LossWeights

__all__ = [
    "loss_iuv",
    "loss_map",
    "loss_joints_3d",
    "loss_joints_2d",
    "loss_consistent",
    "loss_total",
    "REDUCTIONS",
]

REDUCTIONS = ("mean", "sum")

# clamp of the predicted foreground probability inside the log
BCE_EPS = 1e-7


def _check_reduction(reduction):
    if reduction not in REDUCTIONS:
        raise ValueError(
            "reduction must be one of {}, got {}".format(REDUCTIONS, reduction)
        )


def _same(a, b, what):
    if tuple(a) != tuple(b):
        raise ShapeError(
            "{} differ in shape: {} and {}".format(what, tuple(a), tuple(b))
        )


def _normalized(total, count, reduction):
    if reduction == "sum":
        return total
    if count == 0:
        return total * 0.0
    return total / count


# IUV Loss


def loss_iuv(pred, gt, lambda_c=0.2, lambda_r=1.0, reduction="mean"):
    r"""Dense correspondence loss of a predicted IUV image.

    ``L_c`` is the binary cross entropy of the foreground channel over every pixel (the
    prediction is clamped to ``[1e-7, 1 - 1e-7]``), ``L_r`` the L1 distance of the UV channels
    over the ground truth foreground. With ``reduction="mean"`` both are averaged per pixel,
    with ``"sum"`` they are raw sums.

    Returns:
        A tuple ``(lambda_c * L_c + lambda_r * L_r, L_c, L_r)`` of ``float64`` tensors.
    """
    _check_reduction(reduction)
    _same(pred.resolution, gt.resolution, "IUV images")
    p = as_float64(pred.fore).clamp(BCE_EPS, 1.0 - BCE_EPS)
    g = as_float64(gt.fore)
    bce = -(g * torch.log(p) + (1.0 - g) * torch.log(1.0 - p))
    l_c = reduce(bce, reduction)
    fore = torch.as_tensor(gt.foreground(0.5))
    diff = (as_float64(pred.uv) - as_float64(gt.uv)).abs().sum(dim=-1)
    l_r = _normalized(diff[fore].sum(), int(fore.sum()), reduction)
    return lambda_c * l_c + lambda_r * l_r, l_c, l_r


# Location Map Loss


def loss_map(pred, gt, weight, reduction="mean"):
    r"""Weighted L1 loss between location maps over the texels valid in ``gt``.

    .. math:: L_{map} = \frac{\sum W(u, v) \lVert X(u, v) - \hat{X}(u, v) \rVert_1}{\sum W(u, v)}

    The normalization is dropped with ``reduction="sum"``.

    Raises:
        DataError: If the weights vanish on every valid texel.
    """
    _check_reduction(reduction)
    _same(pred.resolution, gt.resolution, "location maps")
    w = getattr(weight, "values", weight)
    w = as_float64(w)
    if w.dim() == 3:
        w = w[:, :, 0]
    _same(w.shape, gt.resolution, "weight map and location map")
    if bool((w < 0).any()):
        raise DataError("weight map must be nonnegative")
    mask = torch.as_tensor(gt.mask)
    total_weight = w[mask].sum()
    if not total_weight > 0:
        raise DataError("weight map is zero on every valid texel")
    diff = (as_float64(pred.values) - as_float64(gt.values)).abs().sum(dim=-1)
    total = (w * diff)[mask].sum()
    return total if reduction == "sum" else total / total_weight


# Joint Losses


def loss_joints_3d(pred, gt, reduction="mean"):
    r"""L1 distance between 3D joint sets, averaged or summed over the joints."""
    _check_reduction(reduction)
    _same(pred.points.shape, gt.points.shape, "joint sets")
    diff = (as_float64(pred.points) - as_float64(gt.points)).abs().sum(dim=-1)
    return reduce(diff, reduction)


def loss_joints_2d(pred, gt, reduction="mean"):
    r"""Squared distance between 2D joint sets, weighted by the ground truth visibility.

    Invisible joints contribute ``0`` but still count in the mean.
    """
    _check_reduction(reduction)
    _same(pred.points.shape, gt.points.shape, "joint sets")
    diff = ((as_float64(pred.points) - as_float64(gt.points)) ** 2).sum(dim=-1)
    return reduce(as_float64(gt.visibility) * diff, reduction)


# Consistent Loss


def loss_consistent(location_map, gt_iuv, camera, threshold=0.5, reduction="mean"):
    r"""Reprojection loss tying a location map to the ground truth IUV image.

    Every foreground pixel samples the location map at its ``(u, v)``; the sampled point,
    projected with ``camera``, is compared with the pixel centre ``(c + 0.5, r + 0.5)``.

    Returns:
        Mean (or sum) over foreground pixels of the squared pixel distance.

    Raises:
        DataError: If the IUV image has no foreground pixel.
    """
    _check_reduction(reduction)
    fore = gt_iuv.foreground(threshold)
    if not fore.any():
        raise DataError("consistency loss needs at least one foreground pixel")
    rows, cols = np.nonzero(fore)
    points = as_float64(sample_bilinear(location_map, gt_iuv.uv[fore]))
    pixels = as_float64(np.stack([cols + 0.5, rows + 0.5], axis=1))
    residual = ((pixels - project(points, camera)) ** 2).sum(dim=-1)
    return reduce(residual, reduction)


# Total Loss


def loss_total(components, weights=None):
    r"""Full objective from its already evaluated parts.

    .. math:: L = L_{IUV} + L_{map} + L_{J3D} + L_{J2D} + \lambda_{con} L_{con}

    ``L_IUV`` already carries ``lambda_c`` and ``lambda_r``.

    Args:
        components (dict): Any of ``iuv``, ``map``, ``joints_3d``, ``joints_2d``,
            ``consistent``; missing parts count as ``0``.
        weights (LossWeights, optional): Defaults to ``LossWeights()``.

    Returns:
        A tuple ``(total, breakdown)``; ``breakdown`` maps every part, the weights and
        ``total`` to floats.
    """
    weights = LossWeights() if weights is None else weights
    unknown = set(components) - set(COMPONENTS)
    if unknown:
        raise ValueError("unknown loss components {}".format(sorted(unknown)))
    parts = {
        name: as_float64(components.get(name, 0.0)).reshape(())
        for name in COMPONENTS
    }
    total = (
        parts["iuv"]
        + parts["map"]
        + parts["joints_3d"]
        + parts["joints_2d"]
        + weights.lambda_con * parts["consistent"]
    )
    breakdown = {name: float(value) for name, value in parts.items()}
    breakdown.update(weights.to_dict())
    breakdown["total"] = float(total)
    return total, breakdown
