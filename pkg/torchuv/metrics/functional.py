import numpy as np
import torch

from ..exceptions import DataError, ShapeError
from ..utils import as_float64

__all__ = [
    "procrustes_align",
    "mpjpe",
    "surface_error",
    "segmentation_metrics",
    "METERS_TO_MM",
]

METERS_TO_MM = 1000.0

# relative size of the second singular value below which points count as collinear
_DEGENERATE = 1e-9


def _points(x):
    return as_float64(getattr(x, "points", x))


def _pair(pred, gt):
    pred, gt = _points(pred), _points(gt)
    if pred.shape != gt.shape or pred.dim() != 2:
        raise ShapeError(
            "point sets differ in shape: {} and {}".format(
                tuple(pred.shape), tuple(gt.shape)
            )
        )
    return pred, gt


def procrustes_align(pred, gt):
    r"""Similarity transform of ``pred`` that best fits ``gt`` in the least-squares sense.

    Solves :math:`\min_{s, R, t} \sum_i \lVert s R p_i + t - g_i \rVert^2` in closed form from
    the SVD of the cross covariance, with the determinant sign correction that keeps
    :math:`R` a rotation, and the scale from the trace ratio.

    Args:
        pred (JointSet or array-like): ``(k, d)`` points to move.
        gt (JointSet or array-like): ``(k, d)`` target points.

    Returns:
        A tuple ``(aligned, (s, R, t))`` of ``float64`` tensors where
        ``aligned = s * pred @ R.T + t``.

    Raises:
        DataError: If ``pred`` is coincident or collinear.
    """
    pred, gt = _pair(pred, gt)
    mu_p, mu_g = pred.mean(dim=0), gt.mean(dim=0)
    p0, g0 = pred - mu_p, gt - mu_g
    spread = torch.linalg.svdvals(p0)
    if len(pred) < 3 or not spread[0] > 0 or spread[1] <= _DEGENERATE * spread[0]:
        raise DataError(
            "Procrustes alignment needs at least 3 non-collinear points"
        )
    u, sigma, vt = torch.linalg.svd(g0.t() @ p0)
    d = torch.ones(pred.shape[1], dtype=torch.float64)
    d[-1] = torch.sign(torch.det(u @ vt))
    if d[-1] == 0:
        d[-1] = 1.0
    rotation = u @ torch.diag(d) @ vt
    scale = (sigma * d).sum() / (p0 ** 2).sum()
    translation = mu_g - scale * rotation @ mu_p
    aligned = scale * pred @ rotation.t() + translation
    return aligned, (scale, rotation, translation)


def mpjpe(pred, gt, aligned="none"):
    r"""Mean per-joint position error in millimeters.

    Args:
        pred (JointSet or array-like): Predicted joints in meters.
        gt (JointSet or array-like): Ground truth joints in meters.
        aligned (str, optional): ``none`` or ``procrustes`` to align ``pred`` first.

    Returns:
        The error as a float.
    """
    pred, gt = _pair(pred, gt)
    if aligned == "procrustes":
        pred = procrustes_align(pred, gt)[0]
    elif aligned != "none":
        raise ValueError(
            "aligned must be 'none' or 'procrustes', got {}".format(aligned)
        )
    return float(torch.norm(pred - gt, dim=1).mean() * METERS_TO_MM)


def surface_error(pred_vertices, gt_vertices):
    r"""Mean Euclidean vertex error in millimeters between meshes in vertex correspondence."""
    pred, gt = _pair(pred_vertices, gt_vertices)
    if len(pred) == 0:
        raise ShapeError("surface error needs at least one vertex")
    return float(torch.norm(pred - gt, dim=1).mean() * METERS_TO_MM)


def _mask(x):
    x = getattr(x, "values", getattr(x, "fore", x))
    x = np.asarray(x)
    if x.ndim == 3 and x.shape[2] == 1:
        x = x[:, :, 0]
    return torch.as_tensor(x > 0.5)


def segmentation_metrics(pred_mask, gt_mask):
    r"""Foreground accuracy and f1 score of a binary silhouette.

    ``accuracy = (TP + TN) / N`` and ``f1 = 2 TP / (2 TP + FP + FN)``. With an empty ground
    truth foreground, f1 is ``1`` if the prediction is empty too and ``0`` otherwise.

    Args:
        pred_mask (array-like, GridTensor or IUVImage): Predicted mask; values above ``0.5``
            are foreground.
        gt_mask (array-like, GridTensor or IUVImage): Ground truth mask of the same size.

    Returns:
        A dict with ``accuracy`` and ``f1``.
    """
    pred, gt = _mask(pred_mask), _mask(gt_mask)
    if pred.shape != gt.shape:
        raise ShapeError(
            "masks differ in shape: {} and {}".format(
                tuple(pred.shape), tuple(gt.shape)
            )
        )
    tp = int((pred & gt).sum())
    tn = int((~pred & ~gt).sum())
    fp = int((pred & ~gt).sum())
    fn = int((~pred & gt).sum())
    total = tp + tn + fp + fn
    accuracy = (tp + tn) / float(total) if total else 1.0
    if tp + fn == 0:
        f1 = 1.0 if fp == 0 else 0.0
    else:
        f1 = 2.0 * tp / (2.0 * tp + fp + fn)
    return {"accuracy": accuracy, "f1": f1}
