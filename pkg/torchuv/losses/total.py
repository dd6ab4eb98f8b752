import torch.nn as nn

from .functional import loss_total
from .iuv import IUVLoss
from .joints import Joints2DLoss, Joints3DLoss
from .location import ConsistentLoss, LocationMapLoss
from .weights import LossWeights

__all__ = ["TotalLoss"]


class TotalLoss(nn.Module):
    r"""Full training objective assembled from the individual supervision losses.

    .. math:: L = L_{IUV} + L_{map} + L_{J3D} + L_{J2D} + \lambda_{con} L_{con}

    Args:
        weights (LossWeights, optional): Balance coefficients; the defaults are
            ``lambda_c = 0.2``, ``lambda_r = 1`` and ``lambda_con = 1``.
        reduction (str, optional): ``mean`` or ``sum``, passed to every part.
        threshold (float, optional): Foreground threshold of the consistent loss.
    """

    def __init__(self, weights=None, reduction="mean", threshold=0.5):
        super(TotalLoss, self).__init__()
        self.weights = LossWeights() if weights is None else weights
        self.iuv = IUVLoss(
            self.weights.lambda_c, self.weights.lambda_r, reduction
        )
        self.map = LocationMapLoss(reduction)
        self.joints_3d = Joints3DLoss(reduction)
        self.joints_2d = Joints2DLoss(reduction)
        self.consistent = ConsistentLoss(threshold, reduction)

    def forward(
        self,
        pred_iuv=None,
        gt_iuv=None,
        pred_map=None,
        gt_map=None,
        weight=None,
        pred_joints_3d=None,
        gt_joints_3d=None,
        pred_joints_2d=None,
        gt_joints_2d=None,
        camera=None,
    ):
        r"""Evaluates every part whose inputs are given and sums them.

        The consistent loss is evaluated on ``pred_map`` against ``gt_iuv`` and ``camera``.

        Returns:
            A tuple ``(total, breakdown)`` as returned by ``loss_total``.
        """
        parts = {}
        if pred_iuv is not None and gt_iuv is not None:
            parts["iuv"] = self.iuv(pred_iuv, gt_iuv)[0]
        if pred_map is not None and gt_map is not None and weight is not None:
            parts["map"] = self.map(pred_map, gt_map, weight)
        if pred_joints_3d is not None and gt_joints_3d is not None:
            parts["joints_3d"] = self.joints_3d(pred_joints_3d, gt_joints_3d)
        if pred_joints_2d is not None and gt_joints_2d is not None:
            parts["joints_2d"] = self.joints_2d(pred_joints_2d, gt_joints_2d)
        if pred_map is not None and gt_iuv is not None and camera is not None:
            parts["consistent"] = self.consistent(pred_map, gt_iuv, camera)
        return loss_total(parts, self.weights)
