from .functional import loss_consistent, loss_map
from .loss import SupervisionLoss

__all__ = ["LocationMapLoss", "ConsistentLoss"]


class LocationMapLoss(SupervisionLoss):
    r"""Weighted L1 loss between a predicted and a ground truth location map.

    .. math:: L_{map} = \frac{\sum W(u, v) \lVert X(u, v) - \hat{X}(u, v) \rVert_1}{\sum W(u, v)}

    The sums run over the texels valid in the ground truth. ``W`` is normally produced by
    ``torchuv.codec.weight_map`` and raises the weight of the limbs.

    Args:
        reduction (str, optional): ``mean`` normalizes by the weight sum, ``sum`` does not.
    """

    def forward(self, pred, gt, weight):
        return loss_map(pred, gt, weight, self.reduction)


class ConsistentLoss(SupervisionLoss):
    r"""Reprojection loss between a location map and a ground truth IUV image.

    Args:
        threshold (float, optional): Foreground threshold of the IUV image.
        reduction (str, optional): ``mean`` or ``sum`` over foreground pixels.
    """

    def __init__(self, threshold=0.5, reduction="mean"):
        super(ConsistentLoss, self).__init__(reduction)
        self.threshold = threshold

    def forward(self, location_map, gt_iuv, camera):
        return loss_consistent(
            location_map, gt_iuv, camera, self.threshold, self.reduction
        )
