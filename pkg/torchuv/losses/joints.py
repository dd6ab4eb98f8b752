from .functional import loss_joints_2d, loss_joints_3d
from .loss import SupervisionLoss

__all__ = ["Joints3DLoss", "Joints2DLoss"]


class Joints3DLoss(SupervisionLoss):
    r"""L1 loss on regressed 3D joints.

    .. math:: L_{J3D} = \frac{1}{k} \sum_i \lVert Z_i - \hat{Z}_i \rVert_1
    """

    def forward(self, pred, gt):
        return loss_joints_3d(pred, gt, self.reduction)


class Joints2DLoss(SupervisionLoss):
    r"""Visibility weighted squared loss on projected joints.

    .. math:: L_{J2D} = \frac{1}{k} \sum_i v_i \lVert z_i - \hat{z}_i \rVert_2^2
    """

    def forward(self, pred, gt):
        return loss_joints_2d(pred, gt, self.reduction)
