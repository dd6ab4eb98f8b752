from .functional import loss_iuv
from .loss import SupervisionLoss

__all__ = ["IUVLoss"]


class IUVLoss(SupervisionLoss):
    r"""Dense correspondence loss of a predicted IUV image.

    The loss can be described as

    .. math:: L_{IUV} = \lambda_c L_c + \lambda_r L_r

    where

    - :math:`L_c` : binary cross entropy of the foreground channel over every pixel
    - :math:`L_r` : L1 distance of the UV channels over the ground truth foreground

    Args:
        lambda_c (float, optional): Weight of :math:`L_c`.
        lambda_r (float, optional): Weight of :math:`L_r`.
        reduction (str, optional): ``mean`` or ``sum``.
    """

    def __init__(self, lambda_c=0.2, lambda_r=1.0, reduction="mean"):
        super(IUVLoss, self).__init__(reduction)
        self.lambda_c = lambda_c
        self.lambda_r = lambda_r

    def forward(self, pred, gt):
        r"""Computes the loss for the given input.

        Args:
            pred (torchuv.codec.IUVImage): Predicted IUV image.
            gt (torchuv.codec.IUVImage): Ground truth IUV image.

        Returns:
            A tuple ``(total, L_c, L_r)``.
        """
        return loss_iuv(pred, gt, self.lambda_c, self.lambda_r, self.reduction)
