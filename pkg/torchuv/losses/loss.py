import torch.nn as nn

from .functional import REDUCTIONS

__all__ = ["SupervisionLoss"]


class SupervisionLoss(nn.Module):
    r"""Base class for all supervision losses.

    .. note:: Losses are evaluated in ``float64`` on detached copies of their inputs; they
        report values and do not take part in autograd.

    Args:
        reduction (str, optional): Specifies the reduction to apply to the output.
            If ``mean`` the dense terms are averaged per pixel, texel or joint.
            If ``sum`` the raw sums are returned.
    """

    def __init__(self, reduction="mean"):
        super(SupervisionLoss, self).__init__()
        if reduction not in REDUCTIONS:
            raise ValueError(
                "reduction must be one of {}, got {}".format(
                    REDUCTIONS, reduction
                )
            )
        self.reduction = reduction

    def forward(self, *args, **kwargs):
        raise NotImplementedError

    def extra_repr(self):
        return "reduction={}".format(self.reduction)
