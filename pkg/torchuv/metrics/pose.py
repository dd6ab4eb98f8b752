from .functional import _pair, mpjpe, surface_error
from .metric import EvaluationMetric

__all__ = ["MPJPE", "SurfaceError"]


class MPJPE(EvaluationMetric):
    r"""
    Mean per-joint position error in millimeters, optionally after Procrustes alignment
    (MPJPE-PA).

    Args:
        aligned (str, optional): ``none`` or ``procrustes``.
    """

    def __init__(self, aligned="none"):
        if aligned not in ("none", "procrustes"):
            raise ValueError(
                "aligned must be 'none' or 'procrustes', got {}".format(aligned)
            )
        self.aligned = aligned
        self.name = "mpjpe_pa" if aligned == "procrustes" else "mpjpe"

    def preprocess(self, pred, gt):
        r"""Converts joint sets or arrays to ``float64`` tensors of equal shape."""
        return _pair(pred, gt)

    def calculate_score(self, pred, gt):
        return mpjpe(pred, gt, self.aligned)


class SurfaceError(EvaluationMetric):
    r"""
    Mean vertex error in millimeters between meshes in vertex correspondence.
    """

    name = "surface_error"

    def preprocess(self, pred, gt):
        return _pair(getattr(pred, "positions", pred), getattr(gt, "positions", gt))

    def calculate_score(self, pred, gt):
        return surface_error(pred, gt)
