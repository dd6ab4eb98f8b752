from .functional import segmentation_metrics
from .metric import EvaluationMetric

__all__ = ["SegmentationScore"]


class SegmentationScore(EvaluationMetric):
    r"""
    Foreground/background accuracy and f1 of a silhouette, usually the ``fore`` channel of
    a rendered IUV image against a ground truth mask.
    """

    name = "segmentation"

    def preprocess(self, pred, gt):
        return pred, gt

    def calculate_score(self, pred, gt):
        return segmentation_metrics(pred, gt)
