from ..atlas.similarity import similarity_s1, similarity_s2
from .metric import EvaluationMetric

__all__ = ["DistanceSimilarity"]


class DistanceSimilarity(EvaluationMetric):
    r"""
    Agreement between the surface distance matrix of a mesh and the UV distance matrix of
    its atlas. A UV map that keeps the surface neighbourhoods scores close to ``1``.

    Args:
        kind (str, optional): ``s1`` for the correlation coefficient, ``s2`` for the cosine
            similarity.
    """

    def __init__(self, kind="s1"):
        if kind not in ("s1", "s2"):
            raise ValueError("kind must be 's1' or 's2', got {}".format(kind))
        self.kind = kind
        self.name = kind

    def preprocess(self, pred, gt):
        return pred, gt

    def calculate_score(self, pred, gt):
        if self.kind == "s1":
            return similarity_s1(pred, gt)
        return similarity_s2(pred, gt)
