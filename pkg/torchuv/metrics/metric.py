__all__ = ["EvaluationMetric"]


class EvaluationMetric(object):
    r"""
    Base class for all Evaluation Metrics
    """

    #: Name under which the score appears in reports.
    name = None

    def preprocess(self, pred, gt):
        r"""
        Subclasses must override this function and turn the raw inputs into whatever
        ``calculate_score`` consumes.

        :raises NotImplementedError: If the subclass doesn't override this function.
        """
        raise NotImplementedError

    def calculate_score(self, pred, gt):
        r"""
        Subclasses must override this function and provide their own score calculation.

        :raises NotImplementedError: If the subclass doesn't override this function.
        """
        raise NotImplementedError

    def __call__(self, pred, gt):
        return self.calculate_score(*self.preprocess(pred, gt))
