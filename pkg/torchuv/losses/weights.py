__all__ = ["LossWeights", "COMPONENTS"]

COMPONENTS = ("iuv", "map", "joints_3d", "joints_2d", "consistent")


class LossWeights(object):
    r"""Balance coefficients of the training objective.

    Args:
        lambda_c (float, optional): Weight of the foreground cross entropy inside the IUV
            loss.
        lambda_r (float, optional): Weight of the UV regression inside the IUV loss.
        lambda_con (float, optional): Weight of the consistent loss.

    Raises:
        ValueError: If a weight is negative.
    """

    def __init__(self, lambda_c=0.2, lambda_r=1.0, lambda_con=1.0):
        for name, value in (
            ("lambda_c", lambda_c),
            ("lambda_r", lambda_r),
            ("lambda_con", lambda_con),
        ):
            if not value >= 0:
                raise ValueError(
                    "{} must be nonnegative, got {}".format(name, value)
                )
        self.lambda_c = float(lambda_c)
        self.lambda_r = float(lambda_r)
        self.lambda_con = float(lambda_con)

    def to_dict(self):
        return {
            "lambda_c": self.lambda_c,
            "lambda_r": self.lambda_r,
            "lambda_con": self.lambda_con,
        }

    def __repr__(self):
        return "LossWeights(lambda_c={}, lambda_r={}, lambda_con={})".format(
            self.lambda_c, self.lambda_r, self.lambda_con
        )
