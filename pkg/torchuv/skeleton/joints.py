import numpy as np

from ..codec.types import project
from ..exceptions import DataError, ShapeError

__all__ = ["JointSet"]


class JointSet(object):
    r"""``k`` skeleton joints in 3D (meters) or 2D (pixels) with visibility flags.

    Args:
        points (array-like): ``(k, 3)`` or ``(k, 2)`` coordinates.
        visibility (array-like, optional): ``(k,)`` flags in ``{0, 1}``. Defaults to all
            visible.

    Raises:
        DataError: If a visible joint is not finite.
    """

    def __init__(self, points, visibility=None):
        points = np.array(points, dtype=np.float64)
        if points.ndim != 2 or points.shape[1] not in (2, 3):
            raise ShapeError(
                "joints must have shape (k, 2) or (k, 3), got {}".format(
                    points.shape
                )
            )
        if visibility is None:
            visibility = np.ones(len(points))
        visibility = np.array(visibility, dtype=np.float64).ravel()
        if visibility.shape != (len(points),):
            raise ShapeError(
                "{} visibility flags for {} joints".format(
                    visibility.size, len(points)
                )
            )
        if not np.all((visibility == 0) | (visibility == 1)):
            raise DataError("visibility flags must be 0 or 1")
        visible = visibility > 0
        if not np.all(np.isfinite(points[visible])):
            raise DataError("visible joints must be finite")
        points[~visible] = np.nan_to_num(points[~visible])
        self.points = points
        self.visibility = visibility

    def __len__(self):
        return len(self.points)

    @property
    def dims(self):
        return self.points.shape[1]

    def project(self, camera):
        r"""The 2D joint set seen by ``camera``, keeping the visibility flags."""
        if self.dims != 3:
            raise ShapeError("only 3D joints can be projected")
        return JointSet(project(self.points, camera), self.visibility)

    def __repr__(self):
        return "JointSet(k={}, dims={})".format(len(self), self.dims)
