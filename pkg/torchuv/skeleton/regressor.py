import os

import numpy as np
from scipy import sparse

from ..exceptions import DataError, ShapeError
from .joints import JointSet

__all__ = ["JointRegressor", "regress_joints"]

ROW_SUM_TOLERANCE = 1e-6


class JointRegressor(object):
    r"""Sparse row-stochastic ``k x n`` matrix mapping mesh vertices to joints.

    Args:
        matrix (array-like or scipy.sparse matrix): Nonnegative weights whose rows sum to one
            within ``1e-6``.

    Raises:
        DataError: If a weight is negative or a row does not sum to one.
    """

    def __init__(self, matrix):
        matrix = sparse.csr_matrix(matrix, dtype=np.float64)
        matrix.sum_duplicates()
        if matrix.nnz and (matrix.data.min() < 0 or not np.all(
            np.isfinite(matrix.data)
        )):
            raise DataError("joint regressor weights must be finite and nonnegative")
        sums = np.asarray(matrix.sum(axis=1)).ravel()
        off = np.nonzero(np.abs(sums - 1.0) > ROW_SUM_TOLERANCE)[0]
        if len(off) > 0:
            raise DataError(
                "joint regressor row {} sums to {} instead of 1".format(
                    int(off[0]), float(sums[off[0]])
                )
            )
        self.matrix = matrix

    @property
    def n_joints(self):
        return self.matrix.shape[0]

    @property
    def n_vertices(self):
        return self.matrix.shape[1]

    @classmethod
    def load(cls, path):
        r"""Reads a sparse triplet file: a ``k n nnz`` header then ``row col value`` lines."""
        rows = []
        header = None
        with open(path, "r") as fp:
            for lineno, line in enumerate(fp, start=1):
                tokens = line.split("#", 1)[0].split()
                if not tokens:
                    continue
                try:
                    if header is None:
                        header = tuple(int(t) for t in tokens)
                        if len(header) != 3:
                            raise ValueError
                        continue
                    if len(tokens) != 3:
                        raise ValueError
                    rows.append((int(tokens[0]), int(tokens[1]), float(tokens[2])))
                except ValueError:
                    raise DataError(
                        "{} line {}: expected {}".format(
                            path,
                            lineno,
                            "'row col value'" if header else "'k n nnz' header",
                        )
                    )
        if header is None:
            raise DataError("{}: missing 'k n nnz' header".format(path))
        k, n, nnz = header
        if len(rows) != nnz:
            raise DataError(
                "{}: header announces {} entries, found {}".format(
                    path, nnz, len(rows)
                )
            )
        data = np.array(rows, dtype=np.float64).reshape(-1, 3)
        r, c = data[:, 0].astype(np.int64), data[:, 1].astype(np.int64)
        if len(data) and (r.min() < 0 or r.max() >= k or c.min() < 0 or c.max() >= n):
            raise DataError("{}: entry index outside {}x{}".format(path, k, n))
        return cls(sparse.coo_matrix((data[:, 2], (r, c)), shape=(k, n)))

    def save(self, path):
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        coo = self.matrix.tocoo()
        with open(path, "w") as fp:
            fp.write("{} {} {}\n".format(self.n_joints, self.n_vertices, coo.nnz))
            for r, c, v in zip(coo.row.tolist(), coo.col.tolist(), coo.data.tolist()):
                fp.write("{} {} {!r}\n".format(r, c, v))

    def __repr__(self):
        return "JointRegressor(k={}, n={}, nnz={})".format(
            self.n_joints, self.n_vertices, self.matrix.nnz
        )


def regress_joints(vertices, regressor, camera=None):
    r"""3D joints ``Z = J V`` of a mesh, optionally projected into the image.

    Args:
        vertices (numpy.ndarray): ``(n, 3)`` vertex positions.
        regressor (JointRegressor): ``k x n`` regressor.
        camera (Camera, optional): If given, the 2D joints are returned instead.

    Returns:
        A ``JointSet`` with every joint visible.

    Raises:
        ShapeError: If the vertex count does not match the regressor.
    """
    vertices = np.asarray(vertices, dtype=np.float64)
    if vertices.ndim != 2 or vertices.shape[0] != regressor.n_vertices:
        raise ShapeError(
            "regressor expects {} vertices, got {}".format(
                regressor.n_vertices, vertices.shape
            )
        )
    joints = JointSet(regressor.matrix @ vertices)
    return joints if camera is None else joints.project(camera)
