__all__ = [
    "TorchUVError",
    "DataError",
    "MeshError",
    "TopologyError",
    "ShapeError",
    "InvariantError",
    "exit_code",
]


class TorchUVError(Exception):
    r"""Base class for every error raised by torchuv."""

    exit_code = 2


class DataError(TorchUVError):
    r"""The input data or an input file is invalid."""

    exit_code = 2


class MeshError(DataError):
    r"""Malformed mesh: parse failure, index out of range, degenerate face or non-manifold edge.

    Args:
        message (str): Description of the problem.
        line (int, optional): 1-based line number of the offending record when parsing a file.
    """

    def __init__(self, message, line=None):
        if line is not None:
            message = "line {}: {}".format(line, message)
        super(MeshError, self).__init__(message)
        self.line = line


class TopologyError(DataError):
    r"""The mesh does not have the topology an operation needs.

    Args:
        message (str): Description of the problem.
        euler (int, optional): Euler characteristic of the offending surface.
        components (int, optional): Number of connected components found.
    """

    def __init__(self, message, euler=None, components=None):
        super(TopologyError, self).__init__(message)
        self.euler = euler
        self.components = components


class ShapeError(DataError):
    r"""Mismatched dimensions, resolutions or element counts."""


class InvariantError(TorchUVError):
    r"""An output failed one of its own post-conditions."""

    exit_code = 3


def exit_code(error):
    r"""Maps an exception onto the command line exit code convention.

    ``0`` success, ``1`` usage, ``2`` data error, ``3`` internal invariant violation.
    """
    if isinstance(error, TorchUVError):
        return error.exit_code
    if isinstance(error, (OSError, ValueError)):
        return 2
    return 3
