import numpy as np

from ..exceptions import DataError, ShapeError
from .atlas import UVAtlas

__all__ = ["similarity_s1", "similarity_s2", "fragment_atlas"]


def _values(a, b):
    a = getattr(a, "values", a)
    b = getattr(b, "values", b)
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ShapeError(
            "distance matrices differ in shape: {} and {}".format(
                a.shape, b.shape
            )
        )
    return a.ravel(), b.ravel()


def similarity_s1(a, b):
    r"""Correlation coefficient between two distance matrices over all ``n^2`` entries.

    .. math:: S_1 = \frac{\sum (A - \bar{A})(B - \bar{B})}
                        {\sqrt{\sum (A - \bar{A})^2 \sum (B - \bar{B})^2}}

    Args:
        a (DistanceMatrix or numpy.ndarray): First matrix.
        b (DistanceMatrix or numpy.ndarray): Second matrix of the same size.

    Returns:
        A float in ``[-1, 1]``.

    Raises:
        DataError: If either matrix is constant.
    """
    a, b = _values(a, b)
    da = a - a.mean()
    db = b - b.mean()
    va, vb = np.dot(da, da), np.dot(db, db)
    if not (va > 0 and vb > 0):
        raise DataError("correlation is undefined for a constant distance matrix")
    return float(np.clip(np.dot(da, db) / np.sqrt(va * vb), -1.0, 1.0))


def similarity_s2(a, b):
    r"""Cosine similarity of two distance matrices seen as flat vectors.

    Args:
        a (DistanceMatrix or numpy.ndarray): First matrix.
        b (DistanceMatrix or numpy.ndarray): Second matrix of the same size.

    Returns:
        A float, within ``[0, 1]`` for nonnegative inputs.

    Raises:
        DataError: If either matrix is all zero.
    """
    a, b = _values(a, b)
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if not (na > 0 and nb > 0):
        raise DataError("cosine similarity is undefined for a zero distance matrix")
    return float(np.clip(np.dot(a, b) / (na * nb), -1.0, 1.0))


def fragment_atlas(atlas, face_labels, faces=None, margin=0.05, seed=0):
    r"""Splits a layout into one chart per face label, packed into shuffled grid cells.

    Every part keeps its own shape (uniformly scaled, never flipped) but loses its placement,
    which is how multi-chart body atlases look. The result is a comparison baseline for the
    similarity scores, not a packing algorithm.

    Args:
        atlas (UVAtlas): The layout to split.
        face_labels (array-like): Part label of every face.
        faces (numpy.ndarray, optional): Faces to use when the atlas carries none.
        margin (float, optional): Empty border inside every cell, as a fraction of the cell.
        seed (int, optional): Seed of the cell permutation.

    Returns:
        A ``UVAtlas`` with its own faces and a seam map onto the source vertices of ``atlas``.
    """
    faces = atlas.faces if faces is None else np.asarray(faces, dtype=np.int64)
    if faces is None:
        raise ShapeError("fragmenting needs the chart faces")
    labels = np.asarray(face_labels).ravel()
    if len(labels) != len(faces):
        raise ShapeError(
            "{} face labels for {} faces".format(len(labels), len(faces))
        )
    source = (
        np.arange(atlas.n_vertices) if atlas.seam_map is None else atlas.seam_map
    )
    parts = np.unique(labels)
    grid = int(np.ceil(np.sqrt(len(parts))))
    cells = np.random.RandomState(seed).permutation(grid * grid)[: len(parts)]
    size = 1.0 / grid

    coords, seam_map = [], []
    new_faces = np.zeros_like(faces)
    offset = 0
    for part, cell in zip(parts, cells):
        chosen = np.nonzero(labels == part)[0]
        vertices, local = np.unique(faces[chosen], return_inverse=True)
        new_faces[chosen] = local.reshape(-1, 3) + offset
        uv = atlas.coords[vertices]
        low = uv.min(axis=0)
        extent = max((uv.max(axis=0) - low).max(), 1e-12)
        scale = size * (1.0 - 2.0 * margin) / extent
        corner = np.array([cell % grid, cell // grid], dtype=np.float64) * size
        coords.append(corner + size * margin + (uv - low) * scale)
        seam_map.append(source[vertices])
        offset += len(vertices)
    if not coords:
        raise DataError("fragmenting needs at least one face")
    return UVAtlas(
        np.concatenate(coords), np.concatenate(seam_map), new_faces
    )
