import warnings

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import spsolve

from ..exceptions import DataError, InvariantError, MeshError, TopologyError
from .atlas import UVAtlas, fold_overs

__all__ = ["tutte_embed", "boundary_outline", "square_corners"]


def boundary_outline(t, boundary="square"):
    r"""Points on the convex outline at arc-length fractions ``t`` in ``[0, 1)``.

    Both outlines are traversed counter-clockwise in the signed-area convention of
    ``signed_areas`` starting at ``(0, 0)`` for the square and at ``(1, 0.5)`` for the circle.
    The square passes its corners at ``t = 0, 1/4, 1/2, 3/4``.
    """
    t = np.asarray(t, dtype=np.float64)
    if boundary == "circle":
        angle = 2.0 * np.pi * t
        return np.stack(
            [0.5 + 0.5 * np.cos(angle), 0.5 + 0.5 * np.sin(angle)], axis=1
        )
    if boundary != "square":
        raise ValueError("unknown boundary shape {}".format(boundary))
    s = 4.0 * t
    side = np.minimum(np.floor(s).astype(np.int64), 3)
    f = s - side
    corners = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
    start = corners[side]
    end = corners[(side + 1) % 4]
    return start + (end - start) * f[:, None]


def _chords(open_mesh, loop):
    r"""Edges joining two loop vertices that are not boundary edges, as sorted pairs of
    loop positions."""
    count = len(loop)
    position = np.full(open_mesh.n_vertices, -1, dtype=np.int64)
    position[loop] = np.arange(count)
    pairs = np.sort(position[open_mesh.edges()], axis=1)
    gap = pairs[:, 1] - pairs[:, 0]
    keep = (pairs[:, 0] >= 0) & (gap != 1) & (gap != count - 1)
    return pairs[keep]


def _cyclic_gap(t, corners):
    gap = np.abs(t[:, None] - t[corners][None, :])
    return np.minimum(gap, 1.0 - gap).min(axis=1)


def square_corners(t, chords):
    r"""Chooses the loop positions that go on the four corners of the square.

    A chord with both ends on one side of the square gives its faces zero area, so each
    chord needs a corner strictly inside both loop arcs it cuts off. In particular the tip
    of every boundary ear (a vertex whose two loop neighbours are joined by a chord) is a
    corner. Without ears the corners are the vertices nearest the arc-length fractions
    ``1/8, 3/8, 5/8, 7/8``; otherwise the ear tips are completed by the vertices farthest in
    arc length from the corners already chosen.

    Args:
        t (numpy.ndarray): Increasing arc-length fractions of the loop with ``t[0] = 0``.
        chords (numpy.ndarray): ``(k, 2)`` sorted pairs of loop positions.

    Returns:
        The four sorted loop positions, or ``None`` if no choice keeps every chord off a
        single side.
    """
    t = np.asarray(t, dtype=np.float64)
    count = len(t)
    if count < 4:
        return None
    pairs = set(map(tuple, np.asarray(chords, dtype=np.int64).reshape(-1, 2).tolist()))
    corners = [
        i
        for i in range(count)
        if tuple(sorted(((i - 1) % count, (i + 1) % count))) in pairs
    ]
    if len(corners) > 4:
        return None
    if len(corners) == 0:
        for target in (np.arange(4) + 0.5) / 4.0:
            gap = np.abs(t - target)
            gap = np.minimum(gap, 1.0 - gap)
            gap[corners] = np.inf
            corners.append(int(np.argmin(gap)))
    while len(corners) < 4:
        gap = _cyclic_gap(t, corners)
        gap[corners] = -1.0
        corners.append(int(np.argmax(gap)))
    corners = np.sort(np.asarray(corners, dtype=np.int64))
    for a, b in pairs:
        inside = np.any((corners > a) & (corners < b))
        outside = np.any((corners < a) | (corners > b))
        if not (inside and outside):
            return None
    return corners


def _pinned_square(t, corners):
    r"""Outline fractions that put ``corners`` on the square corners and spread the vertices
    between two corners over that side by arc length. The side holding loop position 0
    becomes the top side ``v = 0``."""
    count = len(t)
    order = corners if corners[0] == 0 else np.roll(corners, 1)
    ends = np.array(order, dtype=np.int64)
    ends[ends < ends[0]] += count
    ends = np.append(ends, ends[0] + count)
    s = np.concatenate([t, t + 1.0, t + 2.0])
    out = np.zeros(count)
    for k in range(4):
        a, b = ends[k], ends[k + 1]
        idx = np.arange(a, b)
        span = s[b] - s[a]
        if span > 0:
            local = (s[idx] - s[a]) / span
        else:
            local = (idx - a) / float(b - a)
        out[idx % count] = (k + local) / 4.0
    return out


def tutte_embed(open_mesh, boundary="square", seam_map=None):
    r"""Uniform-weight Tutte embedding of a disk-topology mesh.

    Boundary vertices go on a convex outline following the loop in half-edge order, so the
    chart keeps the orientation of the faces, and are spaced by the 3D arc length of the
    loop. On the square, four boundary vertices chosen by ``square_corners`` are pinned to
    the corners and the others are spread by arc length along their side; a loop whose
    chords cannot all be kept off a single side goes on the circle instead, with a warning.
    Every interior vertex is the average of its neighbours, i.e. the solution of the
    graph-Laplacian system, solved with a sparse direct solver.

    Args:
        open_mesh (TriangleMesh): An oriented mesh with exactly one boundary loop.
        boundary (str, optional): ``square`` or ``circle``.
        seam_map (array-like, optional): Stored on the returned atlas.

    Returns:
        A fold-over free ``UVAtlas`` with the faces of ``open_mesh``.

    Raises:
        TopologyError: If the mesh does not have exactly one boundary loop.
        DataError: If a vertex is isolated, which makes the system singular.
        InvariantError: If the embedding has a flipped face, which only happens for
            degenerate input such as boundary edges of zero length.
    """
    loops = open_mesh.boundary_loops()
    if len(loops) != 1:
        raise TopologyError(
            "Tutte embedding needs exactly one boundary loop, found {}".format(
                len(loops)
            ),
            euler=open_mesh.euler(),
        )
    if not open_mesh.is_oriented():
        raise MeshError("faces are not consistently oriented")
    n = open_mesh.n_vertices
    adjacency = open_mesh.adjacency("hop-count")
    degree = np.asarray(adjacency.sum(axis=1)).ravel()
    isolated = np.nonzero(degree == 0)[0]
    if len(isolated) > 0:
        raise DataError(
            "vertex {} is isolated; the Laplacian system is singular".format(
                int(isolated[0])
            )
        )

    loop = np.asarray(loops[0], dtype=np.int64)
    p = open_mesh.positions
    seg = np.linalg.norm(p[np.roll(loop, -1)] - p[loop], axis=1)
    total = seg.sum()
    if total > 0:
        t = np.concatenate([[0.0], np.cumsum(seg)[:-1]]) / total
    else:
        t = np.arange(len(loop)) / float(len(loop))
    if boundary == "square":
        corners = square_corners(t, _chords(open_mesh, loop))
        if corners is None:
            warnings.warn(
                "no choice of square corners keeps the boundary faces of this loop of {} "
                "vertices from degenerating, using the circle".format(len(loop))
            )
            boundary = "circle"
        else:
            t = _pinned_square(t, corners)
    coords = np.zeros((n, 2))
    coords[loop] = boundary_outline(t, boundary)

    is_boundary = np.zeros(n, dtype=bool)
    is_boundary[loop] = True
    interior = np.nonzero(~is_boundary)[0]
    if len(interior) > 0:
        laplacian = sparse.diags(degree) - adjacency
        laplacian = laplacian.tocsr()
        a = laplacian[interior][:, interior].tocsc()
        rhs = -(laplacian[interior][:, loop] @ coords[loop])
        solution = spsolve(a, rhs)
        coords[interior] = np.asarray(solution).reshape(-1, 2)
    atlas = UVAtlas(np.clip(coords, 0.0, 1.0), seam_map, open_mesh.faces)
    flipped = fold_overs(atlas)
    if len(flipped) > 0:
        raise InvariantError(
            "Tutte embedding flipped {} face(s), first is face {}".format(
                len(flipped), int(flipped[0])
            )
        )
    return atlas
