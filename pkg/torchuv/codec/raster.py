from concurrent.futures import ThreadPoolExecutor

import numpy as np

from ..utils import chunks, num_threads

__all__ = ["rasterize", "interpolate"]


def _edge(a, b, px, py):
    r"""Edge function of the directed edge ``a -> b`` at the points ``(px, py)``.

    The two directions of an edge evaluate to exact negatives of each other, so a sample
    on a shared edge is never lost or counted twice by rounding.
    """
    if (a[0], a[1]) > (b[0], b[1]):
        return -_edge(b, a, px, py)
    return (b[0] - a[0]) * (py - a[1]) - (b[1] - a[1]) * (px - a[0])


def _owns(a, b):
    r"""Top-left rule for a positively oriented triangle."""
    dx, dy = b[0] - a[0], b[1] - a[1]
    return dy > 0 or (dy == 0 and dx < 0)


def _band(points, faces, depth, width, start, stop):
    rows = stop - start
    face_index = np.full((rows, width), -1, dtype=np.int64)
    bary = np.zeros((rows, width, 3))
    zbuf = np.full((rows, width), -np.inf)
    for f in range(len(faces)):
        i0, i1, i2 = faces[f]
        p = [points[i0], points[i1], points[i2]]
        area2 = _edge(p[0], p[1], p[2][0], p[2][1])
        if area2 == 0 or not np.isfinite(area2):
            continue
        order = [0, 1, 2] if area2 > 0 else [0, 2, 1]
        q = [p[k] for k in order]
        area2 = abs(area2)
        xs = [v[0] for v in q]
        ys = [v[1] for v in q]
        c0 = max(int(np.ceil(min(xs) - 0.5)), 0)
        c1 = min(int(np.floor(max(xs) - 0.5)), width - 1)
        r0 = max(int(np.ceil(min(ys) - 0.5)), start)
        r1 = min(int(np.floor(max(ys) - 0.5)), stop - 1)
        if c0 > c1 or r0 > r1:
            continue
        px, py = np.meshgrid(
            np.arange(c0, c1 + 1) + 0.5, np.arange(r0, r1 + 1) + 0.5
        )
        inside = np.ones(px.shape, dtype=bool)
        weights = np.zeros(px.shape + (3,))
        for k in range(3):
            a, b = q[(k + 1) % 3], q[(k + 2) % 3]
            e = _edge(a, b, px, py)
            inside &= (e > 0) | ((e == 0) & _owns(a, b))
            weights[..., order[k]] = e / area2
        if not inside.any():
            continue
        sub = (slice(r0 - start, r1 - start + 1), slice(c0, c1 + 1))
        if depth is None:
            take = inside & (face_index[sub] < 0)
        else:
            z = weights @ depth[faces[f]]
            take = inside & (z > zbuf[sub])
            zbuf[sub][take] = z[take]
        face_index[sub][take] = f
        bary[sub][take] = weights[take]
    return face_index, bary


def rasterize(points, faces, height, width, depth=None):
    r"""Scan converts triangles onto an ``height x width`` pixel grid.

    Pixel ``(r, c)`` is sampled at its centre ``(c + 0.5, r + 0.5)``. A sample on an edge
    shared by two triangles belongs to exactly one of them (top-left rule). Without
    ``depth`` the first face in index order keeps a sample; with ``depth`` the face with the
    largest interpolated depth wins and ties go to the first face. Rows are split into bands
    that are rasterized independently on ``UVT_THREADS`` workers, so the result does not
    depend on the worker count.

    Args:
        points (numpy.ndarray): ``(n, 2)`` vertex positions in pixel units.
        faces (numpy.ndarray): ``(m, 3)`` vertex indices. Either orientation is accepted.
        height (int): Number of rows.
        width (int): Number of columns.
        depth (numpy.ndarray, optional): ``(n,)`` vertex depths, larger is nearer.

    Returns:
        A tuple ``(face_index, bary)``: the ``(height, width)`` covering face of every
        sample (``-1`` for none) and the ``(height, width, 3)`` barycentric coordinates of
        the sample in that face.
    """
    points = np.asarray(points, dtype=np.float64)
    faces = np.asarray(faces, dtype=np.int64)
    if depth is not None:
        depth = np.asarray(depth, dtype=np.float64)
    blocks = chunks(height, num_threads())

    def work(block):
        return _band(points, faces, depth, width, block[0], block[1])

    if len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=len(blocks)) as pool:
            bands = list(pool.map(work, blocks))
    else:
        bands = [work(blocks[0])]
    return (
        np.concatenate([b[0] for b in bands], axis=0),
        np.concatenate([b[1] for b in bands], axis=0),
    )


def interpolate(face_index, bary, faces, attributes):
    r"""Blends per-vertex ``attributes`` with the barycentric weights of a raster.

    Returns:
        ``(H, W, C)`` values, ``0`` where no face covers the sample.
    """
    attributes = np.asarray(attributes, dtype=np.float64)
    if attributes.ndim == 1:
        attributes = attributes[:, None]
    out = np.zeros(face_index.shape + (attributes.shape[1],))
    covered = face_index >= 0
    corners = np.asarray(faces)[face_index[covered]]
    out[covered] = np.einsum(
        "pk,pkc->pc", bary[covered], attributes[corners]
    )
    return out
