import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from ..exceptions import MeshError, ShapeError

__all__ = ["TriangleMesh"]


def _frozen(array):
    array = np.array(array, copy=True)
    array.setflags(write=False)
    return array


class TriangleMesh(object):
    r"""Indexed triangle surface, closed or open.

    The arrays are copied and made read-only on construction, so a ``TriangleMesh`` can be
    shared between threads freely. Derived quantities (edges, adjacency, boundary loops) are
    computed lazily and cached.

    Args:
        positions (array-like): ``(n, 3)`` vertex positions in meters.
        faces (array-like): ``(m, 3)`` 0-based vertex indices, one row per triangle.
        symmetric_pairs (array-like, optional): Either ``(k, 2)`` index pairs ``(i, j)`` naming
            bilateral mirror vertices (``i == j`` for vertices on the symmetry plane) or a length
            ``n`` array where entry ``i`` is the mirror of vertex ``i``. Pairs only listed in one
            direction are completed. Every vertex must receive a mirror.
        validate (bool, optional): Run the index, degeneracy and edge-manifold checks.

    Raises:
        MeshError: If a face index is out of range, a face is degenerate, an edge is shared
            by more than two faces or the symmetric pairs are not an involution.
    """

    def __init__(self, positions, faces, symmetric_pairs=None, validate=True):
        positions = np.asarray(positions, dtype=np.float64)
        faces = np.asarray(faces, dtype=np.int64)
        if positions.ndim != 2 or positions.shape[1] != 3:
            raise ShapeError(
                "positions must have shape (n, 3), got {}".format(
                    positions.shape
                )
            )
        faces = faces.reshape(-1, 3)
        self.positions = _frozen(positions)
        self.faces = _frozen(faces)
        self._cache = {}
        self.mirror = None
        if validate:
            self._validate()
        if symmetric_pairs is not None:
            self.mirror = _frozen(self._build_mirror(symmetric_pairs))

    def _validate(self):
        n = self.n_vertices
        if not np.all(np.isfinite(self.positions)):
            bad = int(np.nonzero(~np.isfinite(self.positions).all(1))[0][0])
            raise MeshError("vertex {} has a non-finite position".format(bad))
        if self.n_faces == 0:
            return
        out = np.nonzero((self.faces < 0) | (self.faces >= n))
        if len(out[0]) > 0:
            f = int(out[0][0])
            raise MeshError(
                "face {} index {} out of range for {} vertices".format(
                    f, int(self.faces[f, out[1][0]]), n
                )
            )
        f0, f1, f2 = self.faces.T
        degenerate = np.nonzero((f0 == f1) | (f1 == f2) | (f0 == f2))[0]
        if len(degenerate) > 0:
            raise MeshError(
                "face {} is degenerate: {}".format(
                    int(degenerate[0]), self.faces[degenerate[0]].tolist()
                )
            )
        edges, counts = self._edge_counts()
        over = np.nonzero(counts > 2)[0]
        if len(over) > 0:
            raise MeshError(
                "non-manifold edge ({}, {}) shared by {} faces".format(
                    int(edges[over[0], 0]),
                    int(edges[over[0], 1]),
                    int(counts[over[0]]),
                )
            )

    def _build_mirror(self, symmetric_pairs):
        n = self.n_vertices
        pairs = np.asarray(symmetric_pairs, dtype=np.int64)
        if pairs.ndim == 1:
            if len(pairs) != n:
                raise MeshError(
                    "mirror array has {} entries for {} vertices".format(
                        len(pairs), n
                    )
                )
            pairs = np.stack([np.arange(n), pairs], axis=1)
        pairs = pairs.reshape(-1, 2)
        if np.any((pairs < 0) | (pairs >= n)):
            raise MeshError("symmetric pair index out of range")
        mirror = np.full(n, -1, dtype=np.int64)
        for i, j in pairs.tolist():
            for a, b in ((i, j), (j, i)):
                if mirror[a] not in (-1, b):
                    raise MeshError(
                        "symmetric pairs are not an involution at vertex {}".format(
                            a
                        )
                    )
                mirror[a] = b
        missing = np.nonzero(mirror < 0)[0]
        if len(missing) > 0:
            raise MeshError(
                "vertex {} has no symmetric partner".format(int(missing[0]))
            )
        return mirror

    @property
    def n_vertices(self):
        return self.positions.shape[0]

    @property
    def n_faces(self):
        return self.faces.shape[0]

    @property
    def symmetric_pairs(self):
        r"""``(k, 2)`` array of mirror pairs with ``i <= j``, or ``None``."""
        if self.mirror is None:
            return None
        idx = np.arange(self.n_vertices)
        keep = idx <= self.mirror
        return np.stack([idx[keep], self.mirror[keep]], axis=1)

    def _cached(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    def _edge_counts(self):
        def build():
            half = self.half_edges()
            lo = np.minimum(half[:, 0], half[:, 1])
            hi = np.maximum(half[:, 0], half[:, 1])
            undirected = np.stack([lo, hi], axis=1)
            if len(undirected) == 0:
                return np.zeros((0, 2), np.int64), np.zeros(0, np.int64)
            return np.unique(undirected, axis=0, return_counts=True)

        return self._cached("edge_counts", build)

    def half_edges(self):
        r"""Directed edges ``(a, b)`` in face order, three per face."""
        f = self.faces
        return np.concatenate(
            [f[:, [0, 1]], f[:, [1, 2]], f[:, [2, 0]]], axis=0
        ).reshape(3, -1, 2).transpose(1, 0, 2).reshape(-1, 2)

    def edges(self):
        r"""Unique undirected edges as a sorted ``(E, 2)`` array with ``a < b``."""
        return self._edge_counts()[0]

    def edge_lengths(self):
        e = self.edges()
        return np.linalg.norm(
            self.positions[e[:, 0]] - self.positions[e[:, 1]], axis=1
        )

    def boundary_edges(self):
        r"""Directed half-edges without a twin, i.e. the boundary oriented as in its face."""
        half = self.half_edges()
        n = self.n_vertices
        keys = half[:, 0] * n + half[:, 1]
        twins = half[:, 1] * n + half[:, 0]
        return half[~np.isin(twins, keys)]

    def is_closed(self):
        return len(self.boundary_edges()) == 0

    def is_oriented(self):
        r"""True when every directed edge is used at most once, so neighbouring faces agree."""
        half = self.half_edges()
        if len(half) == 0:
            return True
        return len(np.unique(half, axis=0)) == len(half)

    def euler(self):
        r"""Euler characteristic ``V - E + F`` counted over vertices referenced by faces."""
        used = len(np.unique(self.faces)) if self.n_faces else 0
        return used - len(self.edges()) + self.n_faces

    def boundary_loops(self):
        r"""Computes the boundary loops, each a list of vertex indices in half-edge order.

        Loops start at their smallest vertex index and are sorted by it, so the result is
        deterministic.

        Raises:
            MeshError: If a boundary vertex is pinched (two outgoing boundary edges).
        """

        def build():
            bnd = self.boundary_edges()
            nxt = {}
            for a, b in bnd.tolist():
                if a in nxt:
                    raise MeshError(
                        "boundary vertex {} is pinched (two outgoing boundary edges)".format(
                            a
                        )
                    )
                nxt[a] = b
            loops = []
            remaining = set(nxt)
            while remaining:
                start = min(remaining)
                loop = [start]
                remaining.discard(start)
                cur = nxt[start]
                while cur != start:
                    if cur not in remaining:
                        raise MeshError(
                            "boundary walk from vertex {} does not close".format(
                                start
                            )
                        )
                    loop.append(cur)
                    remaining.discard(cur)
                    cur = nxt[cur]
                loops.append(loop)
            return loops

        return self._cached("boundary_loops", build)

    def adjacency(self, metric="edge-length"):
        r"""Symmetric sparse vertex adjacency weighted by ``metric``.

        Args:
            metric (str, optional): ``edge-length`` uses the Euclidean edge length, ``hop-count``
                uses ``1`` for every edge.

        Returns:
            ``scipy.sparse.csr_matrix`` of shape ``(n, n)``.
        """
        if metric not in ("edge-length", "hop-count"):
            raise ValueError("unknown metric {}".format(metric))
        e = self.edges()
        if metric == "hop-count":
            w = np.ones(len(e))
        else:
            # csgraph reads stored zeros as missing edges
            w = np.maximum(self.edge_lengths(), np.finfo(np.float64).tiny)
        n = self.n_vertices
        rows = np.concatenate([e[:, 0], e[:, 1]])
        cols = np.concatenate([e[:, 1], e[:, 0]])
        return sparse.csr_matrix(
            (np.concatenate([w, w]), (rows, cols)), shape=(n, n)
        )

    def n_components(self):
        r"""Number of connected components of the vertex-edge graph, isolated vertices included."""
        return self._cached(
            "components",
            lambda: csgraph.connected_components(
                self.adjacency("hop-count"), directed=False
            )[0],
        )

    def neighbours(self):
        r"""List of sorted neighbour index arrays, one per vertex."""
        adj = self.adjacency("hop-count")
        return [
            adj.indices[adj.indptr[i] : adj.indptr[i + 1]]
            for i in range(self.n_vertices)
        ]

    def face_areas(self):
        p = self.positions[self.faces]
        return 0.5 * np.linalg.norm(
            np.cross(p[:, 1] - p[:, 0], p[:, 2] - p[:, 0]), axis=1
        )

    def bounding_box_diagonal(self):
        if self.n_vertices == 0:
            return 0.0
        return float(
            np.linalg.norm(
                self.positions.max(axis=0) - self.positions.min(axis=0)
            )
        )

    def find_face(self, a, b, c):
        r"""Index of the face made of vertices ``{a, b, c}`` in any order, or ``-1``."""
        lookup = self._cached(
            "face_lookup",
            lambda: {
                tuple(sorted(f)): i for i, f in enumerate(self.faces.tolist())
            },
        )
        return lookup.get(tuple(sorted((a, b, c))), -1)

    def with_positions(self, positions):
        r"""Same connectivity and symmetry with new vertex positions."""
        positions = np.asarray(positions, dtype=np.float64)
        if positions.shape != self.positions.shape:
            raise ShapeError(
                "expected positions of shape {}, got {}".format(
                    self.positions.shape, positions.shape
                )
            )
        return TriangleMesh(positions, self.faces, self.mirror, validate=False)

    def __repr__(self):
        return "TriangleMesh(n_vertices={}, n_faces={}, symmetric={})".format(
            self.n_vertices, self.n_faces, self.mirror is not None
        )
