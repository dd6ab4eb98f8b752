import numpy as np

from ..exceptions import DataError, MeshError, TopologyError
from ..mesh.trimesh import TriangleMesh
from .atlas import SeamSpec

__all__ = ["cut_mesh"]


def _find(parent, x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def _union(parent, a, b):
    ra, rb = _find(parent, a), _find(parent, b)
    if ra != rb:
        # smallest corner id stays root so wedge order is deterministic
        if ra < rb:
            parent[rb] = ra
        else:
            parent[ra] = rb


def _wedges(mesh, seam_keys):
    r"""Groups the face corners around every vertex into wedges separated by seam edges.

    Returns:
        ``(3m,)`` array giving the root corner id of the wedge of every corner.
    """
    faces = mesh.faces.tolist()
    parent = list(range(3 * len(faces)))
    sharing = {}
    for f, face in enumerate(faces):
        for k in range(3):
            a, b = face[k], face[(k + 1) % 3]
            key = (a, b) if a < b else (b, a)
            sharing.setdefault(key, []).append((f, k, (k + 1) % 3))
    for key, users in sharing.items():
        if key in seam_keys or len(users) != 2:
            continue
        (f, ka, kb), (g, la, lb) = users
        # the twin corner of vertex key[0] in g is whichever of la/lb holds it
        for vertex, corner in ((faces[f][ka], ka), (faces[f][kb], kb)):
            other = la if faces[g][la] == vertex else lb
            _union(parent, 3 * f + corner, 3 * g + other)
    return np.array([_find(parent, c) for c in range(len(parent))])


def _open_mirror(mesh, open_faces):
    r"""Carries the mirror involution of ``mesh`` over to the duplicated chart vertices."""
    faces = mesh.faces
    mirror = mesh.mirror
    pairs = {}
    for f in range(len(faces)):
        a, b, c = (int(mirror[v]) for v in faces[f])
        g = mesh.find_face(a, b, c)
        if g < 0:
            raise MeshError(
                "symmetric pairs do not map face {} onto a face".format(f)
            )
        for k in range(3):
            target = mirror[faces[f, k]]
            kk = int(np.nonzero(faces[g] == target)[0][0])
            i, j = int(open_faces[f, k]), int(open_faces[g, kk])
            if pairs.get(i, j) != j:
                raise TopologyError(
                    "seam is not symmetric: chart vertex {} mirrors to both {} and {}".format(
                        i, pairs[i], j
                    )
                )
            pairs[i] = j
    return np.array([pairs[i] for i in range(len(pairs))], dtype=np.int64)


def cut_mesh(mesh, seam):
    r"""Cuts ``mesh`` open along ``seam`` into a surface with disk topology.

    Every vertex whose incident faces are separated by seam edges is duplicated once per
    wedge; the first wedge (the one holding the lowest face corner) keeps the original index
    and extra copies are appended in vertex order. Face count and face order are unchanged.
    When ``mesh`` carries symmetric pairs they are carried over to the copies, which needs a
    seam that is mirror symmetric itself.

    Args:
        mesh (TriangleMesh): A connected mesh, normally closed. An open disk with an empty
            seam is returned as is.
        seam (SeamSpec): The cut edges.

    Returns:
        A tuple ``(open_mesh, seam_map)``; ``seam_map[i]`` is the source vertex of chart
        vertex ``i``.

    Raises:
        DataError: If a seam edge is not an edge of the mesh.
        TopologyError: If the mesh is disconnected or the cut surface is not a disk, with
            the Euler characteristic of the result.
    """
    if not isinstance(seam, SeamSpec):
        seam = SeamSpec(seam)
    components = mesh.n_components()
    if components != 1:
        raise TopologyError(
            "mesh is disconnected: {} components".format(components),
            components=components,
        )
    seam.validate(mesh)
    seam_keys = {tuple(e) for e in seam.edges.tolist()}

    roots = _wedges(mesh, seam_keys)
    corner_vertex = mesh.faces.reshape(-1)
    seam_map = list(range(mesh.n_vertices))
    index_of_root = {}
    seen = set()
    # first wedge per vertex keeps the index, others are appended in vertex order
    order = np.lexsort((roots, corner_vertex))
    extra = []
    for c in order.tolist():
        root = int(roots[c])
        if root in index_of_root:
            continue
        v = int(corner_vertex[c])
        if v not in seen:
            seen.add(v)
            index_of_root[root] = v
        else:
            extra.append(root)
            index_of_root[root] = mesh.n_vertices + len(extra) - 1
            seam_map.append(v)
    open_faces = np.array(
        [index_of_root[int(r)] for r in roots], dtype=np.int64
    ).reshape(-1, 3)
    seam_map = np.array(seam_map, dtype=np.int64)

    open_mesh = TriangleMesh(
        mesh.positions[seam_map], open_faces, validate=False
    )
    euler = open_mesh.euler()
    loops = open_mesh.boundary_loops()
    if euler != 1 or len(loops) != 1 or open_mesh.n_components() != 1:
        raise TopologyError(
            "cut surface has Euler characteristic {} and {} boundary loop(s); "
            "a disk needs 1 and 1".format(euler, len(loops)),
            euler=euler,
        )
    if len(seam_map) == mesh.n_vertices and np.array_equal(
        open_faces, mesh.faces
    ):
        return mesh, seam_map
    if mesh.mirror is not None:
        try:
            open_mesh = TriangleMesh(
                open_mesh.positions,
                open_faces,
                _open_mirror(mesh, open_faces),
                validate=False,
            )
        except MeshError as e:
            raise DataError(str(e))
    return open_mesh, seam_map
