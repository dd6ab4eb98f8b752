import numpy as np

from .trimesh import TriangleMesh

__all__ = ["HumanoidAsset", "humanoid", "HUMANOID_VERTICES", "HUMANOID_FACES"]

N_LON = 16
N_LAT = 11
HUMANOID_VERTICES = N_LON * N_LAT + 2
HUMANOID_FACES = 2 * N_LON * N_LAT

# (direction, amplitude) of the smooth lobes grown out of the body; y points down
_LOBES = {
    "head": ((0.0, -1.0, 0.0), 0.5),
    "left_hand": ((1.0, -0.3, 0.0), 1.8),
    "right_hand": ((-1.0, -0.3, 0.0), 1.8),
    "left_foot": ((0.6, 1.0, 0.0), 1.6),
    "right_foot": ((-0.6, 1.0, 0.0), 1.6),
}
_LOBE_WIDTH = 0.15
# narrow dent between the legs: (direction, amplitude, width)
_CROTCH = ((0.0, 1.0, 0.0), -0.6, 0.1)
# lobe regions are the vertices within this angle of the lobe axis
_REGION_ANGLE = 0.5
# torso rings holding the spine seeds
_SPINE_RINGS = range(4, 9)
_AXES = np.array([0.25, 0.5, 0.15])


class HumanoidAsset(object):
    r"""The bundled low-poly test body and its annotations.

    Attributes:
        mesh (TriangleMesh): Closed genus-0 body with bilateral symmetric pairs (mirror
            plane ``x = 0``). y points down and +z toward the camera.
        seam (numpy.ndarray): ``(k, 2)`` edges along the back midline from the top of the
            head to the bottom pole. Cutting along them gives a disk.
        torso_seeds (numpy.ndarray): Front and back midline vertices of the torso rings from
            the chest to the hips, i.e. along the spine.
        regions (dict): Lobe name to the vertex indices inside that lobe.
        tips (dict): Lobe name to the vertex closest to the lobe axis.
    """

    def __init__(self, mesh, seam, torso_seeds, regions, tips):
        self.mesh = mesh
        self.seam = seam
        self.torso_seeds = torso_seeds
        self.regions = regions
        self.tips = tips


def _vertex(k, j):
    r"""Index of longitude ``j`` on latitude ring ``k`` (``1 <= k <= N_LAT``)."""
    return 1 + (k - 1) * N_LON + (j % N_LON)


def _directions():
    dirs = np.zeros((HUMANOID_VERTICES, 3))
    dirs[0] = (0.0, -1.0, 0.0)
    dirs[-1] = (0.0, 1.0, 0.0)
    for k in range(1, N_LAT + 1):
        theta = np.pi * k / (N_LAT + 1)
        for j in range(N_LON // 2 + 1):
            phi = 2.0 * np.pi * j / N_LON
            d = (
                np.sin(theta) * np.sin(phi),
                -np.cos(theta),
                np.sin(theta) * np.cos(phi),
            )
            dirs[_vertex(k, j)] = d
            dirs[_vertex(k, -j)] = (-d[0], d[1], d[2])
        # the half-turn meridians lie on the mirror plane exactly
        dirs[_vertex(k, 0), 0] = 0.0
        dirs[_vertex(k, N_LON // 2), 0] = 0.0
    return dirs


def _radius(dirs):
    r = np.ones(len(dirs))
    for axis, amplitude in _LOBES.values():
        c = np.asarray(axis) / np.linalg.norm(axis)
        r += amplitude * np.exp(-(1.0 - dirs @ c) / _LOBE_WIDTH)
    axis, amplitude, width = _CROTCH
    r += amplitude * np.exp(-(1.0 - dirs @ np.asarray(axis)) / width)
    return r


def _faces():
    faces = []
    for j in range(N_LON):
        faces.append((0, _vertex(1, j + 1), _vertex(1, j)))
    for k in range(1, N_LAT):
        for j in range(N_LON):
            a, b = _vertex(k, j), _vertex(k, j + 1)
            c, d = _vertex(k + 1, j), _vertex(k + 1, j + 1)
            # diagonals mirror across the symmetry plane
            if j < N_LON // 2:
                faces.append((a, b, d))
                faces.append((a, d, c))
            else:
                faces.append((a, b, c))
                faces.append((b, d, c))
    bottom = HUMANOID_VERTICES - 1
    for j in range(N_LON):
        faces.append((bottom, _vertex(N_LAT, j), _vertex(N_LAT, j + 1)))
    return np.array(faces, dtype=np.int64)


def _mirror():
    mirror = np.arange(HUMANOID_VERTICES)
    for k in range(1, N_LAT + 1):
        for j in range(N_LON):
            mirror[_vertex(k, j)] = _vertex(k, -j)
    return mirror


def humanoid():
    r"""Builds the bundled humanoid.

    The body is a latitude/longitude sphere with ``N_LON`` meridians and ``N_LAT`` rings
    whose radius grows five smooth lobes (head, hands, feet) and is dented between the legs,
    scaled to roughly human proportions in meters. Construction is fully deterministic and
    the left half is an exact mirror copy of the right half.

    Returns:
        A ``HumanoidAsset``.
    """
    dirs = _directions()
    positions = dirs * _radius(dirs)[:, None] * _AXES
    mirror = _mirror()
    copies = np.nonzero(mirror < np.arange(len(mirror)))[0]
    positions[copies] = positions[mirror[copies]] * np.array([-1.0, 1.0, 1.0])
    faces = _faces()
    # orient every face outward: det of the unit directions is scale free
    det = np.einsum(
        "ij,ij->i",
        dirs[faces[:, 0]],
        np.cross(dirs[faces[:, 1]], dirs[faces[:, 2]]),
    )
    faces[det < 0] = faces[det < 0][:, [0, 2, 1]]
    mesh = TriangleMesh(positions, faces, mirror)

    back = N_LON // 2
    path = [0] + [_vertex(k, back) for k in range(1, N_LAT + 1)]
    path.append(HUMANOID_VERTICES - 1)
    seam = np.array(list(zip(path[:-1], path[1:])), dtype=np.int64)

    torso_seeds = np.array(
        [_vertex(k, j) for k in _SPINE_RINGS for j in (0, back)], dtype=np.int64
    )

    regions, tips = {}, {}
    for name, (axis, _) in _LOBES.items():
        c = np.asarray(axis) / np.linalg.norm(axis)
        alignment = dirs @ c
        regions[name] = np.nonzero(alignment > np.cos(_REGION_ANGLE))[0]
        tips[name] = int(np.argmax(alignment))
    return HumanoidAsset(mesh, seam, torso_seeds, regions, tips)
