import numpy as np

from ..exceptions import DataError, ShapeError
from .atlas import signed_areas

__all__ = [
    "area_distortion_energy",
    "AreaDistortionMinimizer",
    "minimize_area_distortion",
]


def _energy_terms(coords, faces, target):
    a = signed_areas(coords, faces)
    total = a.sum()
    residual = a / total - target
    return a, total, residual


def _normalized_target(positions, faces):
    p = positions[faces]
    areas = 0.5 * np.linalg.norm(
        np.cross(p[:, 1] - p[:, 0], p[:, 2] - p[:, 0]), axis=1
    )
    total = areas.sum()
    if not total > 0:
        raise DataError("mesh has zero surface area")
    return areas / total


def area_distortion_energy(coords, faces, positions):
    r"""Area distortion of a UV layout against its surface.

    .. math:: E = F \sum_f \left(\frac{a^{uv}_f}{\sum a^{uv}} - \frac{a^{3d}_f}{\sum a^{3d}}\right)^2

    where :math:`F` is the face count, so the energy does not shrink as meshes get finer.

    Args:
        coords (numpy.ndarray): ``(n, 2)`` UV coordinates.
        faces (numpy.ndarray): ``(m, 3)`` chart faces.
        positions (numpy.ndarray): ``(n, 3)`` chart vertex positions.

    Returns:
        The energy as a float.
    """
    target = _normalized_target(np.asarray(positions), faces)
    _, _, residual = _energy_terms(coords, faces, target)
    return float(len(faces) * np.sum(residual ** 2))


class AreaDistortionMinimizer(object):
    r"""Projected gradient descent on the area distortion energy.

    Every iteration moves the vertices against the analytic gradient, scaled so the largest
    displacement equals the current step, and clips the result to the unit square. Boundary
    vertices move too, but a boundary vertex lying on an edge of the unit square slides along
    that edge and one on a corner stays there, so a chart that fills the square keeps filling
    it. A step is accepted only if no face flips, no face shrinks below ``min_area_ratio``
    times the smaller of its target share and its share in the input, and the energy strictly
    decreases. The vertices of faces that would cross that floor are held for the step before
    it is given up; a rejected step is halved. Accepted steps grow the next trial step by
    ``growth``. The gradient is accumulated face by face in index order so results are
    reproducible.

    Args:
        max_iters (int, optional): Maximum number of accepted iterations.
        step (float, optional): Initial largest per-vertex displacement in UV units.
        tolerance (float, optional): Stop once an accepted step lowers the energy by less
            than this fraction.
        growth (float, optional): Factor applied to the step after an accepted iteration.
        min_step (float, optional): Give up once the step shrinks below this value.
        min_area_ratio (float, optional): Lowest allowed share of the UV area of a face,
            relative to the smaller of its target and input shares. Must lie in ``[0, 1)``.

    Attributes:
        energies (list): Energy of the input followed by the energy after every accepted
            iteration of the last call.
    """

    def __init__(
        self,
        max_iters=500,
        step=1e-2,
        tolerance=1e-7,
        growth=1.5,
        min_step=1e-12,
        min_area_ratio=0.5,
    ):
        if max_iters < 0 or step <= 0 or tolerance < 0:
            raise ValueError(
                "max_iters must be >= 0, step > 0 and tolerance >= 0"
            )
        if not 0.0 <= min_area_ratio < 1.0:
            raise ValueError(
                "min_area_ratio must lie in [0, 1), got {}".format(min_area_ratio)
            )
        self.max_iters = max_iters
        self.step = step
        self.tolerance = tolerance
        self.growth = growth
        self.min_step = min_step
        self.min_area_ratio = min_area_ratio
        self.energies = []

    def _gradient(self, coords, faces, target):
        a, total, residual = _energy_terms(coords, faces, target)
        m = len(faces)
        # dE/da_f for every face
        c = (2.0 * m / total) * (residual - np.dot(residual, a) / total)
        p = coords[faces]
        x, y = p[:, :, 0], p[:, :, 1]
        grad = np.zeros_like(coords)
        for k in range(3):
            k1, k2 = (k + 1) % 3, (k + 2) % 3
            d = 0.5 * np.stack([y[:, k1] - y[:, k2], x[:, k2] - x[:, k1]], 1)
            np.add.at(grad, faces[:, k], c[:, None] * d)
        return grad

    def _check(self, coords, faces, target):
        a = signed_areas(coords, faces)
        flipped = np.nonzero(~(a > 0))[0]
        if len(flipped) > 0:
            raise DataError(
                "input atlas is not fold-over free: face {} has signed area {}".format(
                    int(flipped[0]), float(a[flipped[0]])
                )
            )
        _, _, residual = _energy_terms(coords, faces, target)
        bad = np.nonzero(~np.isfinite(residual))[0]
        if len(bad) > 0:
            raise DataError(
                "area distortion energy is not finite at face {}".format(
                    int(bad[0])
                )
            )
        return float(len(faces) * np.sum(residual ** 2))

    @staticmethod
    def _held(coords, open_mesh):
        r"""Coordinates of boundary vertices that sit on an edge of the unit square."""
        held = np.zeros(coords.shape, dtype=bool)
        boundary = np.unique(open_mesh.boundary_edges()[:, 0])
        b = coords[boundary]
        held[boundary] = (b == 0.0) | (b == 1.0)
        return held

    def _trial(self, coords, direction, step, faces, target, floor):
        candidate = np.clip(coords - step * direction, 0.0, 1.0)
        a = signed_areas(candidate, faces)
        if np.all(a > 0):
            low = a / a.sum() < floor
            if np.any(low):
                direction = direction.copy()
                direction[faces[low].ravel()] = 0.0
                candidate = np.clip(coords - step * direction, 0.0, 1.0)
                a = signed_areas(candidate, faces)
        if not np.all(a > 0):
            return None
        share = a / a.sum()
        if np.any(share < floor):
            return None
        residual = share - target
        return candidate, float(len(faces) * np.sum(residual ** 2))

    def __call__(self, atlas, open_mesh, callback=None):
        r"""Optimizes ``atlas`` against the faces and positions of ``open_mesh``.

        Args:
            atlas (UVAtlas): A fold-over free layout of ``open_mesh``.
            open_mesh (TriangleMesh): The chart mesh, one vertex per atlas coordinate.
            callback (callable, optional): Called as ``callback(iteration, energy)`` after every
                accepted iteration.

        Returns:
            A new ``UVAtlas`` whose energy is not larger than the input's.

        Raises:
            DataError: If the input has a flipped face or a non-finite energy term.
        """
        if open_mesh.n_vertices != atlas.n_vertices:
            raise ShapeError(
                "atlas has {} coordinates for a mesh of {} vertices".format(
                    atlas.n_vertices, open_mesh.n_vertices
                )
            )
        faces = open_mesh.faces
        target = _normalized_target(open_mesh.positions, faces)
        coords = np.array(atlas.coords)
        energy = self._check(coords, faces, target)
        a = signed_areas(coords, faces)
        floor = self.min_area_ratio * np.minimum(target, a / a.sum())
        held = self._held(coords, open_mesh)
        self.energies = [energy]
        step = self.step
        for it in range(self.max_iters):
            if energy == 0.0:
                break
            grad = self._gradient(coords, faces, target)
            grad[held] = 0.0
            scale = np.abs(grad).max()
            if not scale > 0:
                break
            direction = grad / scale
            accepted = None
            while step >= self.min_step:
                trial = self._trial(coords, direction, step, faces, target, floor)
                if trial is not None and trial[1] < energy:
                    accepted = trial
                    break
                step *= 0.5
            if accepted is None:
                break
            decrease = (energy - accepted[1]) / energy
            coords, energy = accepted
            self.energies.append(energy)
            if callback is not None:
                callback(it, energy)
            if decrease < self.tolerance:
                break
            step *= self.growth
        return atlas.with_coords(coords)


def minimize_area_distortion(
    atlas, open_mesh, max_iters=500, step=1e-2, tolerance=1e-7, min_area_ratio=0.5
):
    r"""Functional form of ``AreaDistortionMinimizer``; see its documentation."""
    return AreaDistortionMinimizer(
        max_iters=max_iters,
        step=step,
        tolerance=tolerance,
        min_area_ratio=min_area_ratio,
    )(atlas, open_mesh)
