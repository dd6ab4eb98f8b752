import os
import sys
import unittest
import warnings
from unittest import mock

import numpy as np
from torchuv.atlas import (
    UVAtlas,
    cut_mesh,
    minimize_area_distortion,
    symmetrize_atlas,
    tutte_embed,
)
from torchuv.codec import *
from torchuv.exceptions import DataError, ShapeError
from torchuv.mesh import TriangleMesh, humanoid

sys.path.append(os.path.join(os.path.dirname(__file__), "../.."))


def flat_grid(n):
    r"""Unit square of ``n x n`` vertices at ``z = 0`` whose atlas is its own ``(x, y)``."""
    u, v = np.meshgrid(np.linspace(0, 1, n), np.linspace(0, 1, n))
    uv = np.stack([u.ravel(), v.ravel()], axis=1)
    faces = []
    for i in range(n - 1):
        for j in range(n - 1):
            a, b = i * n + j, i * n + j + 1
            faces.append([a, b, b + n])
            faces.append([a, b + n, a + n])
    mesh = TriangleMesh(np.concatenate([uv, np.zeros((n * n, 1))], axis=1), faces)
    return mesh, UVAtlas(uv, faces=faces)


def texel_centres(height, width):
    r, c = np.mgrid[0:height, 0:width]
    return np.stack([(c + 0.5) / width, (r + 0.5) / height], axis=2)


class TestTypes(unittest.TestCase):
    def test_camera(self):
        camera = Camera.parse("100,128,96.5")
        self.assertEqual((camera.scale, camera.tx, camera.ty), (100.0, 128.0, 96.5))
        self.assertEqual(Camera.from_dict(camera.to_dict()).to_dict(), camera.to_dict())
        points = project(np.array([[0.1, -0.2, 5.0]]), camera)
        self.assertTrue(np.allclose(points, [[138.0, 76.5]]))
        with self.assertRaises(ValueError):
            Camera.parse("1,2")
        with self.assertRaises(DataError):
            Camera(-1.0)

    def test_iuv_image(self):
        iuv = IUVImage(np.array([[0.0, 0.6], [0.5, 1.0]]), np.zeros((2, 2, 2)))
        self.assertEqual(iuv.foreground().tolist(), [[False, True], [True, True]])
        self.assertEqual(iuv.foreground(0.7).tolist(), [[False, False], [False, True]])
        with self.assertRaises(ValueError):
            iuv.foreground(1.5)
        with self.assertRaises(DataError):
            IUVImage(np.full((2, 2), 2.0), np.zeros((2, 2, 2)))
        with self.assertRaises(ShapeError):
            IUVImage(np.zeros((2, 2)), np.zeros((2, 3, 2)))

    def test_location_map_layout(self):
        values = np.arange(2 * 3 * 3, dtype=np.float64).reshape(2, 3, 3)
        mask = np.array([[True, False, True], [False, True, True]])
        location = LocationMap(values, mask)
        self.assertTrue(np.all(location.values[~mask] == 0))
        again = LocationMap.from_array(location.to_array())
        self.assertTrue(np.array_equal(again.values, location.values))
        self.assertTrue(np.array_equal(again.mask, mask))


class TestRasterize(unittest.TestCase):
    def test_shared_diagonal_counted_once(self):
        points = np.array([[2.0, 2.0], [12.0, 2.0], [12.0, 12.0], [2.0, 12.0]])
        for faces in ([[0, 1, 2], [0, 2, 3]], [[0, 2, 1], [0, 3, 2]]):
            face_index, _ = rasterize(points, faces, 16, 16)
            covered = face_index >= 0
            self.assertEqual(int(covered.sum()), 100)
            self.assertTrue(covered[2:12, 2:12].all())
            # centres on the diagonal go to one face only
            diagonal = face_index[np.arange(2, 12), np.arange(2, 12)]
            self.assertEqual(len(set(diagonal.tolist())), 1)

    def test_matches_brute_force(self):
        rng = np.random.RandomState(7)
        points = rng.rand(3, 2) * 20.0
        face_index, bary = rasterize(points, [[0, 1, 2]], 20, 20)
        a, b, c = points
        m = np.array([b - a, c - a]).T
        for r in range(20):
            for col in range(20):
                l1, l2 = np.linalg.solve(m, np.array([col + 0.5, r + 0.5]) - a)
                weights = np.array([1 - l1 - l2, l1, l2])
                if weights.min() > 1e-9:
                    self.assertEqual(face_index[r, col], 0)
                    self.assertLess(np.abs(bary[r, col] - weights).max(), 1e-9)
                elif weights.min() < -1e-9:
                    self.assertEqual(face_index[r, col], -1)

    def test_depth_and_ties(self):
        points = np.array([[0.0, 0.0], [8.0, 0.0], [0.0, 8.0]] * 2)
        faces = [[0, 1, 2], [3, 4, 5]]
        face_index, _ = rasterize(points, faces, 8, 8, depth=[0, 0, 0, 1, 1, 1])
        self.assertEqual(set(face_index[face_index >= 0].tolist()), {1})
        face_index, _ = rasterize(points, faces, 8, 8, depth=np.zeros(6))
        self.assertEqual(set(face_index[face_index >= 0].tolist()), {0})

    def test_thread_count_does_not_change_result(self):
        rng = np.random.RandomState(11)
        points = rng.rand(30, 2) * 40.0
        faces = rng.choice(30, size=(25, 3), replace=True)
        faces = faces[(faces[:, 0] != faces[:, 1]) & (faces[:, 1] != faces[:, 2]) & (faces[:, 0] != faces[:, 2])]
        depth = rng.rand(30)
        single = rasterize(points, faces, 40, 40, depth)
        with mock.patch.dict(os.environ, {"UVT_THREADS": "4"}):
            threaded = rasterize(points, faces, 40, 40, depth)
        self.assertTrue(np.array_equal(single[0], threaded[0]))
        self.assertTrue(np.array_equal(single[1], threaded[1]))


class TestLocationMap(unittest.TestCase):
    def test_encode_flat_grid(self):
        mesh, atlas = flat_grid(5)
        location = encode_location_map(mesh, atlas, 16)
        self.assertTrue(location.mask.all())
        expected = texel_centres(16, 16)
        self.assertLess(np.abs(location.values[:, :, :2] - expected).max(), 1e-12)
        self.assertLess(np.abs(location.values[:, :, 2]).max(), 1e-12)

    def test_rectangular_resolution(self):
        mesh, atlas = flat_grid(3)
        location = encode_location_map(mesh, atlas, (8, 24))
        self.assertEqual(location.resolution, (8, 24))
        with self.assertRaises(ShapeError):
            encode_location_map(mesh, atlas, 4)

    def test_decode_error_bound(self):
        mesh, atlas = flat_grid(6)
        for resolution in (8, 32):
            location = encode_location_map(mesh, atlas, resolution)
            decoded = decode_vertices(location, atlas)
            error = np.linalg.norm(decoded - mesh.positions, axis=1).max()
            self.assertLessEqual(
                error, 2.0 * mesh.bounding_box_diagonal() / resolution
            )

    def test_sample_bilinear_fallbacks(self):
        values = np.zeros((8, 8, 3))
        mask = np.zeros((8, 8), dtype=bool)
        with self.assertRaises(DataError):
            sample_bilinear(LocationMap(values, mask), [[0.5, 0.5]])
        values[1, 6] = [1.0, 2.0, 3.0]
        mask[1, 6] = True
        out = sample_bilinear(LocationMap(values, mask), [[0.1, 0.9], [0.8, 0.2]])
        self.assertTrue(np.allclose(out, [[1.0, 2.0, 3.0], [1.0, 2.0, 3.0]]))

    def test_merge_seam_vertices(self):
        points = np.array([[0.0, 0.0, 0.0], [1.0, 1.0, 1.0], [2.0, 0.0, 0.0]])
        merged = merge_seam_vertices(points, [0, 1, 0])
        self.assertTrue(np.allclose(merged, [[1.0, 0.0, 0.0], [1.0, 1.0, 1.0]]))
        self.assertEqual(merge_seam_vertices(points, None).shape, points.shape)
        with self.assertRaises(DataError):
            merge_seam_vertices(points, [0, 2, 0])


class TestRenderIUV(unittest.TestCase):
    def test_flat_grid_fills_frame(self):
        mesh, atlas = flat_grid(4)
        iuv = render_iuv(mesh, atlas, Camera(32.0, 0.0, 0.0), 32)
        self.assertTrue(np.all(iuv.fore == 1.0))
        self.assertLess(np.abs(iuv.uv - texel_centres(32, 32)).max(), 1e-12)

    def test_background(self):
        mesh, atlas = flat_grid(4)
        iuv = render_iuv(mesh, atlas, Camera(16.0, 8.0, 8.0), 32)
        self.assertEqual(int(iuv.fore.sum()), 256)
        self.assertTrue(np.all(iuv.uv[iuv.fore == 0] == 0))

    def test_outside_frame_warns(self):
        mesh, atlas = flat_grid(3)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            iuv = render_iuv(mesh, atlas, Camera(10.0, 500.0, 500.0), 16)
        self.assertEqual(len(caught), 1)
        self.assertFalse(iuv.fore.any())


class TestTransfer(unittest.TestCase):
    def setUp(self):
        self.mesh, self.atlas = flat_grid(4)
        self.iuv = render_iuv(self.mesh, self.atlas, Camera(16.0, 0.0, 0.0), 16)

    def test_to_uv_one_pixel_per_texel(self):
        image = np.random.RandomState(5).rand(16, 16, 2)
        grid, counts = transfer_to_uv(image, self.iuv, 16)
        self.assertTrue(np.all(counts == 1))
        self.assertLess(np.abs(grid.values - image).max(), 1e-12)

    def test_to_uv_averages(self):
        image = np.arange(256, dtype=np.float64).reshape(16, 16)
        grid, counts = transfer_to_uv(image, self.iuv, 8)
        self.assertTrue(np.all(counts == 4))
        self.assertAlmostEqual(grid.values[0, 0, 0], (0 + 1 + 16 + 17) / 4.0, places=12)

    def test_to_uv_background_ignored(self):
        iuv = IUVImage(np.zeros((16, 16)), self.iuv.uv)
        grid, counts = transfer_to_uv(np.ones((16, 16)), iuv, 8)
        self.assertTrue(np.all(counts == 0))
        self.assertTrue(np.all(grid.values == 0))
        with self.assertRaises(ShapeError):
            transfer_to_uv(np.ones((8, 8)), iuv, 8)

    def test_to_image(self):
        location = encode_location_map(self.mesh, self.atlas, 16)
        points = transfer_to_image(location, self.iuv)
        self.assertLess(
            np.abs(points.values[:, :, :2] - texel_centres(16, 16)).max(), 1e-12
        )


class TestWeights(unittest.TestCase):
    def test_vertex_weights(self):
        mesh, _ = flat_grid(5)
        w = vertex_weights(mesh, [12], alpha=2.0)
        self.assertEqual(w[12], 1.0)
        self.assertAlmostEqual(w.max(), 3.0, places=12)
        # corners off the grid diagonals are the farthest
        self.assertEqual(w[4], w.max())
        self.assertEqual(w[20], w.max())
        with self.assertRaises(DataError):
            vertex_weights(mesh, [])
        with self.assertRaises(DataError):
            vertex_weights(mesh, [25])

    def test_weight_map_range(self):
        mesh, atlas = flat_grid(5)
        grid = weight_map(mesh, atlas, [12], alpha=1.5, resolution=16)
        self.assertEqual(grid.values.shape, (16, 16, 1))
        self.assertGreaterEqual(grid.values.min(), 1.0 - 1e-12)
        self.assertLessEqual(grid.values.max(), 2.5 + 1e-12)

    def test_spine_seeds_weight_the_extremities(self):
        asset = humanoid()
        w = vertex_weights(asset.mesh, asset.torso_seeds, alpha=2.0)
        self.assertAlmostEqual(w.max(), 3.0, places=12)
        limbs = np.concatenate(
            [asset.regions[name] for name in ("left_hand", "right_hand", "left_foot", "right_foot")]
        )
        self.assertIn(int(np.argmax(w)), limbs.tolist())
        self.assertAlmostEqual(w[asset.mesh.mirror[np.argmax(w)]], 3.0, places=9)
        others = max(w[asset.tips["head"]], w[177])
        for name in ("left_hand", "right_hand", "left_foot", "right_foot"):
            self.assertGreater(w[asset.tips[name]], others)


def barycentric(points, triangle):
    r"""Barycentric coordinates of ``(k, 2)`` points in a 2D triangle."""
    p0, p1, p2 = triangle
    e1, e2, d = p1 - p0, p2 - p0, points - p0
    det = e1[0] * e2[1] - e1[1] * e2[0]
    l1 = (d[:, 0] * e2[1] - d[:, 1] * e2[0]) / det
    l2 = (e1[0] * d[:, 1] - e1[1] * d[:, 0]) / det
    return np.stack([1.0 - l1 - l2, l1, l2], axis=1)


class TestHumanoidCodec(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.asset = humanoid()
        cls.chart, seam_map = cut_mesh(cls.asset.mesh, cls.asset.seam)
        atlas = tutte_embed(cls.chart, seam_map=seam_map)
        atlas = minimize_area_distortion(atlas, cls.chart)
        cls.atlas = symmetrize_atlas(atlas, cls.chart)

    def test_round_trip_converges(self):
        errors = {}
        for resolution in (64, 128, 256):
            location = encode_location_map(self.chart, self.atlas, resolution)
            decoded = decode_vertices(location, self.atlas)
            errors[resolution] = np.linalg.norm(decoded - self.chart.positions, axis=1).max()
            self.assertLessEqual(
                errors[resolution],
                2.0 * self.asset.mesh.bounding_box_diagonal() / resolution,
            )
        self.assertLessEqual(errors[256], 0.55 * errors[128])

    def test_render_matches_brute_force(self):
        size, camera = 64, Camera(25.0, 32.0, 32.0)
        iuv = render_iuv(self.chart, self.atlas, camera, size)
        points = project(self.chart.positions, camera)
        r, c = np.mgrid[0:size, 0:size]
        centres = np.stack([c.ravel() + 0.5, r.ravel() + 0.5], axis=1)
        depth = np.full((self.chart.n_faces, size * size), -np.inf)
        uv = np.zeros((self.chart.n_faces, size * size, 2))
        for f, face in enumerate(self.chart.faces):
            bary = barycentric(centres, points[face])
            inside = np.all(bary >= -1e-9, axis=1)
            depth[f, inside] = bary[inside] @ self.chart.positions[face, 2]
            uv[f] = bary @ self.atlas.coords[face]
        covered = np.isfinite(depth).any(axis=0)
        self.assertEqual(int(iuv.fore.sum()), int(covered.sum()))
        self.assertTrue(np.array_equal(iuv.fore.ravel() == 1.0, covered))
        ranked = np.sort(depth, axis=0)
        clear = covered & ((ranked[-1] - ranked[-2]) > 1e-6)
        front = np.argmax(depth, axis=0)
        expected = uv[front, np.arange(size * size)]
        self.assertGreater(int(clear.sum()), 0)
        self.assertLess(
            np.abs(iuv.uv.reshape(-1, 2)[clear] - expected[clear]).max(), 1e-9
        )

    def test_uv_inside_visible_face(self):
        iuv = render_iuv(self.chart, self.atlas, Camera(25.0, 32.0, 32.0), 64)
        face_index, bary = render_faces(self.chart, Camera(25.0, 32.0, 32.0), 64)
        fore = face_index >= 0
        self.assertTrue(np.array_equal(fore, iuv.fore == 1.0))
        self.assertTrue(np.all(bary[fore] >= -1e-6))
        self.assertTrue(np.all(bary[fore] <= 1.0 + 1e-6))
        self.assertLess(np.abs(bary[fore].sum(axis=1) - 1.0).max(), 1e-6)
        rows, cols = np.nonzero(fore)
        for r, c in zip(rows, cols):
            triangle = self.atlas.coords[self.chart.faces[face_index[r, c]]]
            inner = barycentric(iuv.uv[r, c][None], triangle)[0]
            self.assertTrue(np.all(inner >= -1e-6) and np.all(inner <= 1.0 + 1e-6))

    def test_front_triangle_wins(self):
        xy = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
        coords = [[0.1, 0.1], [0.4, 0.1], [0.1, 0.4], [0.6, 0.1], [0.9, 0.1], [0.6, 0.4]]
        atlas = UVAtlas(coords, faces=[[0, 1, 2], [3, 4, 5]])
        for back, front, right in ((0.0, 1.0, True), (1.0, 0.0, False)):
            positions = np.concatenate(
                [np.c_[xy, np.full(3, back)], np.c_[xy, np.full(3, front)]]
            )
            mesh = TriangleMesh(positions, [[0, 1, 2], [3, 4, 5]])
            iuv = render_iuv(mesh, atlas, Camera(16.0, 0.0, 0.0), 16)
            fore = iuv.fore == 1.0
            self.assertGreater(int(fore.sum()), 0)
            self.assertEqual(bool(np.all(iuv.uv[fore][:, 0] > 0.5)), right)
            self.assertEqual(bool(np.all(iuv.uv[fore][:, 0] < 0.5)), not right)
