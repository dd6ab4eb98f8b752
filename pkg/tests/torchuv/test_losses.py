import os
import sys
import unittest

import numpy as np
import torch
from torchuv.atlas import UVAtlas
from torchuv.codec import Camera, GridTensor, IUVImage, LocationMap, encode_location_map, render_iuv
from torchuv.exceptions import DataError, ShapeError
from torchuv.losses import *
from torchuv.losses.functional import loss_consistent, loss_iuv, loss_map, loss_total
from torchuv.mesh import TriangleMesh
from torchuv.skeleton import JointSet

sys.path.append(os.path.join(os.path.dirname(__file__), "../.."))


def flat_grid(n):
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


class TestLosses(unittest.TestCase):
    def setUp(self):
        rng = np.random.RandomState(0)
        self.gt_iuv = IUVImage(
            np.array([[1.0, 0.0, 1.0], [0.0, 1.0, 0.0]]), rng.rand(2, 3, 2)
        )
        self.pred_iuv = IUVImage(rng.rand(2, 3), rng.rand(2, 3, 2))

    def test_iuv_loss_matches_scalar_loop(self):
        bce, l1, count = 0.0, 0.0, 0
        for r in range(2):
            for c in range(3):
                p = min(max(self.pred_iuv.fore[r, c], 1e-7), 1 - 1e-7)
                g = self.gt_iuv.fore[r, c]
                bce -= g * np.log(p) + (1 - g) * np.log(1 - p)
                if g >= 0.5:
                    l1 += np.abs(self.pred_iuv.uv[r, c] - self.gt_iuv.uv[r, c]).sum()
                    count += 1
        total, l_c, l_r = loss_iuv(self.pred_iuv, self.gt_iuv)
        self.assertAlmostEqual(l_c.item(), bce / 6, places=10)
        self.assertAlmostEqual(l_r.item(), l1 / count, places=10)
        self.assertAlmostEqual(total.item(), 0.2 * bce / 6 + l1 / count, places=10)

        loss = IUVLoss(lambda_c=0.5, lambda_r=2.0, reduction="sum")
        total, l_c, l_r = loss(self.pred_iuv, self.gt_iuv)
        self.assertAlmostEqual(l_c.item(), bce, places=10)
        self.assertAlmostEqual(l_r.item(), l1, places=10)
        self.assertAlmostEqual(total.item(), 0.5 * bce + 2.0 * l1, places=10)

    def test_iuv_loss_perfect_prediction(self):
        _, l_c, l_r = loss_iuv(self.gt_iuv, self.gt_iuv)
        self.assertAlmostEqual(l_r.item(), 0.0, places=12)
        self.assertLess(l_c.item(), 1e-6)

    def test_map_loss(self):
        rng = np.random.RandomState(1)
        mask = np.array([[True, True], [False, True]])
        gt = LocationMap(rng.rand(2, 2, 3), mask)
        pred = LocationMap(rng.rand(2, 2, 3), np.ones((2, 2), dtype=bool))
        weight = np.array([[1.0, 3.0], [5.0, 2.0]])
        num, den = 0.0, 0.0
        for r in range(2):
            for c in range(2):
                if mask[r, c]:
                    num += weight[r, c] * np.abs(pred.values[r, c] - gt.values[r, c]).sum()
                    den += weight[r, c]
        self.assertAlmostEqual(loss_map(pred, gt, weight).item(), num / den, places=10)
        loss = LocationMapLoss(reduction="sum")
        self.assertAlmostEqual(
            loss(pred, gt, GridTensor(weight)).item(), num, places=10
        )
        with self.assertRaises(DataError):
            loss_map(pred, gt, np.array([[0.0, 0.0], [1.0, 0.0]]))
        with self.assertRaises(ShapeError):
            loss_map(pred, gt, np.ones((3, 3)))

    def test_joint_losses(self):
        pred = JointSet([[0.0, 0.0, 0.0], [1.0, 2.0, 3.0]])
        gt = JointSet([[1.0, 0.0, 0.0], [1.0, 2.0, 1.0]])
        self.assertAlmostEqual(Joints3DLoss()(pred, gt).item(), 1.5, places=12)
        self.assertAlmostEqual(Joints3DLoss("sum")(pred, gt).item(), 3.0, places=12)
        pred2 = JointSet([[0.0, 0.0], [3.0, 4.0]])
        gt2 = JointSet([[1.0, 1.0], [0.0, 0.0]], visibility=[1, 0])
        self.assertAlmostEqual(Joints2DLoss()(pred2, gt2).item(), 1.0, places=12)
        self.assertAlmostEqual(Joints2DLoss("sum")(pred2, gt2).item(), 2.0, places=12)

    def test_random_instances_match_scalar_loops(self):
        rng = np.random.RandomState(30)
        for _ in range(100):
            h, w = rng.randint(1, 6, size=2)
            fore = (rng.rand(h, w) > 0.5).astype(np.float64)
            fore[rng.randint(h), rng.randint(w)] = 1.0
            gt_iuv = IUVImage(fore, rng.rand(h, w, 2))
            pred_iuv = IUVImage(rng.rand(h, w), rng.rand(h, w, 2))
            mask = rng.rand(h, w) > 0.3
            mask[rng.randint(h), rng.randint(w)] = True
            gt_map = LocationMap(rng.rand(h, w, 3), mask)
            pred_map = LocationMap(rng.rand(h, w, 3), np.ones((h, w), dtype=bool))
            weight = rng.uniform(1.0, 3.0, size=(h, w))
            bce, l1, count, num, den = 0.0, 0.0, 0, 0.0, 0.0
            for r in range(h):
                for c in range(w):
                    p = min(max(pred_iuv.fore[r, c], 1e-7), 1 - 1e-7)
                    g = gt_iuv.fore[r, c]
                    bce -= g * np.log(p) + (1 - g) * np.log(1 - p)
                    if g >= 0.5:
                        l1 += np.abs(pred_iuv.uv[r, c] - gt_iuv.uv[r, c]).sum()
                        count += 1
                    if mask[r, c]:
                        num += weight[r, c] * np.abs(pred_map.values[r, c] - gt_map.values[r, c]).sum()
                        den += weight[r, c]
            total, l_c, l_r = loss_iuv(pred_iuv, gt_iuv)
            self.assertAlmostEqual(l_c.item(), bce / (h * w), places=9)
            self.assertAlmostEqual(l_r.item(), l1 / count, places=9)
            self.assertAlmostEqual(total.item(), 0.2 * bce / (h * w) + l1 / count, places=9)
            self.assertAlmostEqual(loss_map(pred_map, gt_map, weight).item(), num / den, places=9)

            k = rng.randint(1, 10)
            pred3, gt3 = rng.randn(k, 3), rng.randn(k, 3)
            pred2, gt2 = rng.randn(k, 2), rng.randn(k, 2)
            visibility = (rng.rand(k) > 0.3).astype(np.float64)
            l3 = sum(np.abs(pred3[j] - gt3[j]).sum() for j in range(k)) / k
            l2 = sum(visibility[j] * ((pred2[j] - gt2[j]) ** 2).sum() for j in range(k)) / k
            self.assertAlmostEqual(
                Joints3DLoss()(JointSet(pred3), JointSet(gt3)).item(), l3, places=9
            )
            self.assertAlmostEqual(
                Joints2DLoss()(JointSet(pred2), JointSet(gt2, visibility=visibility)).item(),
                l2,
                places=9,
            )

    def test_consistent_loss_of_generated_data(self):
        mesh, atlas = flat_grid(5)
        camera = Camera(24.0, 4.0, 4.0)
        iuv = render_iuv(mesh, atlas, camera, 32)
        location = encode_location_map(mesh, atlas, 64)
        self.assertLess(loss_consistent(location, iuv, camera).item(), 0.25)
        self.assertLess(ConsistentLoss()(location, iuv, camera).item(), 0.25)
        shifted = loss_consistent(location, iuv, camera.translated(3.0, 4.0))
        self.assertGreater(shifted.item(), 20.0)

    def test_consistent_loss_needs_foreground(self):
        mesh, atlas = flat_grid(3)
        location = encode_location_map(mesh, atlas, 8)
        empty = IUVImage(np.zeros((4, 4)), np.zeros((4, 4, 2)))
        with self.assertRaises(DataError):
            loss_consistent(location, empty, Camera(1.0))

    def test_total(self):
        parts = {"iuv": torch.tensor(1.0), "map": 2.0, "consistent": 4.0}
        total, breakdown = loss_total(parts, LossWeights(lambda_con=0.5))
        self.assertAlmostEqual(total.item(), 5.0, places=12)
        self.assertEqual(breakdown["joints_3d"], 0.0)
        self.assertEqual(breakdown["lambda_con"], 0.5)
        self.assertEqual(breakdown["total"], 5.0)
        with self.assertRaises(ValueError):
            loss_total({"shape": 1.0})

    def test_total_module(self):
        pred = JointSet([[0.0, 0.0, 0.0], [1.0, 2.0, 3.0]])
        gt = JointSet([[1.0, 0.0, 0.0], [1.0, 2.0, 1.0]])
        loss = TotalLoss()
        total, breakdown = loss(
            pred_iuv=self.pred_iuv,
            gt_iuv=self.gt_iuv,
            pred_joints_3d=pred,
            gt_joints_3d=gt,
        )
        iuv = loss_iuv(self.pred_iuv, self.gt_iuv)[0].item()
        self.assertAlmostEqual(total.item(), iuv + 1.5, places=10)
        self.assertAlmostEqual(breakdown["iuv"], iuv, places=10)
        self.assertEqual(breakdown["map"], 0.0)

    def test_reduction_and_weights_checked(self):
        with self.assertRaises(ValueError):
            IUVLoss(reduction="none")
        with self.assertRaises(ValueError):
            LossWeights(lambda_c=-1.0)
