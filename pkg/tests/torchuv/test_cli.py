import json
import os
import shutil
import sys
import tempfile
import unittest
from unittest import mock

import numpy as np
from torchuv.atlas import UVAtlas
from torchuv.cli import main
from torchuv.codec import Camera, render_iuv
from torchuv.io import (
    load_grid,
    load_iuv,
    load_location_map,
    save_grid,
    save_iuv,
    save_mask,
)
from torchuv.mesh import TriangleMesh, load_mesh, save_obj
from torchuv.skeleton import JointRegressor

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


class CLITestCase(unittest.TestCase):
    def setUp(self):
        self.root = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.root)

    def path(self, *names):
        return os.path.join(self.root, *names)

    def run_json(self, argv):
        out = self.path("report.json")
        code = main(argv + ["--json", out])
        report = None
        if os.path.exists(out):
            with open(out) as fp:
                report = json.load(fp)
            os.remove(out)
        return code, report


class TestParametrization(CLITestCase):
    def test_humanoid_pipeline(self):
        code, report = self.run_json(["make-humanoid", "--out-dir", self.root])
        self.assertEqual(code, 0)
        self.assertEqual(report["vertices"], 178)
        for name in ("obj", "seam", "pairs", "seeds"):
            self.assertTrue(os.path.exists(self.path("humanoid." + name)))

        code, report = self.run_json(
            [
                "param",
                "--mesh", self.path("humanoid.obj"),
                "--seam", self.path("humanoid.seam"),
                "--pairs", self.path("humanoid.pairs"),
                "--max-iters", "40",
                "--out-mesh", self.path("chart.obj"),
                "--out-seam-map", self.path("chart.seammap"),
            ]
        )
        self.assertEqual(code, 0)
        self.assertEqual(report["chart_vertices"], 189)
        self.assertEqual(report["fold_overs"], 0)
        self.assertLess(report["symmetry_residual"], 1e-9)
        self.assertLessEqual(report["energy_final"], report["energy_initial"])
        chart, atlas = load_mesh(self.path("chart.obj"))
        self.assertEqual(chart.n_vertices, 189)
        self.assertIsNotNone(atlas)

        code, report = self.run_json(
            [
                "compare-uv",
                "--mesh", self.path("humanoid.obj"),
                "--atlas", "{},{}".format(self.path("chart.obj"), self.path("chart.seammap")),
                "--stride", "3",
                "--fragment", "3",
            ]
        )
        self.assertEqual(code, 0)
        self.assertAlmostEqual(report["surface"]["s1"], 1.0, places=12)
        self.assertIn("atlas0", report)
        self.assertIn("atlas0_fragmented", report)

    def test_closed_mesh_without_seam(self):
        main(["make-humanoid", "--out-dir", self.root])
        code = main(
            [
                "param",
                "--mesh", self.path("humanoid.obj"),
                "--out-mesh", self.path("chart.obj"),
                "--out-seam-map", self.path("chart.seammap"),
            ]
        )
        self.assertEqual(code, 2)
        self.assertFalse(os.path.exists(self.path("chart.obj")))

    def test_usage_errors(self):
        self.assertEqual(main([]), 1)
        self.assertEqual(main(["param", "--mesh", "x.obj"]), 1)
        self.assertEqual(main(["encode", "--resolution", "many"]), 1)

    def test_missing_file(self):
        code = main(
            [
                "param",
                "--mesh", self.path("nowhere.obj"),
                "--out-mesh", self.path("chart.obj"),
                "--out-seam-map", self.path("chart.seammap"),
            ]
        )
        self.assertEqual(code, 2)


class TestCodecCommands(CLITestCase):
    def setUp(self):
        super(TestCodecCommands, self).setUp()
        self.mesh, self.atlas = flat_grid(5)
        save_obj(self.path("flat.obj"), self.mesh, self.atlas)

    def test_encode_decode(self):
        code, report = self.run_json(
            [
                "encode",
                "--mesh", self.path("flat.obj"),
                "--atlas", self.path("flat.obj"),
                "--resolution", "16",
                "--out", self.path("loc.uvt"),
                "--preview", self.path("loc.png"),
            ]
        )
        self.assertEqual(code, 0)
        self.assertEqual(report["covered_texels"], 256)
        self.assertTrue(os.path.exists(self.path("loc.png")))
        self.assertTrue(load_location_map(self.path("loc.uvt")).mask.all())

        code = main(
            [
                "decode",
                "--map", self.path("loc.uvt"),
                "--atlas", self.path("flat.obj"),
                "--out", self.path("decoded.obj"),
            ]
        )
        self.assertEqual(code, 0)
        decoded, _ = load_mesh(self.path("decoded.obj"))
        error = np.linalg.norm(decoded.positions - self.mesh.positions, axis=1).max()
        self.assertLessEqual(error, 2.0 * self.mesh.bounding_box_diagonal() / 16)

    def test_render_and_transfer(self):
        code, report = self.run_json(
            [
                "render-iuv",
                "--mesh", self.path("flat.obj"),
                "--atlas", self.path("flat.obj"),
                "--camera", "16,0,0",
                "--size", "16",
                "--out", self.path("iuv.uvt"),
            ]
        )
        self.assertEqual(code, 0)
        self.assertEqual(report["foreground_pixels"], 256)
        self.assertTrue(np.all(load_iuv(self.path("iuv.uvt")).fore == 1.0))

        save_grid(self.path("image.uvt"), np.ones((16, 16, 2)))
        code, report = self.run_json(
            [
                "transfer",
                "--iuv", self.path("iuv.uvt"),
                "--image", self.path("image.uvt"),
                "--resolution", "8",
                "--out", self.path("uv.uvt"),
                "--counts", self.path("counts.uvt"),
            ]
        )
        self.assertEqual(code, 0)
        self.assertEqual(report["filled_texels"], 64)
        self.assertTrue(np.all(load_grid(self.path("counts.uvt")).values == 4))
        self.assertTrue(np.allclose(load_grid(self.path("uv.uvt")).values, 1.0))

        code = main(
            ["transfer", "--iuv", self.path("iuv.uvt"), "--out", self.path("uv.uvt")]
        )
        self.assertEqual(code, 2)

    def test_bad_camera(self):
        code = main(
            [
                "render-iuv",
                "--mesh", self.path("flat.obj"),
                "--atlas", self.path("flat.obj"),
                "--camera", "16,0",
                "--out", self.path("iuv.uvt"),
            ]
        )
        self.assertEqual(code, 1)
        self.assertFalse(os.path.exists(self.path("iuv.uvt")))
        self.assertEqual(main(["eval", "--camera=-1,0,0"]), 1)


class TestFactoryAndEval(CLITestCase):
    def setUp(self):
        super(TestFactoryAndEval, self).setUp()
        self.mesh, self.atlas = flat_grid(5)
        save_obj(self.path("flat.obj"), self.mesh, self.atlas)

    def manifest(self, samples):
        record = {
            "atlas": {"mesh": "flat.obj"},
            "template": "flat.obj",
            "outputs": {
                "summary": "out/summary.json",
                "reference": "out/reference.uvt",
                "weight": "out/weight.uvt",
            },
            "config": {"map_resolution": 64, "image_size": 32, "seeds": [12]},
            "samples": samples,
        }
        path = self.path("manifest.json")
        with open(path, "w") as fp:
            json.dump(record, fp)
        return path

    def sample(self, i, mesh="flat.obj"):
        return {
            "mesh": mesh,
            "camera": {"scale": 24.0, "tx": 4.0, "ty": 4.0},
            "iuv": "out/{}.iuv.uvt".format(i),
            "location": "out/{}.loc.uvt".format(i),
        }

    def test_factory(self):
        code, report = self.run_json(["factory", self.manifest([self.sample(0)])])
        self.assertEqual(code, 0)
        self.assertEqual(report["samples"], 1)
        with open(self.path("out", "summary.json")) as fp:
            summary = json.load(fp)
        self.assertEqual(summary["samples"][0]["status"], "ok")
        self.assertLess(summary["samples"][0]["consistency"], 1.0)
        for name in ("0.iuv.uvt", "0.iuv.png", "0.loc.uvt", "reference.uvt", "weight.uvt"):
            self.assertTrue(os.path.exists(self.path("out", name)))

    def test_factory_empty_and_failed(self):
        self.assertEqual(main(["factory", self.manifest([])]), 0)
        path = self.manifest([self.sample(0), self.sample(1, mesh="missing.obj")])
        self.assertEqual(main(["factory", "--no-previews", path]), 2)
        with open(self.path("out", "summary.json")) as fp:
            summary = json.load(fp)
        self.assertEqual(
            [s["status"] for s in summary["samples"]], ["ok", "failed"]
        )
        self.assertFalse(os.path.exists(self.path("out", "0.iuv.png")))

    def test_eval_perfect_prediction(self):
        iuv = render_iuv(self.mesh, self.atlas, Camera(24.0, 4.0, 4.0), 32)
        save_iuv(self.path("iuv.uvt"), iuv)
        rng = np.random.RandomState(3)
        matrix = rng.rand(4, 25)
        JointRegressor(matrix / matrix.sum(axis=1, keepdims=True)).save(
            self.path("joints.txt")
        )
        code, report = self.run_json(
            [
                "eval",
                "--pred-mesh", self.path("flat.obj"),
                "--gt-mesh", self.path("flat.obj"),
                "--regressor", self.path("joints.txt"),
                "--pred-iuv", self.path("iuv.uvt"),
                "--gt-iuv", self.path("iuv.uvt"),
            ]
        )
        self.assertEqual(code, 0)
        self.assertEqual(report["surface_error"], 0.0)
        self.assertEqual(report["mpjpe"], 0.0)
        self.assertAlmostEqual(report["mpjpe_pa"], 0.0, places=6)
        self.assertEqual(report["accuracy"], 1.0)
        self.assertEqual(report["f1"], 1.0)
        self.assertAlmostEqual(report["loss_iuv_r"], 0.0, places=6)
        self.assertIn("loss_total", report)

    def test_eval_needs_inputs(self):
        self.assertEqual(main(["eval"]), 2)

    def test_eval_masks(self):
        pred = np.zeros((4, 4), dtype=bool)
        pred[:2] = True
        gt = np.zeros((4, 4), dtype=bool)
        gt[:, :2] = True
        save_mask(self.path("pred.uvt"), pred)
        save_mask(self.path("gt.uvt"), gt)
        code, report = self.run_json(
            ["eval", "--pred-mask", self.path("pred.uvt"), "--gt-mask", self.path("gt.uvt")]
        )
        self.assertEqual(code, 0)
        # 4 true positives, 8 true negatives, 4 false positives and 4 false negatives
        self.assertEqual(report["accuracy"], 0.5)
        self.assertEqual(report["f1"], 0.5)

    def test_factory_outputs_do_not_depend_on_threads(self):
        outputs = {}
        for threads in ("1", "4"):
            shutil.rmtree(self.path("out"), ignore_errors=True)
            samples = [self.sample(i) for i in range(3)]
            with mock.patch.dict(os.environ, {"UVT_THREADS": threads}):
                self.assertEqual(main(["factory", self.manifest(samples)]), 0)
            outputs[threads] = {}
            for name in sorted(os.listdir(self.path("out"))):
                with open(self.path("out", name), "rb") as fp:
                    outputs[threads][name] = fp.read()
        self.assertEqual(sorted(outputs["1"]), sorted(outputs["4"]))
        self.assertIn("2.loc.uvt", outputs["1"])
        for name in outputs["1"]:
            self.assertEqual(outputs["1"][name], outputs["4"][name], name)
