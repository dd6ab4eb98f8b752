import io
import json
import os
import shutil
import sys
import tempfile
import unittest
from contextlib import redirect_stdout
from unittest import mock

from torchuv.cli.common import emit_report
from torchuv.logging import visualize
from torchuv.logging.logger import Logger

sys.path.append(os.path.join(os.path.dirname(__file__), "../.."))


@mock.patch.object(visualize, "CONSOLE_LOGGING", 1)
@mock.patch.object(visualize, "TENSORBOARD_LOGGING", 0)
class TestVisualize(unittest.TestCase):
    def test_format_value(self):
        self.assertEqual(visualize.format_value(True), "1")
        self.assertEqual(visualize.format_value(7), "7")
        self.assertEqual(visualize.format_value(0.1), "0.1")
        self.assertEqual(visualize.format_value("ok"), "ok")

    def test_report_lines(self):
        buf = io.StringIO()
        with redirect_stdout(buf):
            visualize.ReportVisualize()({"vertices": 178, "s1": 0.25})
        self.assertEqual(buf.getvalue().splitlines(), ["vertices=178", "s1=0.25"])

    def test_progress_trace(self):
        progress = visualize.ProgressVisualize(print_every=2)
        buf = io.StringIO()
        with redirect_stdout(buf):
            for i, energy in enumerate([3.0, 2.0, 1.5]):
                progress(i, energy)
        self.assertEqual(progress.trace, [3.0, 2.0, 1.5])
        self.assertEqual(progress.step, 4)
        self.assertEqual(buf.getvalue().splitlines(), ["# iteration 2 energy 2.0"])

    def test_locked_console(self):
        buf = io.StringIO()
        with redirect_stdout(buf):
            visualize.SampleVisualize()(0, "ok", 0.5, lock_console=True)
        self.assertEqual(buf.getvalue(), "")

    def test_sample_lines(self):
        buf = io.StringIO()
        with redirect_stdout(buf):
            sample = visualize.SampleVisualize()
            sample(3, "ok", 0.125)
            sample(4, "failed", error="DataError: bad")
        self.assertEqual(
            buf.getvalue().splitlines(),
            ["sample[3]=ok consistency=0.125", "sample[4]=failed error=DataError: bad"],
        )


class TestEmitReport(unittest.TestCase):
    def setUp(self):
        self.root = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.root)

    def test_nested_report(self):
        path = os.path.join(self.root, "out", "report.json")
        report = {"metric": "hop-count", "atlas0": {"s1": 0.5}, "sizes": [2, 3]}
        buf = io.StringIO()
        with mock.patch.object(visualize, "CONSOLE_LOGGING", 1), mock.patch(
            "torchuv.logging.logger.TENSORBOARD_LOGGING", 0
        ), mock.patch.object(visualize, "TENSORBOARD_LOGGING", 0):
            logger = Logger()
            with redirect_stdout(buf):
                emit_report(logger, report, path)
            logger.close()
        self.assertEqual(
            buf.getvalue().splitlines(),
            ["metric=hop-count", "atlas0.s1=0.5", "sizes=2 3"],
        )
        with open(path) as fp:
            self.assertEqual(json.load(fp), report)
