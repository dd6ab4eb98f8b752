import json
import os
from concurrent.futures import ThreadPoolExecutor
from warnings import warn

from ..codec.iuv import render_iuv
from ..codec.location import encode_location_map, reference_location_map
from ..codec.weights import weight_map
from ..io.manifest import FactoryManifest
from ..io.preview import iuv_preview, save_contact_sheet, save_png
from ..io.tensors import save_grid, save_iuv, save_location_map
from ..logging.logger import Logger
from ..logging.visualize import SampleVisualize
from ..losses.functional import loss_consistent
from ..mesh.fileio import load_mesh
from ..utils import num_threads
from .common import load_atlas, png_path

__all__ = ["DataFactory"]


class DataFactory(object):
    r"""Generates supervision data (IUV images, location maps, weight and reference maps)
    from the posed meshes and cameras listed in a manifest.

    Features provided by the factory are:

    - One reference map of the template mesh and one weight map, written once.
    - Per sample: the ground truth IUV image and location map as UVT files plus a PNG
      preview of the IUV image.
    - A self-check: the consistent loss of every generated sample must stay below
      ``consistency_floor`` pixels squared.
    - A summary JSON and an optional contact sheet of all previews.

    Samples run on ``UVT_THREADS`` workers. A failing sample is recorded in the summary and
    the others carry on; files are never shared between samples so their content does not
    depend on the number of workers.

    Args:
        manifest (FactoryManifest or str): The manifest or its path.
        previews (bool, optional): Write a PNG next to every IUV image.
        logger (torchuv.logging.Logger, optional): Where sample status lines go.

    Any entry of the manifest ``config`` can be overridden via keyword arguments.
    """

    def __init__(self, manifest, previews=True, logger=None, **kwargs):
        if not isinstance(manifest, FactoryManifest):
            manifest = FactoryManifest.load(manifest)
        self.manifest = manifest
        self.previews = previews
        self.config = dict(manifest.config)
        for key, val in kwargs.items():
            if key in self.config:
                warn(
                    "Overiding the default value of {} from {} to {}".format(
                        key, self.config[key], val
                    )
                )
            self.config[key] = val
        self.logger = Logger() if logger is None else logger
        self.sample_viz = self.logger.register("samples", SampleVisualize)
        self.chart, self.atlas = load_atlas(manifest.atlas_mesh, manifest.seam_map)
        self.template, _ = load_mesh(manifest.template)
        self._previews = {}

    def build_shared(self):
        r"""Writes the reference and weight maps.

        Returns:
            A dict with the written paths.
        """
        written = {}
        resolution = self.config["map_resolution"]
        if self.manifest.reference:
            reference = reference_location_map(self.template, self.atlas, resolution)
            save_location_map(self.manifest.reference, reference)
            written["reference"] = self.manifest.reference
        if self.manifest.weight:
            weights = weight_map(
                self.template,
                self.atlas,
                self.config["seeds"],
                self.config["alpha"],
                resolution,
            )
            save_grid(self.manifest.weight, weights)
            written["weight"] = self.manifest.weight
        return written

    def process_sample(self, sample):
        r"""Generates and checks the supervision of one sample.

        Returns:
            A dict with ``index``, ``mesh``, ``status`` (``ok``, ``inconsistent`` or ``failed``),
            and either ``consistency`` or ``error``.
        """
        record = {"index": sample.index, "mesh": sample.mesh}
        try:
            mesh, _ = load_mesh(sample.mesh)
            iuv = render_iuv(
                mesh, self.atlas, sample.camera, self.config["image_size"]
            )
            location = encode_location_map(
                mesh, self.atlas, self.config["map_resolution"]
            )
            consistency = float(
                loss_consistent(
                    location, iuv, sample.camera, self.config["threshold"]
                )
            )
            save_iuv(sample.iuv, iuv)
            save_location_map(sample.location, location)
            if self.previews:
                preview = iuv_preview(iuv)
                save_png(png_path(sample.iuv), preview)
                self._previews[sample.index] = preview
        except Exception as e:
            record.update(status="failed", error="{}: {}".format(type(e).__name__, e))
            return record
        record["consistency"] = consistency
        if consistency <= self.config["consistency_floor"]:
            record["status"] = "ok"
        else:
            record["status"] = "inconsistent"
        return record

    def run(self):
        r"""Runs the whole manifest and writes the summary.

        Returns:
            The summary dict, also written to the manifest's summary path.
        """
        summary = {"outputs": self.build_shared()}
        samples = self.manifest.samples
        workers = min(num_threads(), max(len(samples), 1))
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                records = list(pool.map(self.process_sample, samples))
        else:
            records = [self.process_sample(s) for s in samples]
        for r in records:
            self.sample_viz(
                r["index"], r["status"], r.get("consistency"), r.get("error")
            )
        summary["samples"] = records
        summary["n_samples"] = len(records)
        summary["n_failed"] = sum(r["status"] == "failed" for r in records)
        summary["n_inconsistent"] = sum(
            r["status"] == "inconsistent" for r in records
        )
        summary["consistency_floor"] = self.config["consistency_floor"]
        if self.manifest.contact_sheet and self.previews:
            previews = [
                self._previews[r["index"]]
                for r in records
                if r["index"] in self._previews
            ]
            save_contact_sheet(self.manifest.contact_sheet, previews)
            summary["outputs"]["contact_sheet"] = self.manifest.contact_sheet
        directory = os.path.dirname(self.manifest.summary)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(self.manifest.summary, "w") as fp:
            json.dump(summary, fp, indent=2)
            fp.write("\n")
        return summary

