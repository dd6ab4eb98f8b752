import json
import os

from ..codec.types import Camera
from ..exceptions import DataError

__all__ = ["FactoryManifest", "SampleRecord", "FACTORY_DEFAULTS"]

FACTORY_DEFAULTS = {
    "map_resolution": 128,
    "image_size": 256,
    "alpha": 2.0,
    "seeds": [],
    "threshold": 0.5,
    "consistency_floor": 1.0,
}


class SampleRecord(object):
    r"""One posed mesh of a factory manifest and where its supervision goes.

    Attributes:
        index (int): Position in the manifest.
        mesh (str): Absolute path of the posed mesh.
        camera (Camera): Camera of the rendered IUV image.
        iuv (str): Output path of the IUV image.
        location (str): Output path of the location map.
    """

    def __init__(self, index, mesh, camera, iuv, location):
        self.index = index
        self.mesh = mesh
        self.camera = camera
        self.iuv = iuv
        self.location = location

    def __repr__(self):
        return "SampleRecord(index={}, mesh={})".format(self.index, self.mesh)


class FactoryManifest(object):
    r"""Parsed data factory manifest.

    Relative paths resolve against the directory of the manifest file. The atlas mesh, its
    seam map and the template must exist; a missing sample mesh only fails that sample.

    Args:
        record (dict): The decoded JSON document.
        root (str, optional): Directory relative paths resolve against.

    Raises:
        DataError: If a required field is missing, a required input does not exist or two
            outputs share a path.
    """

    def __init__(self, record, root="."):
        self.root = root
        try:
            atlas = record["atlas"]
            self.atlas_mesh = self._path(atlas["mesh"])
            self.seam_map = (
                self._path(atlas["seam_map"]) if atlas.get("seam_map") else None
            )
            self.template = self._path(record["template"])
            outputs = record.get("outputs", {})
            self.weight = self._path(outputs["weight"]) if outputs.get("weight") else None
            self.reference = (
                self._path(outputs["reference"]) if outputs.get("reference") else None
            )
            self.summary = self._path(outputs.get("summary", "summary.json"))
            self.contact_sheet = (
                self._path(outputs["contact_sheet"])
                if outputs.get("contact_sheet")
                else None
            )
            self.config = dict(FACTORY_DEFAULTS)
            self.config.update(record.get("config", {}))
            self.samples = [
                SampleRecord(
                    i,
                    self._path(s["mesh"]),
                    Camera.from_dict(s["camera"]),
                    self._path(s["iuv"]),
                    self._path(s["location"]),
                )
                for i, s in enumerate(record.get("samples", []))
            ]
        except (KeyError, TypeError) as e:
            raise DataError("manifest is missing field {}".format(e))
        for path in (self.atlas_mesh, self.seam_map, self.template):
            if path is not None and not os.path.exists(path):
                raise DataError("manifest input {} does not exist".format(path))
        if self.weight is not None and not self.config["seeds"]:
            raise DataError("manifest asks for a weight map but lists no seeds")
        threshold = self.config["threshold"]
        if not 0.0 <= threshold <= 1.0:
            raise DataError(
                "manifest threshold must lie in [0, 1], got {}".format(threshold)
            )
        self._check_unique()

    def _path(self, path):
        return os.path.normpath(os.path.join(self.root, path))

    def _check_unique(self):
        seen = set()
        for path in self.output_paths():
            if path in seen:
                raise DataError("manifest output {} is listed twice".format(path))
            seen.add(path)

    def output_paths(self):
        paths = [p for p in (self.weight, self.reference, self.summary) if p]
        if self.contact_sheet:
            paths.append(self.contact_sheet)
        for s in self.samples:
            paths.extend([s.iuv, s.location])
        return paths

    @classmethod
    def load(cls, path):
        r"""Reads a manifest file."""
        try:
            with open(path, "r") as fp:
                record = json.load(fp)
        except ValueError as e:
            raise DataError("{}: invalid JSON: {}".format(path, e))
        return cls(record, os.path.dirname(os.path.abspath(path)))

    def __len__(self):
        return len(self.samples)
