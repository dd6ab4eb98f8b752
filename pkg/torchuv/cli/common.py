import json
import os

from ..atlas.atlas import UVAtlas
from ..exceptions import DataError
from ..logging.visualize import format_value
from ..mesh.fileio import load_mesh, load_seam_map

__all__ = ["load_atlas", "parse_atlas_spec", "emit_report", "png_path"]


def load_atlas(mesh_path, seam_map_path=None, per_vertex_uv=False):
    r"""Reads a chart mesh with ``vt`` records and its optional seam map sidecar.

    Returns:
        A tuple ``(chart_mesh, atlas)``.

    Raises:
        DataError: If the OBJ file carries no usable ``vt`` records.
    """
    mesh, atlas = load_mesh(mesh_path, per_vertex_uv=per_vertex_uv)
    if atlas is None:
        raise DataError("{} has no per-vertex vt coordinates".format(mesh_path))
    seam_map = None
    if seam_map_path:
        seam_map = load_seam_map(seam_map_path)
    return mesh, UVAtlas(atlas.coords, seam_map, mesh.faces)


def parse_atlas_spec(spec):
    r"""Splits ``mesh.obj[,seam_map]`` into its two paths."""
    parts = spec.split(",", 1)
    return parts[0], (parts[1] if len(parts) > 1 and parts[1] else None)


def png_path(path):
    r"""Preview path next to a UVT output: same name with a ``.png`` suffix."""
    return os.path.splitext(path)[0] + ".png"


def _jsonable(value):
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if hasattr(value, "item"):
        return value.item()
    return value


def emit_report(logger, report, json_path=None):
    r"""Prints ``report`` as ``key=value`` lines and writes it as JSON when asked.

    Nested dicts are flattened into dotted keys for the text form only.
    """
    flat = {}

    def walk(prefix, value):
        if isinstance(value, dict):
            for k, v in value.items():
                walk("{}.{}".format(prefix, k) if prefix else k, v)
        elif isinstance(value, (list, tuple)):
            flat[prefix] = " ".join(format_value(v) for v in value)
        else:
            flat[prefix] = value

    walk("", report)
    logger.report(flat)
    if json_path:
        directory = os.path.dirname(json_path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(json_path, "w") as fp:
            json.dump(_jsonable(report), fp, indent=2)
            fp.write("\n")
