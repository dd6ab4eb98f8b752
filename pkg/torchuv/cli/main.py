import argparse
import os
import sys
import warnings

import numpy as np

from .. import __version__
from ..atlas.atlas import SeamSpec, UVAtlas, fold_overs
from ..atlas.cut import cut_mesh
from ..atlas.distortion import AreaDistortionMinimizer, area_distortion_energy
from ..atlas.embed import tutte_embed
from ..atlas.similarity import fragment_atlas, similarity_s1, similarity_s2
from ..atlas.symmetry import _chart_mirror, mirror_residual, symmetrize_atlas
from ..codec.iuv import render_iuv
from ..codec.location import decode_vertices, encode_location_map, merge_seam_vertices
from ..codec.transfer import transfer_to_image, transfer_to_uv
from ..codec.types import Camera
from ..exceptions import DataError, InvariantError, ShapeError, exit_code
from ..io.preview import iuv_preview, location_preview, save_png
from ..io.tensors import (
    load_grid,
    load_iuv,
    load_location_map,
    load_mask,
    save_grid,
    save_iuv,
    save_location_map,
)
from ..logging.logger import Logger
from ..logging.visualize import ProgressVisualize
from ..losses.functional import (
    loss_consistent,
    loss_iuv,
    loss_joints_2d,
    loss_joints_3d,
    loss_map,
    loss_total,
)
from ..losses.weights import LossWeights
from ..mesh.distance import surface_distance_matrix, uv_distance_matrix
from ..mesh.fileio import (
    load_mesh,
    load_pairs,
    save_indices,
    save_obj,
    save_pairs,
    save_seam_map,
)
from ..mesh.humanoid import humanoid
from ..mesh.trimesh import TriangleMesh
from ..metrics.functional import mpjpe, segmentation_metrics, surface_error
from ..skeleton.regressor import JointRegressor, regress_joints
from .common import emit_report, load_atlas, parse_atlas_spec
from .factory import DataFactory

__all__ = ["main", "build_parser"]


class _Parser(argparse.ArgumentParser):
    r"""Usage errors exit with code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, "{}: error: {}\n".format(self.prog, message))


def _camera(text):
    try:
        return Camera.parse(text)
    except (ValueError, DataError) as e:
        raise argparse.ArgumentTypeError(str(e))


# Parametrization


def cmd_param(args, logger):
    pairs = load_pairs(args.pairs) if args.pairs else None
    mesh, _ = load_mesh(args.mesh, symmetric_pairs=pairs)
    seam = SeamSpec.load(args.seam) if args.seam else SeamSpec()
    open_mesh, seam_map = cut_mesh(mesh, seam)
    atlas = tutte_embed(open_mesh, args.boundary, seam_map)
    report = {
        "vertices": mesh.n_vertices,
        "chart_vertices": open_mesh.n_vertices,
        "faces": open_mesh.n_faces,
        "energy_initial": area_distortion_energy(
            atlas.coords, open_mesh.faces, open_mesh.positions
        ),
    }
    minimizer = AreaDistortionMinimizer(
        max_iters=args.max_iters,
        step=args.step,
        tolerance=args.tolerance,
        min_area_ratio=args.min_area_ratio,
    )
    callback = None
    if args.verbose:
        callback = logger.register("progress", ProgressVisualize, "energy")
    atlas = minimizer(atlas, open_mesh, callback)
    report["iterations"] = len(minimizer.energies) - 1
    report["energy_final"] = minimizer.energies[-1]
    if mesh.mirror is not None and not args.no_symmetrize:
        atlas = symmetrize_atlas(atlas, open_mesh)
        report["energy_symmetric"] = area_distortion_energy(
            atlas.coords, open_mesh.faces, open_mesh.positions
        )
        report["symmetry_residual"] = mirror_residual(
            atlas, _chart_mirror(atlas, open_mesh)
        )
    flipped = fold_overs(atlas)
    report["fold_overs"] = len(flipped)
    if len(flipped) > 0:
        raise InvariantError(
            "parametrization has {} flipped face(s), first is face {}".format(
                len(flipped), int(flipped[0])
            )
        )
    save_obj(args.out_mesh, open_mesh, atlas)
    save_seam_map(args.out_seam_map, seam_map)
    report["out_mesh"] = args.out_mesh
    report["out_seam_map"] = args.out_seam_map
    return report, 0


# UV map comparison


def _uv_grid_labels(atlas, faces, parts):
    centroids = atlas.coords[faces].mean(axis=1)
    cells = np.minimum((centroids * parts).astype(np.int64), parts - 1)
    return cells[:, 1] * parts + cells[:, 0]


def _uv_matrix(atlas, mesh, stride):
    if atlas.seam_map is not None and atlas.n_source_vertices == mesh.n_vertices:
        return uv_distance_matrix(atlas, stride, collapse_seams=True)
    if atlas.n_vertices != mesh.n_vertices:
        raise ShapeError(
            "atlas of {} vertices cannot be compared with a mesh of {}".format(
                atlas.n_vertices, mesh.n_vertices
            )
        )
    return uv_distance_matrix(atlas, stride)


def cmd_compare_uv(args, logger):
    mesh, _ = load_mesh(args.mesh)
    surface = surface_distance_matrix(mesh, args.metric, args.stride)
    report = {
        "metric": args.metric,
        "vertices": int(surface.n),
        "surface": {
            "s1": similarity_s1(surface, surface),
            "s2": similarity_s2(surface, surface),
        },
    }
    for i, spec in enumerate(args.atlas):
        path, seam_map = parse_atlas_spec(spec)
        _, atlas = load_atlas(path, seam_map, per_vertex_uv=True)
        rows = [("atlas{}".format(i), atlas)]
        if args.fragment:
            labels = _uv_grid_labels(atlas, atlas.faces, args.fragment)
            rows.append(("atlas{}_fragmented".format(i), fragment_atlas(atlas, labels)))
        for name, a in rows:
            uv = _uv_matrix(a, mesh, args.stride)
            report[name] = {
                "path": path,
                "s1": similarity_s1(surface, uv),
                "s2": similarity_s2(surface, uv),
            }
    return report, 0


# Data factory


def cmd_factory(args, logger):
    factory = DataFactory(args.manifest, previews=not args.no_previews, logger=logger)
    summary = factory.run()
    report = {
        "samples": summary["n_samples"],
        "failed": summary["n_failed"],
        "inconsistent": summary["n_inconsistent"],
        "summary": factory.manifest.summary,
    }
    code = 0
    if summary["n_failed"]:
        code = 2
    elif summary["n_inconsistent"]:
        code = 3
    return report, code


# Evaluation


def cmd_eval(args, logger):
    report = {}
    losses = {}
    weights = LossWeights(args.lambda_c, args.lambda_r, args.lambda_con)
    camera = args.camera
    if args.pred_mesh and args.gt_mesh:
        pred, _ = load_mesh(args.pred_mesh)
        gt, _ = load_mesh(args.gt_mesh)
        report["surface_error"] = surface_error(pred.positions, gt.positions)
        if args.regressor:
            regressor = JointRegressor.load(args.regressor)
            pj = regress_joints(pred.positions, regressor)
            gj = regress_joints(gt.positions, regressor)
            report["mpjpe"] = mpjpe(pj, gj)
            report["mpjpe_pa"] = mpjpe(pj, gj, "procrustes")
            losses["joints_3d"] = loss_joints_3d(pj, gj, args.reduction)
            if camera is not None:
                losses["joints_2d"] = loss_joints_2d(
                    pj.project(camera), gj.project(camera), args.reduction
                )
    gt_iuv = load_iuv(args.gt_iuv) if args.gt_iuv else None
    if args.pred_iuv and gt_iuv is not None:
        pred_iuv = load_iuv(args.pred_iuv)
        report.update(segmentation_metrics(pred_iuv.fore, gt_iuv.fore))
        total, l_c, l_r = loss_iuv(
            pred_iuv, gt_iuv, weights.lambda_c, weights.lambda_r, args.reduction
        )
        losses["iuv"] = total
        report["loss_iuv_c"] = float(l_c)
        report["loss_iuv_r"] = float(l_r)
    if args.pred_mask and args.gt_mask:
        # explicit silhouettes override the IUV foregrounds
        pred_mask, gt_mask = load_mask(args.pred_mask), load_mask(args.gt_mask)
        report.update(segmentation_metrics(pred_mask, gt_mask))
    pred_map = load_location_map(args.pred_map) if args.pred_map else None
    if pred_map is not None and args.gt_map:
        gt_map = load_location_map(args.gt_map)
        weight = load_grid(args.weight) if args.weight else np.ones(gt_map.resolution)
        losses["map"] = loss_map(pred_map, gt_map, weight, args.reduction)
    if pred_map is not None and gt_iuv is not None and camera is not None:
        losses["consistent"] = loss_consistent(
            pred_map, gt_iuv, camera, args.threshold, args.reduction
        )
    if losses:
        _, breakdown = loss_total(losses, weights)
        for name in losses:
            report["loss_{}".format(name)] = breakdown[name]
        report["loss_total"] = breakdown["total"]
    if not report:
        raise ValueError("nothing to evaluate: pass matching pred and gt inputs")
    return report, 0


# Codec wrappers


def _mesh_and_atlas(args):
    mesh, _ = load_mesh(args.mesh)
    _, atlas = load_atlas(args.atlas, args.seam_map)
    return mesh, atlas


def cmd_encode(args, logger):
    mesh, atlas = _mesh_and_atlas(args)
    location = encode_location_map(mesh, atlas, args.resolution)
    save_location_map(args.out, location)
    if args.preview:
        save_png(args.preview, location_preview(location))
    return {"out": args.out, "covered_texels": int(location.mask.sum())}, 0


def cmd_decode(args, logger):
    chart, atlas = load_atlas(args.atlas, args.seam_map)
    points = decode_vertices(load_location_map(args.map), atlas)
    if args.source:
        source, _ = load_mesh(args.source)
        points = merge_seam_vertices(points, atlas.seam_map, source.n_vertices)
        save_obj(args.out, TriangleMesh(points, source.faces, validate=False))
    else:
        save_obj(args.out, TriangleMesh(points, chart.faces, validate=False), atlas)
    return {"out": args.out, "vertices": len(points)}, 0


def cmd_render_iuv(args, logger):
    mesh, atlas = _mesh_and_atlas(args)
    iuv = render_iuv(mesh, atlas, args.camera, args.size)
    save_iuv(args.out, iuv)
    if args.preview:
        save_png(args.preview, iuv_preview(iuv))
    return {"out": args.out, "foreground_pixels": int((iuv.fore > 0).sum())}, 0


def cmd_transfer(args, logger):
    iuv = load_iuv(args.iuv)
    if args.direction == "uv":
        if not args.image:
            raise ValueError("--image is needed to transfer to UV space")
        grid, counts = transfer_to_uv(
            load_grid(args.image), iuv, args.resolution, args.threshold
        )
        save_grid(args.out, grid)
        if args.counts:
            save_grid(args.counts, counts)
        return {"out": args.out, "filled_texels": int((counts > 0).sum())}, 0
    if not args.map:
        raise ValueError("--map is needed to transfer to image space")
    grid = transfer_to_image(load_location_map(args.map), iuv, args.threshold)
    save_grid(args.out, grid)
    return {"out": args.out}, 0


def cmd_make_humanoid(args, logger):
    asset = humanoid()
    out = args.out_dir
    paths = {
        "mesh": os.path.join(out, "humanoid.obj"),
        "seam": os.path.join(out, "humanoid.seam"),
        "pairs": os.path.join(out, "humanoid.pairs"),
        "seeds": os.path.join(out, "humanoid.seeds"),
    }
    save_obj(paths["mesh"], asset.mesh)
    SeamSpec(asset.seam).save(paths["seam"])
    save_pairs(paths["pairs"], asset.mesh)
    save_indices(paths["seeds"], asset.torso_seeds)
    report = {
        "vertices": asset.mesh.n_vertices,
        "faces": asset.mesh.n_faces,
        "seam_edges": len(asset.seam),
    }
    report.update(paths)
    return report, 0


def _add_atlas(p):
    p.add_argument("--atlas", required=True, help="chart mesh OBJ with vt records")
    p.add_argument("--seam-map", default=None, help="open_idx orig_idx sidecar")


def build_parser():
    r"""Builds the ``torchuv`` argument parser with one subcommand per operation."""
    parser = _Parser(prog="torchuv", description="Continuous UV map toolkit")
    parser.add_argument(
        "--version", action="version", version="torchuv {}".format(__version__)
    )
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("param", help="build a continuous UV atlas")
    p.add_argument("--mesh", required=True)
    p.add_argument("--seam", default=None, help="'edge i j' file; empty if omitted")
    p.add_argument("--pairs", default=None, help="symmetric pairs 'i j' file")
    p.add_argument("--boundary", choices=("square", "circle"), default="square")
    p.add_argument("--max-iters", type=int, default=500)
    p.add_argument("--step", type=float, default=1e-2)
    p.add_argument("--tolerance", type=float, default=1e-7)
    p.add_argument("--min-area-ratio", type=float, default=0.5)
    p.add_argument("--no-symmetrize", action="store_true")
    p.add_argument("--out-mesh", required=True)
    p.add_argument("--out-seam-map", required=True)
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(func=cmd_param)

    p = sub.add_parser("compare-uv", help="score atlases against the surface")
    p.add_argument("--mesh", required=True, help="closed source mesh")
    p.add_argument(
        "--atlas",
        action="append",
        default=[],
        help="chart OBJ[,seam_map]; repeat for several atlases",
    )
    p.add_argument(
        "--metric", choices=("edge-length", "hop-count"), default="edge-length"
    )
    p.add_argument("--stride", type=int, default=None)
    p.add_argument(
        "--fragment",
        type=int,
        default=0,
        help="also score each atlas cut into an N x N grid of shuffled charts",
    )
    p.set_defaults(func=cmd_compare_uv)

    p = sub.add_parser("factory", help="generate supervision data from a manifest")
    p.add_argument("manifest")
    p.add_argument("--no-previews", action="store_true")
    p.set_defaults(func=cmd_factory)

    p = sub.add_parser("eval", help="metrics and losses between predictions and ground truth")
    p.add_argument("--pred-mesh")
    p.add_argument("--gt-mesh")
    p.add_argument("--regressor")
    p.add_argument("--pred-iuv")
    p.add_argument("--gt-iuv")
    p.add_argument("--pred-map")
    p.add_argument("--gt-map")
    p.add_argument("--weight")
    p.add_argument("--pred-mask")
    p.add_argument("--gt-mask")
    p.add_argument("--camera", type=_camera, help="s,tx,ty")
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--reduction", choices=("mean", "sum"), default="mean")
    p.add_argument("--lambda-c", type=float, default=0.2)
    p.add_argument("--lambda-r", type=float, default=1.0)
    p.add_argument("--lambda-con", type=float, default=1.0)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("encode", help="mesh to location map")
    p.add_argument("--mesh", required=True)
    _add_atlas(p)
    p.add_argument("--resolution", type=int, default=128)
    p.add_argument("--out", required=True)
    p.add_argument("--preview")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="location map to mesh")
    p.add_argument("--map", required=True)
    _add_atlas(p)
    p.add_argument("--source", help="source mesh; merges seam copies onto it")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("render-iuv", help="ground truth IUV image of a posed mesh")
    p.add_argument("--mesh", required=True)
    _add_atlas(p)
    p.add_argument("--camera", type=_camera, required=True, help="s,tx,ty")
    p.add_argument("--size", type=int, default=256)
    p.add_argument("--out", required=True)
    p.add_argument("--preview")
    p.set_defaults(func=cmd_render_iuv)

    p = sub.add_parser("transfer", help="move grids between image and UV space")
    p.add_argument("--iuv", required=True)
    p.add_argument("--direction", choices=("uv", "image"), default="uv")
    p.add_argument("--image", help="(h, w, C) grid for --direction uv")
    p.add_argument("--map", help="location map for --direction image")
    p.add_argument("--resolution", type=int, default=128)
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--out", required=True)
    p.add_argument("--counts")
    p.set_defaults(func=cmd_transfer)

    p = sub.add_parser("make-humanoid", help="write the bundled test body")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_make_humanoid)

    for action in sub.choices.values():
        action.add_argument("--json", default=None, help="also write the report here")
    return parser


def main(argv=None):
    r"""Entry point of the ``torchuv`` command.

    Returns:
        ``0`` on success, ``1`` on a usage error, ``2`` on bad input data and ``3`` when an
        output fails its own checks.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 1
    logger = Logger()
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("always")
            report, code = args.func(args, logger)
        emit_report(logger, report, args.json)
        return code
    except Exception as e:
        sys.stderr.write("torchuv {}: {}: {}\n".format(args.command, type(e).__name__, e))
        return exit_code(e)
    finally:
        logger.close()


if __name__ == "__main__":
    sys.exit(main())
