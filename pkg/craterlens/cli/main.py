import argparse
import dataclasses
import sys
from typing import Optional, Sequence

from craterlens.detect import PostprocParams, load_georef
from craterlens.params import PRESETS, RunConfiguration
from craterlens.utils import CraterLensError, exit_code_for
from craterlens.utils.logging import get_logger, parse_logging_level, setup_logging
from . import commands

__all__ = ["build_parser", "resolve_config", "main"]

logger = get_logger(__name__)


def parse_float_list(text: str) -> list[float]:
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def parse_band(text: str) -> tuple[float, float]:
    values = parse_float_list(text)
    if len(values) != 2 or not values[0] < values[1]:
        raise argparse.ArgumentTypeError(f"expected DMIN,DMAX with DMIN < DMAX, got {text!r}")
    return values[0], values[1]


def parse_size(text: str) -> tuple[int, int]:
    try:
        h, w = (int(v) for v in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected HEIGHTxWIDTH, got {text!r}") from None
    if h < 1 or w < 1:
        raise argparse.ArgumentTypeError(f"size must be positive, got {text!r}")
    return h, w


def _log_level(text: str) -> int:
    try:
        return parse_logging_level(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON configuration file. Default: the selected preset.")
    common.add_argument(
        "--preset", choices=sorted(PRESETS), default="desk", help="Built-in configuration. Default: %(default)s"
    )
    common.add_argument("--seed", type=int, help="Seed of the random generator.")
    common.add_argument("--out", default=".", help="Output directory. Default: %(default)s")
    common.add_argument("--georef", action="append", help="GeoRef JSON file; overrides the configuration.")
    common.add_argument("--band", type=parse_band, default=(5.0, 10.0), help="Catalog diameter band DMIN,DMAX (km).")
    common.add_argument("--iou-min", type=float, help="Minimal IoU of a true positive.")
    common.add_argument("--m-grid", type=parse_float_list, help="Comma-separated boundary margins.")
    common.add_argument("--s-grid", type=parse_float_list, help="Comma-separated score thresholds.")
    common.add_argument("--tau-grid", type=parse_float_list, help="Comma-separated NMS thresholds.")
    common.add_argument("--m", type=float, help="Boundary margin used by postprocess.")
    common.add_argument("--s", type=float, help="Score threshold used by postprocess.")
    common.add_argument("--tau", type=float, help="NMS threshold used by postprocess.")
    common.add_argument("--patch-size", type=int, help="Detection patch size in pixels.")
    common.add_argument("--log-level", type=_log_level, default="WARNING", help="Default: %(default)s")
    common.add_argument("--log-filter", default=".*", help="Regexp on logger names. Default: %(default)s")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(prog="craterlens", description="Arbitrary-scale SR and crater evaluation.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train-sr", parents=[common], help="Train a super-resolution model.")
    p.add_argument("images", help="Directory of 8/16-bit PGM training images.")

    p = sub.add_parser("sr", parents=[common], help="Super-resolve an image.")
    p.add_argument("bundle", help="Model bundle directory.")
    p.add_argument("image", help="Input PGM image.")
    size = p.add_mutually_exclusive_group(required=True)
    size.add_argument("--scale", type=float, help="Scale factor, may be non-integer.")
    size.add_argument("--size", type=parse_size, help="Explicit output size HEIGHTxWIDTH.")

    p = sub.add_parser("postprocess", parents=[common], help="Convert raw pixel detections to merged craters.")
    p.add_argument("detections", help="Pixel detections CSV.")

    p = sub.add_parser("combine", parents=[common], help="Combine geographic detections of several models.")
    p.add_argument("inputs", nargs="+", help="Geographic detections CSVs.")

    p = sub.add_parser("evaluate", parents=[common], help="Evaluate detections against a catalog.")
    p.add_argument("detections", help="Geographic detections CSV.")
    p.add_argument("catalog", help="Catalog CSV.")

    p = sub.add_parser("gridsearch", parents=[common], help="Search the post-processing parameters.")
    p.add_argument("detections", help="Pixel detections CSV.")
    p.add_argument("catalog", help="Validation catalog CSV.")

    sub.add_parser("synth", parents=[common], help="Generate a synthetic catalog and detections.")

    p = sub.add_parser("combos", parents=[common], help="Metrics of every combination of models.")
    p.add_argument("catalog", help="Catalog CSV.")
    p.add_argument("inputs", nargs="+", help="Geographic detections CSVs, one per model.")

    p = sub.add_parser("sr-benchmark", parents=[common], help="Compare a model with bicubic upsampling.")
    p.add_argument("bundle", help="Model bundle directory.")
    p.add_argument("--scales", type=parse_float_list, default=[2.0, 3.0, 4.0], help="Default: 2,3,4")
    p.add_argument("--n-images", type=int, default=20, help="Default: %(default)s")
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfiguration:
    """Preset or configuration file, then command-line overrides."""
    config = RunConfiguration.from_json_file(args.config) if args.config else PRESETS[args.preset]
    if args.seed is not None:
        config = config.replace(seed=args.seed)
    if args.iou_min is not None:
        config = config.replace(iou_min=args.iou_min)
    if args.georef and len(args.georef) == 1:
        config = config.replace(georef=load_georef(args.georef[0]))

    grids = config.grids
    for name in ("m", "s", "tau"):
        value = getattr(args, f"{name}_grid")
        if value is not None:
            grids = dataclasses.replace(grids, **{name: value})
    config = config.replace(grids=grids)

    overrides = {name: getattr(args, name) for name in ("m", "s", "tau") if getattr(args, name) is not None}
    if overrides:
        config = config.replace(postproc=PostprocParams(**{**config.postproc.to_dict(), **overrides}))  # type: ignore
    if args.patch_size is not None:
        config = config.replace(tiling=dataclasses.replace(config.tiling, patch_size=args.patch_size))
    return config.validate()


def run(args: argparse.Namespace) -> None:
    config = resolve_config(args)
    logger.info("running %s with config %s", args.command, config.digest()[:16])
    band = args.band
    match args.command:
        case "train-sr":
            commands.cmd_train_sr(config, args.images, args.out)
        case "sr":
            commands.cmd_sr(config, args.bundle, args.image, args.out, scale=args.scale, size=args.size)
        case "postprocess":
            commands.cmd_postprocess(config, args.detections, args.out, config.georef, args.patch_size)
        case "combine":
            georefs = [load_georef(p) for p in args.georef] if args.georef else [config.georef]
            commands.cmd_combine(config, args.inputs, georefs, args.out)
        case "evaluate":
            commands.cmd_evaluate(config, args.detections, args.catalog, args.out, band)
        case "gridsearch":
            commands.cmd_gridsearch(config, args.detections, args.catalog, args.out, band, args.patch_size)
        case "synth":
            commands.cmd_synth(config, args.out)
        case "combos":
            commands.cmd_combos(config, args.inputs, args.catalog, args.out, band)
        case "sr-benchmark":
            commands.cmd_sr_benchmark(config, args.bundle, args.out, args.scales, args.n_images)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point; returns the process exit code."""
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level, args.log_filter)
    try:
        run(args)
    except (CraterLensError, OSError, ValueError, ArithmeticError) as e:
        logger.debug("command failed", exc_info=True)
        print(f"craterlens: error: {e}", file=sys.stderr)
        return exit_code_for(e)
    return 0
