import csv
import io
import json
import math
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
from tabulate import tabulate

from craterlens import __version__
from craterlens.detect import (
    GeoDetectionSet,
    GeoRef,
    combine_models,
    postprocess,
    read_detections_geo,
    read_detections_px,
    write_detections_geo,
    write_detections_px,
    save_georef,
)
from craterlens.evaluation import (
    evaluate,
    filter_band,
    grid_search,
    load_catalog,
    write_catalog,
    write_grid_csv,
    write_report_json,
    combination_table,
    synth_catalog,
    synth_detections,
)
from craterlens.liif import compare_with_bicubic, init_model, load_bundle, predict_sr, save_bundle, train_sr
from craterlens.params import RunConfiguration
from craterlens.raster import load_pgm16, save_pgm16, synth_texture, tile_footprints, write_patch_csv
from craterlens.utils import ArgumentError, Provenance, atomic_write_text
from craterlens.utils.logging import get_logger

__all__ = [
    "provenance_for",
    "cmd_train_sr",
    "cmd_sr",
    "cmd_postprocess",
    "cmd_combine",
    "cmd_evaluate",
    "cmd_gridsearch",
    "cmd_synth",
    "cmd_combos",
    "cmd_sr_benchmark",
]

logger = get_logger(__name__)


def provenance_for(config: RunConfiguration) -> Provenance:
    return Provenance(version=__version__, config=config.digest()[:16], seed=config.seed)


def _out_dir(out: str | os.PathLike) -> Path:
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _write_csv(path: Path, header: Sequence[str], rows, config: RunConfiguration):
    buf = io.StringIO()
    buf.write(provenance_for(config).comment_line())
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    atomic_write_text(path, buf.getvalue())


def _write_json(path: Path, data: dict, config: RunConfiguration):
    data = dict(data, provenance=provenance_for(config).to_dict())  # type: ignore
    atomic_write_text(path, json.dumps(data, indent=4, sort_keys=True) + "\n")


@dataclass(frozen=True)
class TrainOutputs:
    bundle: Path
    loss_csv: Path
    final_loss: float


def cmd_train_sr(config: RunConfiguration, images_dir: str | os.PathLike, out: str | os.PathLike) -> TrainOutputs:
    """Trains a model on the PGM images of a directory and writes the bundle and the loss curve."""
    files = sorted(Path(images_dir).glob("*.pgm"))
    if not files:
        raise ArgumentError(f"No .pgm images in {images_dir}")
    images = [load_pgm16(f) for f in files]
    logger.info("training on %d images from %s", len(images), images_dir)

    rng = np.random.default_rng(config.seed)
    model = init_model(config.sr.depth, config.sr.n_blocks, config.sr.hidden, rng, config.sr.n_hidden)
    history = train_sr(model, images, config.training, rng)

    out_dir = _out_dir(out)
    bundle = out_dir / "model"
    save_bundle(model, bundle, provenance_for(config).to_dict())  # type: ignore
    steps = config.training.steps_per_epoch
    rows = [
        [i, i // steps, f"{loss:.8f}", lr] for i, (loss, lr) in enumerate(zip(history.losses, history.learning_rates))
    ]
    loss_csv = out_dir / "loss.csv"
    _write_csv(loss_csv, ["step", "epoch", "loss", "lr"], rows, config)
    logger.info("wrote %s and %s", bundle, loss_csv)
    return TrainOutputs(bundle, loss_csv, history.losses[-1])


def cmd_sr(
    config: RunConfiguration,
    bundle: str | os.PathLike,
    image: str | os.PathLike,
    out: str | os.PathLike,
    scale: Optional[float] = None,
    size: Optional[tuple[int, int]] = None,
) -> Path:
    """Super-resolves one PGM image by `scale` (output ``floor(in * scale + 0.5)``) or to an explicit size."""
    if (scale is None) == (size is None):
        raise ArgumentError("Give exactly one of scale and size")
    if not Path(bundle).is_dir():
        raise FileNotFoundError(f"Model bundle {bundle} not found")
    model = load_bundle(bundle)
    img = load_pgm16(image)
    if size is None:
        assert scale is not None
        if scale <= 0:
            raise ArgumentError(f"Scale must be positive, got {scale}")
        size = (math.floor(img.height * scale + 0.5), math.floor(img.width * scale + 0.5))

    sr = predict_sr(model, img, size[0], size[1], config.sr.chunk_size)
    target = _out_dir(out) / f"{Path(image).stem}_sr_{size[0]}x{size[1]}.pgm"
    save_pgm16(sr, target)
    logger.info("wrote %s (%dx%d -> %dx%d)", target, img.height, img.width, size[0], size[1])
    return target


def cmd_postprocess(
    config: RunConfiguration,
    detections: str | os.PathLike,
    out: str | os.PathLike,
    georef: GeoRef,
    patch_size: Optional[int] = None,
) -> Path:
    """Boundary removal, score filtering, geographic conversion and patch merging of raw detections."""
    patch = patch_size or config.tiling.patch_size
    patches = read_detections_px(detections)
    result = postprocess(patches, georef, config.postproc, patch, patch)
    target = _out_dir(out) / "geo_detections.csv"
    write_detections_geo(result.detections, target, provenance_for(config).comment_line())
    logger.info("wrote %d detections to %s", len(result), target)
    return target


def cmd_combine(
    config: RunConfiguration, inputs: Sequence[str | os.PathLike], georefs: Sequence[GeoRef], out: str | os.PathLike
) -> Path:
    """Merges the geographic detections of several models.

    `georefs` holds one georeference for all inputs or one per input.
    """
    if not inputs:
        raise ArgumentError("No detection files to combine")
    if len(georefs) not in (1, len(inputs)):
        raise ArgumentError(f"{len(georefs)} georeferences for {len(inputs)} detection files")
    refs = list(georefs) * len(inputs) if len(georefs) == 1 else list(georefs)
    sets = [GeoDetectionSet(ref, read_detections_geo(path)) for path, ref in zip(inputs, refs)]
    combined = combine_models(sets, config.tau_combine)
    target = _out_dir(out) / "combined.csv"
    write_detections_geo(combined.detections, target, provenance_for(config).comment_line())
    logger.info("combined %d files into %d detections", len(inputs), len(combined))
    return target


def _band_catalog(catalog_path: str | os.PathLike, band: Optional[tuple[float, float]]):
    catalog = load_catalog(catalog_path)
    return filter_band(catalog, *band) if band is not None else catalog


def cmd_evaluate(
    config: RunConfiguration,
    detections: str | os.PathLike,
    catalog_path: str | os.PathLike,
    out: str | os.PathLike,
    band: Optional[tuple[float, float]] = (5.0, 10.0),
) -> Path:
    """Metrics, localization, overlapping-crater and rim-completeness analyses of one detection file."""
    catalog = _band_catalog(catalog_path, band)
    dets = read_detections_geo(detections)
    report, _ = evaluate(dets, catalog, config.georef, config.iou_min)
    report.provenance = provenance_for(config)

    out_dir = _out_dir(out)
    target = out_dir / "evaluation.json"
    write_report_json(report, target)
    _write_csv(
        out_dir / "localization.csv",
        ["d_min", "d_max", "count", "mean_iou", "std_iou"],
        [[b.d_min, b.d_max, b.count, b.mean_iou, b.std_iou] for b in report.localization],
        config,
    )
    _write_csv(
        out_dir / "arc_img.csv",
        ["bin", "matched", "total", "recall"],
        [[b.label, b.matched, b.total, b.recall] for b in report.arc_img],
        config,
    )
    m = report.metrics
    table = [[m.precision, m.recall, m.f1, report.tp, report.fp, report.fn]]
    print(tabulate(table, headers=["precision", "recall", "f1", "tp", "fp", "fn"], floatfmt=".2f"))
    return target


def cmd_gridsearch(
    config: RunConfiguration,
    detections: str | os.PathLike,
    catalog_path: str | os.PathLike,
    out: str | os.PathLike,
    band: Optional[tuple[float, float]] = (5.0, 10.0),
    patch_size: Optional[int] = None,
) -> Path:
    """Exhaustive search of the post-processing parameters; writes every row and the best one."""
    patch = patch_size or config.tiling.patch_size
    result = grid_search(
        read_detections_px(detections),
        config.georef,
        _band_catalog(catalog_path, band),
        patch,
        patch,
        config.grids.m,
        config.grids.s,
        config.grids.tau,
        config.iou_min,
    )
    out_dir = _out_dir(out)
    target = out_dir / "gridsearch.csv"
    write_grid_csv(result, target, provenance_for(config).comment_line())
    _write_json(out_dir / "best_params.json", result.best.to_dict(), config)  # type: ignore
    b = result.best
    table = [[b.m, b.s, b.tau, b.precision, b.recall, b.f1]]
    print(tabulate(table, headers=["m", "s", "tau", "precision", "recall", "f1"], floatfmt=".2f"))
    return target


@dataclass(frozen=True)
class SynthOutputs:
    catalog: Path
    georef: Path
    detections: Path
    patches: Path


def cmd_synth(config: RunConfiguration, out: str | os.PathLike) -> SynthOutputs:
    """Writes a synthetic catalog, its georeference, the mosaic's patch list and simulated raw detections."""
    rng = np.random.default_rng(config.seed)
    sc = config.synth
    catalog = synth_catalog(
        sc.n_craters,
        config.georef,
        sc.width_px,
        sc.height_px,
        rng,
        band=sc.band_km,
        border_px=sc.border_px,
        min_gap_px=sc.min_gap_px,
    )
    footprints = tile_footprints(sc.width_px, sc.height_px, config.tiling.patch_size, config.tiling.overlap)
    patches = synth_detections(catalog, config.georef, footprints, sc.noise, rng)

    out_dir = _out_dir(out)
    header = provenance_for(config).comment_line()
    outputs = SynthOutputs(
        out_dir / "catalog.csv", out_dir / "georef.json", out_dir / "detections_px.csv", out_dir / "patches.csv"
    )
    write_catalog(catalog, outputs.catalog, header)
    save_georef(config.georef, outputs.georef, provenance_for(config).to_dict())  # type: ignore
    write_detections_px(patches, outputs.detections, header)
    write_patch_csv(footprints, outputs.patches, header)
    logger.info("wrote %d craters and %d patches to %s", len(catalog), len(footprints), out_dir)
    return outputs


def cmd_combos(
    config: RunConfiguration,
    inputs: Sequence[str | os.PathLike],
    catalog_path: str | os.PathLike,
    out: str | os.PathLike,
    band: Optional[tuple[float, float]] = (5.0, 10.0),
) -> Path:
    """Metrics of every combination of the given models' detections (models named by file stem)."""
    catalog = _band_catalog(catalog_path, band)
    named = {Path(p).stem: GeoDetectionSet(config.georef, read_detections_geo(p)) for p in inputs}
    if len(named) != len(inputs):
        raise ArgumentError("Detection files must have distinct names")
    rows = combination_table(named, catalog, config.tau_combine, config.iou_min)
    table = [["+".join(r.models), r.metrics.precision, r.metrics.recall, r.metrics.f1, r.tp, r.fp, r.fn] for r in rows]
    header = ["models", "precision", "recall", "f1", "tp", "fp", "fn"]
    target = _out_dir(out) / "combinations.csv"
    _write_csv(target, header, table, config)
    print(tabulate(table, headers=header, floatfmt=".2f"))
    return target


def cmd_sr_benchmark(
    config: RunConfiguration,
    bundle: str | os.PathLike,
    out: str | os.PathLike,
    scales: Sequence[float] = (2.0, 3.0, 4.0),
    n_images: int = 20,
    size: int = 64,
) -> Path:
    """Compares the model with bicubic upsampling on held-out synthetic textures."""
    model = load_bundle(bundle)
    rng = np.random.default_rng(config.seed)
    images = [synth_texture(size, size, rng) for _ in range(n_images)]
    results = [compare_with_bicubic(model, images, s) for s in scales]
    table = [[r.scale, r.l1_sr, r.l1_bicubic, r.improvement, r.n_images] for r in results]
    header = ["scale", "l1_sr", "l1_bicubic", "improvement", "n_images"]
    target = _out_dir(out) / "sr_benchmark.csv"
    _write_csv(target, header, table, config)
    print(tabulate(table, headers=header, floatfmt=".5f"))
    return target
