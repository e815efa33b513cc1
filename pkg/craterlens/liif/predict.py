from dataclasses import dataclass

import numpy as np

from craterlens.nn.encoder import encoder_forward
from craterlens.raster.image import ImageGrid
from craterlens.utils import ArgumentError, FloatArray, IntArray
from .coords import cell_sizes, coord_grid
from .ensemble import Corner, FeatureMapLatent, ensemble_weights, nearest_latent
from .mlp import MlpCache, MlpGrads, MlpParams, mlp_backward, mlp_forward
from .model import LiifModel
from .unfold import unfold3x3

__all__ = ["DecodeCache", "decode_queries", "decode_backward", "query_points", "predict_sr"]

DEFAULT_CHUNK = 4096


@dataclass(eq=False)
class DecodeCache:
    """State of one decoding pass needed by `decode_backward`."""

    grid_shape: tuple[int, int, int]
    rows: list[IntArray]
    cols: list[IntArray]
    weights: FloatArray
    mlp: MlpCache


def _check_queries(coords: FloatArray, cells: FloatArray):
    if coords.ndim != 2 or coords.shape[1] != 2 or cells.shape != coords.shape:
        raise ArgumentError(f"Expected (Q, 2) coordinates and cells, got {coords.shape} and {cells.shape}")


def decode_queries(
    mlp: MlpParams, unfolded: FloatArray, coords: FloatArray, cells: FloatArray
) -> tuple[FloatArray, DecodeCache]:
    """Local-ensemble prediction at continuous (row, col) coordinates.

    For each query the four surrounding latents are decoded with the
    relative coordinate and the cell, both scaled by the latent grid size,
    and blended with the area weights.
    """
    _check_queries(coords, cells)
    fm = FeatureMapLatent(unfolded)
    n = coords.shape[0]
    scale = np.array([fm.height, fm.width], dtype=np.float64)

    samples = [nearest_latent(fm, coords, corner) for corner in Corner]
    weights = ensemble_weights(coords, np.stack([s.p for s in samples]))
    scaled_cells = cells * scale
    inputs = np.concatenate([np.concatenate([s.z, (coords - s.p) * scale, scaled_cells], axis=1) for s in samples])

    out, mlp_cache = mlp_forward(mlp, inputs)
    pred = np.sum(weights.T * out.reshape(len(Corner), n), axis=0)
    cache = DecodeCache(
        grid_shape=unfolded.shape,
        rows=[s.rows for s in samples],
        cols=[s.cols for s in samples],
        weights=weights,
        mlp=mlp_cache,
    )
    return pred, cache


def decode_backward(mlp: MlpParams, cache: DecodeCache, dpred: FloatArray) -> tuple[MlpGrads, FloatArray]:
    """Gradients of the decoder parameters and of the unfolded feature map."""
    nd, h, w = cache.grid_shape
    dout = (cache.weights.T * dpred[None, :]).reshape(-1)
    grads = mlp_backward(mlp, cache.mlp, dout)

    n = dpred.shape[0]
    dz = grads.dx[:, :nd].reshape(len(Corner), n, nd)
    acc = np.zeros((h * w, nd), dtype=np.float64)
    for t in range(len(Corner)):
        np.add.at(acc, cache.rows[t] * w + cache.cols[t], dz[t])
    return grads, acc.T.reshape(nd, h, w)


def query_points(
    model: LiifModel, img: ImageGrid, coords: FloatArray, cells: FloatArray, chunk_size: int = DEFAULT_CHUNK
) -> FloatArray:
    """Unclamped intensities of `img`'s continuous representation at the given (row, col) queries."""
    coords = np.asarray(coords, dtype=np.float64)
    cells = np.asarray(cells, dtype=np.float64)
    _check_queries(coords, cells)
    if chunk_size < 1:
        raise ArgumentError(f"Chunk size must be positive, got {chunk_size}")

    unfolded = unfold3x3(encoder_forward(model.encoder, img))
    out = np.empty(coords.shape[0], dtype=np.float64)
    for start in range(0, coords.shape[0], chunk_size):
        stop = start + chunk_size
        out[start:stop] = decode_queries(model.mlp, unfolded, coords[start:stop], cells[start:stop])[0]
    return out


def predict_sr(
    model: LiifModel, img: ImageGrid, out_h: int, out_w: int, chunk_size: int = DEFAULT_CHUNK
) -> ImageGrid:
    """Renders `img` at an arbitrary `out_h` x `out_w` resolution."""
    if out_h < 1 or out_w < 1:
        raise ArgumentError(f"Output size must be positive, got {out_h}x{out_w}")
    coords = coord_grid(out_h, out_w)
    values = query_points(model, img, coords, cell_sizes(coords.shape[0], out_h, out_w), chunk_size)
    return ImageGrid(np.clip(values, 0.0, 1.0).reshape(out_h, out_w), img.source_bit_depth)
