from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from craterlens.nn.encoder import encoder_backward, encoder_forward_with_cache
from craterlens.nn.loss import l1_loss
from craterlens.nn.optim import AdamState, adam_init, adam_step, step_lr
from craterlens.params.configurations import TrainingConfig
from craterlens.raster.augment import augment_sr, random_augment_spec
from craterlens.raster.image import ImageGrid, crop
from craterlens.raster.resample import bicubic_resize
from craterlens.utils import ArgumentError, FloatArray, NumericError
from craterlens.utils.logging import get_logger
from .coords import cell_sizes, coord_grid
from .model import LiifModel, assign_parameters, named_gradients, named_parameters
from .predict import decode_backward, decode_queries
from .unfold import unfold3x3, unfold3x3_backward

__all__ = [
    "TrainingBatch",
    "LossAndGrads",
    "TrainingHistory",
    "sample_training_pair",
    "loss_and_grads",
    "activation_pattern",
    "init_optimizer",
    "train_step",
    "train_sr",
]

logger = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class TrainingBatch:
    """One low-resolution patch and the high-resolution samples it should reproduce.

    Attributes
    ----------
    lr_patch: ImageGrid
        The bicubic-downsampled crop, `patch` x `patch` pixels.
    coords: FloatArray
        (row, col) centers of the sampled high-resolution pixels, shape (N, 2) with N = patch².
    cells: FloatArray
        Cell size of the high-resolution crop for every query, shape (N, 2).
    targets: FloatArray
        High-resolution intensities at `coords`, shape (N,).
    scale: float
        The drawn scale factor.
    """

    lr_patch: ImageGrid
    coords: FloatArray
    cells: FloatArray
    targets: FloatArray
    scale: float

    def __post_init__(self):
        n = self.targets.shape[0]
        if self.coords.shape != (n, 2) or self.cells.shape != (n, 2):
            raise ArgumentError("Coordinate, cell and target counts differ")


@dataclass(eq=False)
class LossAndGrads:
    loss: float
    grads: dict[str, FloatArray]


@dataclass
class TrainingHistory:
    losses: list[float] = field(default_factory=list)
    learning_rates: list[float] = field(default_factory=list)


def sample_training_pair(
    hr: ImageGrid,
    rng: np.random.Generator,
    patch: int = 48,
    scale_range: tuple[float, float] = (1.0, 4.0),
    scale: Optional[float] = None,
    augment: bool = True,
) -> TrainingBatch:
    """Draws a training pair from a high-resolution image.

    The image is augmented first, then a ``floor(patch * s)`` square is
    cropped at a uniform position, with `s` drawn from `scale_range` unless
    `scale` forces it. The crop, downsampled bicubically to `patch` pixels,
    is the input. ``patch * patch`` distinct crop pixels, drawn without
    replacement, are the targets; at s = 1 that is every crop pixel.
    """
    lo, hi = scale_range
    if not 1.0 <= lo <= hi:
        raise ArgumentError(f"Invalid scale range {scale_range}")
    largest = int(np.floor(patch * (hi if scale is None else scale)))
    if patch < 1 or min(hr.height, hr.width) < largest:
        raise ArgumentError(f"Image {hr.height}x{hr.width} cannot hold a {largest}-pixel crop")

    if augment:
        hr = augment_sr(hr, random_augment_spec(rng))
    s = float(rng.uniform(lo, hi)) if scale is None else float(scale)
    size = int(np.floor(patch * s))
    y = int(rng.integers(0, hr.height - size + 1))
    x = int(rng.integers(0, hr.width - size + 1))
    hr_crop = crop(hr, x, y, size, size)

    coords = coord_grid(size, size)
    targets = hr_crop.values.reshape(-1)
    if size > patch:
        idx = np.sort(rng.choice(size * size, size=patch * patch, replace=False))
        coords, targets = coords[idx], targets[idx]
    return TrainingBatch(
        lr_patch=bicubic_resize(hr_crop, patch, patch),
        coords=coords,
        cells=cell_sizes(coords.shape[0], size, size),
        targets=targets.copy(),
        scale=s,
    )


def _query_subset(batch: TrainingBatch, sample_q: Optional[int], rng: Optional[np.random.Generator]):
    n = batch.targets.shape[0]
    if sample_q is None or sample_q >= n:
        return slice(None)
    if rng is None:
        raise ArgumentError("Sampling query points requires a random generator")
    return np.sort(rng.choice(n, size=sample_q, replace=False))


def loss_and_grads(
    model: LiifModel,
    batches: Sequence[TrainingBatch],
    sample_q: Optional[int] = None,
    rng: Optional[np.random.Generator] = None,
) -> LossAndGrads:
    """Mean L1 loss over the batches and its gradient for every named parameter.

    Predictions are not clamped. With `sample_q`, each batch contributes a
    random subset of that many query points.
    """
    if not batches:
        raise ArgumentError("No training batches")
    total = 0.0
    grads: dict[str, FloatArray] = {name: np.zeros_like(p) for name, p in named_parameters(model).items()}

    for batch in batches:
        idx = _query_subset(batch, sample_q, rng)
        feat, enc_cache = encoder_forward_with_cache(model.encoder, batch.lr_patch)
        pred, dec_cache = decode_queries(model.mlp, unfold3x3(feat), batch.coords[idx], batch.cells[idx])
        loss, dpred = l1_loss(pred, batch.targets[idx])

        mlp_grads, dunfolded = decode_backward(model.mlp, dec_cache, dpred)
        enc_grads = encoder_backward(model.encoder, enc_cache, unfold3x3_backward(dunfolded))
        for name, g in named_gradients(enc_grads, mlp_grads).items():
            grads[name] += g
        total += loss

    n = len(batches)
    return LossAndGrads(loss=total / n, grads={name: g / n for name, g in grads.items()})


def activation_pattern(model: LiifModel, batches: Sequence[TrainingBatch]) -> np.ndarray:
    """Signs of every ReLU input and L1 residual; the loss is linear in each parameter while these stay fixed."""
    parts: list[np.ndarray] = []
    for batch in batches:
        feat, enc_cache = encoder_forward_with_cache(model.encoder, batch.lr_patch)
        pred, dec_cache = decode_queries(model.mlp, unfold3x3(feat), batch.coords, batch.cells)
        parts += [np.sign(a).reshape(-1) for a in enc_cache.block_hidden]
        parts += [np.sign(a).reshape(-1) for a in dec_cache.mlp.pre_activations]
        parts.append(np.sign(pred - batch.targets))
    return np.concatenate(parts)


def init_optimizer(model: LiifModel, lr: float) -> dict[str, AdamState]:
    return {name: adam_init(p, lr) for name, p in named_parameters(model).items()}


def train_step(
    model: LiifModel,
    batches: Sequence[TrainingBatch],
    opt: dict[str, AdamState],
    *,
    lr: Optional[float] = None,
    sample_q: Optional[int] = None,
    rng: Optional[np.random.Generator] = None,
    step: Optional[int] = None,
) -> float:
    """One optimisation step over a batch of training pairs.

    Updates `model` and `opt` in place and returns the loss before the
    update. Raises `NumericError` when the loss or a gradient is not finite,
    leaving the model untouched.
    """
    result = loss_and_grads(model, batches, sample_q, rng)
    if not np.isfinite(result.loss) or not all(np.all(np.isfinite(g)) for g in result.grads.values()):
        raise NumericError(f"non-finite loss {result.loss}", step=step)

    params = named_parameters(model)
    updated: dict[str, FloatArray] = {}
    for name, param in params.items():
        state = opt[name] if lr is None else replace(opt[name], lr=lr)
        updated[name], opt[name] = adam_step(param, result.grads[name], state)
    assign_parameters(model, updated)
    return result.loss


def train_sr(
    model: LiifModel,
    images: Sequence[ImageGrid],
    cfg: TrainingConfig,
    rng: np.random.Generator,
    opt: Optional[dict[str, AdamState]] = None,
) -> TrainingHistory:
    """Trains the model on random pairs drawn from `images`.

    Each epoch runs ``cfg.steps_per_epoch`` steps of ``cfg.batch_size``
    pairs. The learning rate is scaled by ``cfg.lr_decay_factor`` from epoch
    ``cfg.lr_decay_epoch`` on.
    """
    if not images:
        raise ArgumentError("No training images")
    if opt is None:
        opt = init_optimizer(model, cfg.lr)
    history = TrainingHistory()
    step = 0
    for epoch in range(cfg.epochs):
        lr = step_lr(cfg.lr, epoch, cfg.lr_decay_epoch, cfg.lr_decay_factor)
        for _ in range(cfg.steps_per_epoch):
            batches = [
                sample_training_pair(
                    images[int(rng.integers(len(images)))],
                    rng,
                    patch=cfg.patch_size,
                    scale_range=(cfg.scale_min, cfg.scale_max),
                )
                for _ in range(cfg.batch_size)
            ]
            loss = train_step(model, batches, opt, lr=lr, sample_q=cfg.sample_q, rng=rng, step=step)
            history.losses.append(loss)
            history.learning_rates.append(lr)
            if cfg.log_every and step % cfg.log_every == 0:
                logger.info("step %d epoch %d loss %.6f lr %.2e", step, epoch, loss, lr)
            step += 1
    return history
