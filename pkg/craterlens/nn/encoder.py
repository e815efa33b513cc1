from dataclasses import dataclass, field

import numpy as np

from craterlens.raster.image import ImageGrid
from craterlens.utils import ArgumentError, FloatArray
from .layers import (
    Conv3x3Grads,
    Conv3x3Params,
    conv3x3_backward,
    conv3x3_forward,
    init_conv3x3,
    relu,
    relu_backward,
)

__all__ = [
    "EncoderParams",
    "EncoderCache",
    "EncoderGrads",
    "init_encoder",
    "encoder_forward",
    "encoder_forward_with_cache",
    "encoder_backward",
]


@dataclass(eq=False)
class EncoderParams:
    """Tiny residual convolutional encoder.

    A 1 -> D stem convolution followed by residual blocks, each computing
    ``h + conv2(relu(conv1(h)))``. The output has the same spatial size as
    the input image.

    Attributes
    ----------
    stem: Conv3x3Params
        Maps the single image channel to `depth` feature channels.
    blocks: list[tuple[Conv3x3Params, Conv3x3Params]]
        Residual pairs, all D -> D.
    """

    stem: Conv3x3Params
    blocks: list[tuple[Conv3x3Params, Conv3x3Params]] = field(default_factory=list)

    def __post_init__(self):
        if self.stem.in_channels != 1:
            raise ArgumentError(f"Encoder stem must take 1 channel, got {self.stem.in_channels}")
        for i, (c1, c2) in enumerate(self.blocks):
            for conv in (c1, c2):
                if conv.in_channels != self.depth or conv.out_channels != self.depth:
                    raise ArgumentError(f"Residual block {i} does not preserve depth {self.depth}")

    @property
    def depth(self) -> int:
        return self.stem.out_channels


@dataclass(eq=False)
class EncoderCache:
    """Intermediate activations kept by the forward pass for backpropagation."""

    image: FloatArray
    block_inputs: list[FloatArray]
    block_hidden: list[FloatArray]


@dataclass(eq=False)
class EncoderGrads:
    stem: Conv3x3Grads
    blocks: list[tuple[Conv3x3Grads, Conv3x3Grads]]


def init_encoder(depth: int, n_blocks: int, rng: np.random.Generator) -> EncoderParams:
    if depth < 1 or n_blocks < 0:
        raise ArgumentError(f"Invalid encoder size: depth={depth}, n_blocks={n_blocks}")
    stem = init_conv3x3(1, depth, rng)
    blocks = [(init_conv3x3(depth, depth, rng), init_conv3x3(depth, depth, rng)) for _ in range(n_blocks)]
    return EncoderParams(stem, blocks)


def _as_input(img: ImageGrid | FloatArray) -> FloatArray:
    values = img.values if isinstance(img, ImageGrid) else np.asarray(img, dtype=np.float64)
    if values.ndim != 2:
        raise ArgumentError(f"Encoder input must be a 2-D image, got shape {values.shape}")
    return values[None, :, :]


def encoder_forward_with_cache(p: EncoderParams, img: ImageGrid | FloatArray) -> tuple[FloatArray, EncoderCache]:
    x = _as_input(img)
    h = conv3x3_forward(p.stem, x)
    cache = EncoderCache(image=x, block_inputs=[], block_hidden=[])
    for c1, c2 in p.blocks:
        a = conv3x3_forward(c1, h)
        cache.block_inputs.append(h)
        cache.block_hidden.append(a)
        h = h + conv3x3_forward(c2, relu(a))
    return h, cache


def encoder_forward(p: EncoderParams, img: ImageGrid | FloatArray) -> FloatArray:
    """Feature map of shape (D, H, W) for an H x W image."""
    return encoder_forward_with_cache(p, img)[0]


def encoder_backward(p: EncoderParams, cache: EncoderCache, dfeat: FloatArray) -> EncoderGrads:
    expected = (p.depth,) + cache.image.shape[1:]
    if dfeat.shape != expected:
        raise ArgumentError(f"Feature gradient shape {list(dfeat.shape)} != {list(expected)}")

    dh = dfeat
    block_grads: list[tuple[Conv3x3Grads, Conv3x3Grads]] = []
    for (c1, c2), h, a in reversed(list(zip(p.blocks, cache.block_inputs, cache.block_hidden))):
        g2 = conv3x3_backward(c2, relu(a), dh)
        g1 = conv3x3_backward(c1, h, relu_backward(a, g2.dx))
        dh = dh + g1.dx
        block_grads.append((g1, g2))
    block_grads.reverse()

    return EncoderGrads(stem=conv3x3_backward(p.stem, cache.image, dh), blocks=block_grads)
