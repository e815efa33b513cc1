from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from craterlens.utils import ArgumentError, FloatArray

__all__ = [
    "LinearParams",
    "LinearGrads",
    "Conv3x3Params",
    "Conv3x3Grads",
    "init_linear",
    "init_conv3x3",
    "linear_forward",
    "linear_backward",
    "relu",
    "relu_backward",
    "conv3x3_forward",
    "conv3x3_backward",
    "im2col3x3",
    "col2im3x3",
]


@dataclass(eq=False)
class LinearParams:
    """Fully connected layer, y = x W^T + b.

    Attributes
    ----------
    weight: FloatArray
        Shape (out, in).
    bias: FloatArray
        Shape (out,).
    """

    weight: FloatArray
    bias: FloatArray

    def __post_init__(self):
        if self.weight.ndim != 2 or self.bias.shape != (self.weight.shape[0],):
            raise ArgumentError(f"Inconsistent linear shapes {self.weight.shape} and {self.bias.shape}")

    @property
    def in_features(self) -> int:
        return self.weight.shape[1]

    @property
    def out_features(self) -> int:
        return self.weight.shape[0]


class LinearGrads(NamedTuple):
    dx: FloatArray
    dweight: FloatArray
    dbias: FloatArray


@dataclass(eq=False)
class Conv3x3Params:
    """3x3 convolution, stride 1, zero padding 1.

    Attributes
    ----------
    weight: FloatArray
        Shape (out_ch, in_ch, 3, 3).
    bias: FloatArray
        Shape (out_ch,).
    """

    weight: FloatArray
    bias: FloatArray

    def __post_init__(self):
        if self.weight.ndim != 4 or self.weight.shape[2:] != (3, 3):
            raise ArgumentError(f"Convolution kernel must have shape (out, in, 3, 3), got {self.weight.shape}")
        if self.bias.shape != (self.weight.shape[0],):
            raise ArgumentError(f"Bias shape {self.bias.shape} does not match {self.weight.shape[0]} outputs")

    @property
    def in_channels(self) -> int:
        return self.weight.shape[1]

    @property
    def out_channels(self) -> int:
        return self.weight.shape[0]


class Conv3x3Grads(NamedTuple):
    dx: FloatArray
    dweight: FloatArray
    dbias: FloatArray


def init_linear(in_features: int, out_features: int, rng: np.random.Generator) -> LinearParams:
    bound = 1.0 / np.sqrt(in_features)
    return LinearParams(
        weight=rng.uniform(-bound, bound, size=(out_features, in_features)),
        bias=rng.uniform(-bound, bound, size=out_features),
    )


def init_conv3x3(in_channels: int, out_channels: int, rng: np.random.Generator) -> Conv3x3Params:
    bound = 1.0 / np.sqrt(in_channels * 9)
    return Conv3x3Params(
        weight=rng.uniform(-bound, bound, size=(out_channels, in_channels, 3, 3)),
        bias=rng.uniform(-bound, bound, size=out_channels),
    )


def linear_forward(p: LinearParams, x: FloatArray) -> FloatArray:
    if x.ndim != 2 or x.shape[1] != p.in_features:
        raise ArgumentError(f"Linear layer expects input [batch, {p.in_features}], got {list(x.shape)}")
    return x @ p.weight.T + p.bias


def linear_backward(p: LinearParams, x: FloatArray, dy: FloatArray) -> LinearGrads:
    if x.ndim != 2 or x.shape[1] != p.in_features:
        raise ArgumentError(f"Linear layer expects input [batch, {p.in_features}], got {list(x.shape)}")
    if dy.shape != (x.shape[0], p.out_features):
        raise ArgumentError(f"Output gradient shape {list(dy.shape)} != {[x.shape[0], p.out_features]}")
    return LinearGrads(dx=dy @ p.weight, dweight=dy.T @ x, dbias=dy.sum(axis=0))


def relu(x: FloatArray) -> FloatArray:
    return np.maximum(x, 0.0)


def relu_backward(x: FloatArray, dy: FloatArray) -> FloatArray:
    """Gradient of ReLU; the derivative at exactly zero is taken as 0."""
    if x.shape != dy.shape:
        raise ArgumentError(f"Shape mismatch {x.shape} vs {dy.shape}")
    return np.where(x > 0, dy, 0.0)


# Offsets (dy, dx) of the nine taps, ordered row-major over the kernel.
_TAPS = [(m, n) for m in range(3) for n in range(3)]


def im2col3x3(x: FloatArray) -> FloatArray:
    """Stacks the 3x3 neighbourhoods of a zero-padded (C, H, W) input.

    Returns an array of shape (C * 9, H * W) whose row c * 9 + m * 3 + n
    holds input channel c shifted by (m - 1, n - 1).
    """
    c, h, w = x.shape
    padded = np.pad(x, ((0, 0), (1, 1), (1, 1)))
    cols = np.empty((c, 9, h, w), dtype=np.float64)
    for k, (m, n) in enumerate(_TAPS):
        cols[:, k] = padded[:, m : m + h, n : n + w]
    return cols.reshape(c * 9, h * w)


def col2im3x3(cols: FloatArray, shape: tuple[int, int, int]) -> FloatArray:
    c, h, w = shape
    cols = cols.reshape(c, 9, h, w)
    padded = np.zeros((c, h + 2, w + 2), dtype=np.float64)
    for k, (m, n) in enumerate(_TAPS):
        padded[:, m : m + h, n : n + w] += cols[:, k]
    return padded[:, 1 : h + 1, 1 : w + 1]


def _check_conv_input(p: Conv3x3Params, x: FloatArray):
    if x.ndim != 3 or x.shape[0] != p.in_channels:
        raise ArgumentError(f"Convolution expects input [{p.in_channels}, H, W], got {list(x.shape)}")
    if x.shape[1] < 1 or x.shape[2] < 1:
        raise ArgumentError("Convolution input must have positive spatial size")


def conv3x3_forward(p: Conv3x3Params, x: FloatArray) -> FloatArray:
    """Cross-correlation with a 3x3 kernel, stride 1 and zero padding 1, plus bias."""
    _check_conv_input(p, x)
    _, h, w = x.shape
    out = p.weight.reshape(p.out_channels, -1) @ im2col3x3(x) + p.bias[:, None]
    return out.reshape(p.out_channels, h, w)


def conv3x3_backward(p: Conv3x3Params, x: FloatArray, dy: FloatArray) -> Conv3x3Grads:
    _check_conv_input(p, x)
    _, h, w = x.shape
    if dy.shape != (p.out_channels, h, w):
        raise ArgumentError(f"Output gradient shape {list(dy.shape)} != {[p.out_channels, h, w]}")

    dy_flat = dy.reshape(p.out_channels, h * w)
    w_flat = p.weight.reshape(p.out_channels, -1)
    dweight = (dy_flat @ im2col3x3(x).T).reshape(p.weight.shape)
    dx = col2im3x3(w_flat.T @ dy_flat, x.shape)
    return Conv3x3Grads(dx=dx, dweight=dweight, dbias=dy_flat.sum(axis=1))
