from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from craterlens.nn.layers import (
    LinearGrads,
    LinearParams,
    init_linear,
    linear_backward,
    linear_forward,
    relu,
    relu_backward,
)
from craterlens.utils import ArgumentError, FloatArray

__all__ = [
    "MlpParams",
    "MlpCache",
    "MlpGrads",
    "init_mlp",
    "mlp_forward",
    "mlp_backward",
    "mlp_decode",
]


@dataclass(eq=False)
class MlpParams:
    """Implicit decoder: linear layers with ReLU between them and a linear scalar output.

    Attributes
    ----------
    layers: list[LinearParams]
        Consecutive layers; widths must chain and the last one has a single output.
    """

    layers: list[LinearParams]

    def __post_init__(self):
        if not self.layers:
            raise ArgumentError("MLP needs at least one layer")
        for i, (a, b) in enumerate(zip(self.layers, self.layers[1:])):
            if a.out_features != b.in_features:
                raise ArgumentError(f"Layer {i} outputs {a.out_features} features, layer {i + 1} takes {b.in_features}")
        if self.layers[-1].out_features != 1:
            raise ArgumentError("MLP output layer must produce a single value")

    @property
    def in_features(self) -> int:
        return self.layers[0].in_features

    @property
    def widths(self) -> list[int]:
        return [self.in_features] + [layer.out_features for layer in self.layers]


@dataclass(eq=False)
class MlpCache:
    inputs: list[FloatArray] = field(default_factory=list)
    pre_activations: list[FloatArray] = field(default_factory=list)


@dataclass(eq=False)
class MlpGrads:
    layers: list[LinearGrads]
    dx: FloatArray


def init_mlp(widths: Sequence[int], rng: np.random.Generator) -> MlpParams:
    """Fresh decoder with the given layer widths, e.g. ``[9 * D + 4, 256, 256, 256, 256, 1]``."""
    if len(widths) < 2:
        raise ArgumentError(f"MLP widths need at least input and output, got {list(widths)}")
    return MlpParams([init_linear(a, b, rng) for a, b in zip(widths, widths[1:])])


def mlp_forward(p: MlpParams, x: FloatArray) -> tuple[FloatArray, MlpCache]:
    """Decodes a batch of input rows; returns values of shape (N,) and the activations."""
    if x.ndim != 2 or x.shape[1] != p.in_features:
        raise ArgumentError(f"MLP expects input [batch, {p.in_features}], got {list(x.shape)}")
    cache = MlpCache()
    h = x
    last = len(p.layers) - 1
    for i, layer in enumerate(p.layers):
        cache.inputs.append(h)
        y = linear_forward(layer, h)
        if i < last:
            cache.pre_activations.append(y)
            y = relu(y)
        h = y
    return h[:, 0], cache


def mlp_backward(p: MlpParams, cache: MlpCache, dout: FloatArray) -> MlpGrads:
    dy = dout.reshape(-1, 1)
    grads: list[LinearGrads] = []
    for i in reversed(range(len(p.layers))):
        if i < len(p.layers) - 1:
            dy = relu_backward(cache.pre_activations[i], dy)
        g = linear_backward(p.layers[i], cache.inputs[i], dy)
        grads.append(g)
        dy = g.dx
    grads.reverse()
    return MlpGrads(layers=grads, dx=dy)


def mlp_decode(p: MlpParams, z: FloatArray, relcoord: Sequence[float], cell: Sequence[float]) -> float:
    """Intensity predicted for one latent code, relative coordinate and cell."""
    x = np.concatenate([np.asarray(z, dtype=np.float64).reshape(-1), np.asarray(relcoord), np.asarray(cell)])
    if len(relcoord) != 2 or len(cell) != 2 or x.size != p.in_features:
        raise ArgumentError(f"MLP expects {p.in_features} inputs, got {x.size}")
    return float(mlp_forward(p, x[None, :])[0][0])
