from dataclasses import dataclass

import numpy as np

from craterlens.nn.encoder import EncoderGrads, EncoderParams, init_encoder
from craterlens.nn.layers import Conv3x3Params, LinearParams
from craterlens.utils import ArgumentError, FloatArray
from .mlp import MlpGrads, MlpParams, init_mlp

__all__ = [
    "LiifModel",
    "init_model",
    "named_parameters",
    "named_gradients",
    "model_from_parameters",
    "decoder_input_width",
    "assign_parameters",
]


def decoder_input_width(depth: int) -> int:
    """Unfolded latent, relative (row, col) coordinate and cell size."""
    return 9 * depth + 4


@dataclass(eq=False)
class LiifModel:
    """Encoder and implicit decoder of the super-resolution model."""

    encoder: EncoderParams
    mlp: MlpParams

    def __post_init__(self):
        expected = decoder_input_width(self.encoder.depth)
        if self.mlp.in_features != expected:
            raise ArgumentError(
                f"Decoder takes {self.mlp.in_features} inputs, encoder depth {self.encoder.depth} needs {expected}"
            )

    @property
    def depth(self) -> int:
        return self.encoder.depth

    @property
    def n_blocks(self) -> int:
        return len(self.encoder.blocks)


def init_model(
    depth: int = 16, n_blocks: int = 2, hidden: int = 256, rng: np.random.Generator | None = None, n_hidden: int = 4
) -> LiifModel:
    if rng is None:
        raise ArgumentError("init_model requires a seeded random generator")
    encoder = init_encoder(depth, n_blocks, rng)
    mlp = init_mlp([decoder_input_width(depth)] + [hidden] * n_hidden + [1], rng)
    return LiifModel(encoder, mlp)


def _conv_params(prefix: str, p: Conv3x3Params):
    return [(f"{prefix}.weight", p.weight), (f"{prefix}.bias", p.bias)]


def named_parameters(model: LiifModel) -> dict[str, FloatArray]:
    """All trainable tensors under stable dotted names, in a fixed order."""
    items = _conv_params("encoder.stem", model.encoder.stem)
    for i, (c1, c2) in enumerate(model.encoder.blocks):
        items += _conv_params(f"encoder.blocks.{i}.conv1", c1)
        items += _conv_params(f"encoder.blocks.{i}.conv2", c2)
    for i, layer in enumerate(model.mlp.layers):
        items += [(f"mlp.layers.{i}.weight", layer.weight), (f"mlp.layers.{i}.bias", layer.bias)]
    return dict(items)


def named_gradients(encoder_grads: EncoderGrads, mlp_grads: MlpGrads) -> dict[str, FloatArray]:
    """Gradients keyed like `named_parameters`."""
    items = [("encoder.stem.weight", encoder_grads.stem.dweight), ("encoder.stem.bias", encoder_grads.stem.dbias)]
    for i, (g1, g2) in enumerate(encoder_grads.blocks):
        items += [
            (f"encoder.blocks.{i}.conv1.weight", g1.dweight),
            (f"encoder.blocks.{i}.conv1.bias", g1.dbias),
            (f"encoder.blocks.{i}.conv2.weight", g2.dweight),
            (f"encoder.blocks.{i}.conv2.bias", g2.dbias),
        ]
    for i, g in enumerate(mlp_grads.layers):
        items += [(f"mlp.layers.{i}.weight", g.dweight), (f"mlp.layers.{i}.bias", g.dbias)]
    return dict(items)


def model_from_parameters(depth: int, n_blocks: int, params: dict[str, FloatArray]) -> LiifModel:
    """Rebuilds a model from tensors keyed like `named_parameters`.

    The number of decoder layers is inferred from the keys. Missing tensors
    raise `KeyError`.
    """

    def conv(prefix: str) -> Conv3x3Params:
        return Conv3x3Params(params[f"{prefix}.weight"], params[f"{prefix}.bias"])

    stem = conv("encoder.stem")
    if stem.out_channels != depth:
        raise ArgumentError(f"Stem has {stem.out_channels} channels, expected {depth}")
    blocks = [(conv(f"encoder.blocks.{i}.conv1"), conv(f"encoder.blocks.{i}.conv2")) for i in range(n_blocks)]

    n_layers = sum(1 for name in params if name.startswith("mlp.layers.") and name.endswith(".weight"))
    layers = [
        LinearParams(params[f"mlp.layers.{i}.weight"], params[f"mlp.layers.{i}.bias"]) for i in range(n_layers)
    ]
    return LiifModel(EncoderParams(stem, blocks), MlpParams(layers))


def assign_parameters(model: LiifModel, params: dict[str, FloatArray]):
    """Replaces the model's tensors in place with those in `params` (keyed like `named_parameters`)."""

    def set_pair(target, prefix: str):
        target.weight = params.get(f"{prefix}.weight", target.weight)
        target.bias = params.get(f"{prefix}.bias", target.bias)

    set_pair(model.encoder.stem, "encoder.stem")
    for i, (c1, c2) in enumerate(model.encoder.blocks):
        set_pair(c1, f"encoder.blocks.{i}.conv1")
        set_pair(c2, f"encoder.blocks.{i}.conv2")
    for i, layer in enumerate(model.mlp.layers):
        set_pair(layer, f"mlp.layers.{i}")
