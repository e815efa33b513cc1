from unittest import TestCase

import numpy as np
import pytest

from craterlens.liif import (
    LiifModel,
    assign_parameters,
    decoder_input_width,
    init_mlp,
    init_model,
    model_from_parameters,
    named_parameters,
)
from craterlens.nn import init_encoder
from craterlens.utils import ArgumentError


class TestLiifModel(TestCase):
    def setUp(self):
        self.rng = np.random.default_rng(0)

    def test_default_architecture(self):
        model = init_model(rng=self.rng)
        assert model.depth == 16 and model.n_blocks == 2
        assert model.mlp.widths == [9 * 16 + 4, 256, 256, 256, 256, 1]

    def test_needs_generator(self):
        with pytest.raises(ArgumentError):
            init_model(2, 1, 4)

    def test_decoder_width_must_match(self):
        with pytest.raises(ArgumentError):
            LiifModel(init_encoder(2, 0, self.rng), init_mlp([2 * 9 + 3, 4, 1], self.rng))
        assert decoder_input_width(2) == 22

    def test_parameter_names(self):
        model = init_model(2, 1, 4, self.rng, n_hidden=1)
        assert list(named_parameters(model)) == [
            "encoder.stem.weight",
            "encoder.stem.bias",
            "encoder.blocks.0.conv1.weight",
            "encoder.blocks.0.conv1.bias",
            "encoder.blocks.0.conv2.weight",
            "encoder.blocks.0.conv2.bias",
            "mlp.layers.0.weight",
            "mlp.layers.0.bias",
            "mlp.layers.1.weight",
            "mlp.layers.1.bias",
        ]

    def test_rebuild_from_parameters(self):
        model = init_model(3, 2, 5, self.rng, n_hidden=2)
        params = named_parameters(model)
        rebuilt = model_from_parameters(3, 2, params)
        assert rebuilt.mlp.widths == model.mlp.widths
        for name, value in named_parameters(rebuilt).items():
            assert value is params[name]
        with pytest.raises(KeyError):
            model_from_parameters(3, 3, params)
        with pytest.raises(ArgumentError):
            model_from_parameters(4, 2, params)

    def test_assign_parameters(self):
        model = init_model(2, 1, 4, self.rng, n_hidden=1)
        update = {name: np.zeros_like(value) for name, value in named_parameters(model).items()}
        assign_parameters(model, update)
        for name, value in named_parameters(model).items():
            assert value is update[name]
