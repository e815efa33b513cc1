from unittest import TestCase

import numpy as np
import pytest

from craterlens.liif import MlpParams, init_mlp, mlp_backward, mlp_decode, mlp_forward
from craterlens.nn import LinearParams, grad_check_report
from craterlens.utils import ArgumentError


def mlp_tensors(p: MlpParams) -> dict[str, np.ndarray]:
    tensors = {}
    for i, layer in enumerate(p.layers):
        tensors[f"{i}.weight"] = layer.weight
        tensors[f"{i}.bias"] = layer.bias
    return tensors


def mlp_from(tensors, n_layers: int) -> MlpParams:
    return MlpParams([LinearParams(tensors[f"{i}.weight"], tensors[f"{i}.bias"]) for i in range(n_layers)])


class TestMlp(TestCase):
    def setUp(self):
        self.rng = np.random.default_rng(4)

    def test_widths(self):
        p = init_mlp([13, 6, 6, 1], self.rng)
        assert p.widths == [13, 6, 6, 1]
        assert p.in_features == 13
        out, cache = mlp_forward(p, self.rng.normal(size=(5, 13)))
        assert out.shape == (5,)
        assert len(cache.pre_activations) == 2

    def test_output_layer_is_linear(self):
        p = MlpParams([LinearParams(np.eye(2), np.zeros(2)), LinearParams(np.array([[1.0, 1.0]]), np.array([-5.0]))])
        out, _ = mlp_forward(p, np.array([[1.0, -3.0]]))
        assert out[0] == -4.0

    def test_backward_matches_differences(self):
        p = init_mlp([7, 5, 5, 1], self.rng)
        x = self.rng.normal(size=(6, 7))
        r = self.rng.normal(size=6)
        out, cache = mlp_forward(p, x)
        grads = mlp_backward(p, cache, r)
        analytic = {}
        for i, g in enumerate(grads.layers):
            analytic[f"{i}.weight"] = g.dweight
            analytic[f"{i}.bias"] = g.dbias

        def fn(tensors):
            return float(np.sum(mlp_forward(mlp_from(tensors, 3), x)[0] * r))

        def pattern(tensors):
            _, c = mlp_forward(mlp_from(tensors, 3), x)
            return np.concatenate([np.sign(a).reshape(-1) for a in c.pre_activations])

        report = grad_check_report(fn, mlp_tensors(p), analytic, eps=1e-5, pattern_fn=pattern)
        assert report.max_rel_error < 1e-4
        assert grads.dx.shape == x.shape

    def test_decode_single_query(self):
        p = init_mlp([9 * 2 + 4, 4, 1], self.rng)
        z = self.rng.normal(size=18)
        value = mlp_decode(p, z, (0.5, -0.5), (2.0, 2.0))
        expected, _ = mlp_forward(p, np.concatenate([z, [0.5, -0.5, 2.0, 2.0]])[None, :])
        assert value == expected[0]
        with pytest.raises(ArgumentError):
            mlp_decode(p, z[:9], (0.5, -0.5), (2.0, 2.0))

    def test_validation(self):
        with pytest.raises(ArgumentError):
            init_mlp([4], self.rng)
        with pytest.raises(ArgumentError):
            MlpParams([LinearParams(np.zeros((3, 4)), np.zeros(3)), LinearParams(np.zeros((1, 2)), np.zeros(1))])
        with pytest.raises(ArgumentError):
            MlpParams([LinearParams(np.zeros((2, 4)), np.zeros(2))])
