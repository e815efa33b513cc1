from unittest import TestCase

import numpy as np
import pytest
from parameterized import parameterized

from craterlens.nn import (
    Conv3x3Params,
    LinearParams,
    col2im3x3,
    conv3x3_backward,
    conv3x3_forward,
    grad_check_report,
    im2col3x3,
    init_conv3x3,
    init_linear,
    linear_backward,
    linear_forward,
    relu,
    relu_backward,
)
from craterlens.utils import ArgumentError


def brute_force_conv(p: Conv3x3Params, x: np.ndarray) -> np.ndarray:
    c_out, c_in = p.weight.shape[:2]
    _, h, w = x.shape
    out = np.zeros((c_out, h, w))
    for o in range(c_out):
        for i in range(h):
            for j in range(w):
                acc = p.bias[o]
                for c in range(c_in):
                    for m in range(3):
                        for n in range(3):
                            y, z = i + m - 1, j + n - 1
                            if 0 <= y < h and 0 <= z < w:
                                acc += p.weight[o, c, m, n] * x[c, y, z]
                out[o, i, j] = acc
    return out


class TestLinear(TestCase):
    def setUp(self):
        self.rng = np.random.default_rng(1)

    def test_forward(self):
        p = LinearParams(np.array([[1.0, 2.0], [0.0, -1.0], [3.0, 0.5]]), np.array([0.5, 0.0, -1.0]))
        out = linear_forward(p, np.array([[1.0, 1.0]]))
        assert np.allclose(out, [[3.5, -1.0, 2.5]])

    def test_backward_matches_differences(self):
        p = init_linear(5, 3, self.rng)
        x = self.rng.normal(size=(4, 5))
        r = self.rng.normal(size=(4, 3))
        g = linear_backward(p, x, r)

        def fn(params):
            return float(np.sum(linear_forward(LinearParams(params["w"], params["b"]), params["x"]) * r))

        report = grad_check_report(fn, {"w": p.weight, "b": p.bias, "x": x}, {"w": g.dweight, "b": g.dbias, "x": g.dx})
        assert report.max_rel_error < 1e-6
        assert report.checked == 15 + 3 + 20

    def test_shape_errors(self):
        p = init_linear(3, 2, self.rng)
        with pytest.raises(ArgumentError):
            linear_forward(p, np.zeros((2, 4)))
        with pytest.raises(ArgumentError):
            LinearParams(np.zeros((2, 3)), np.zeros(3))


class TestRelu(TestCase):
    def test_relu(self):
        x = np.array([-1.0, 0.0, 2.0])
        assert np.array_equal(relu(x), [0.0, 0.0, 2.0])
        assert np.array_equal(relu_backward(x, np.ones(3)), [0.0, 0.0, 1.0])


class TestConv3x3(TestCase):
    def setUp(self):
        self.rng = np.random.default_rng(2)

    @parameterized.expand([(1, 2, 4, 5), (3, 2, 1, 1), (2, 3, 3, 6)])
    def test_forward_matches_loops(self, c_in, c_out, h, w):
        p = init_conv3x3(c_in, c_out, self.rng)
        x = self.rng.normal(size=(c_in, h, w))
        assert np.allclose(conv3x3_forward(p, x), brute_force_conv(p, x))

    def test_im2col_adjoint(self):
        x = self.rng.normal(size=(2, 4, 3))
        y = self.rng.normal(size=(18, 12))
        assert np.isclose(np.sum(im2col3x3(x) * y), np.sum(x * col2im3x3(y, x.shape)))

    def test_im2col_channel_layout(self):
        x = self.rng.normal(size=(2, 3, 3))
        cols = im2col3x3(x).reshape(2, 9, 3, 3)
        # Tap (m, n) = (2, 0) at output (1, 1) reads input (2, 0).
        assert cols[1, 2 * 3 + 0, 1, 1] == x[1, 2, 0]
        # Taps outside the grid read zero padding.
        assert cols[0, 0, 0, 0] == 0.0

    def test_backward_matches_differences(self):
        p = init_conv3x3(2, 3, self.rng)
        x = self.rng.normal(size=(2, 4, 5))
        r = self.rng.normal(size=(3, 4, 5))
        g = conv3x3_backward(p, x, r)

        def fn(params):
            return float(np.sum(conv3x3_forward(Conv3x3Params(params["w"], params["b"]), params["x"]) * r))

        report = grad_check_report(fn, {"w": p.weight, "b": p.bias, "x": x}, {"w": g.dweight, "b": g.dbias, "x": g.dx})
        assert report.max_rel_error < 1e-6

    def test_shape_errors(self):
        p = init_conv3x3(2, 2, self.rng)
        with pytest.raises(ArgumentError):
            conv3x3_forward(p, np.zeros((3, 4, 4)))
        with pytest.raises(ArgumentError):
            conv3x3_backward(p, np.zeros((2, 4, 4)), np.zeros((2, 4, 3)))
        with pytest.raises(ArgumentError):
            Conv3x3Params(np.zeros((2, 2, 5, 5)), np.zeros(2))
