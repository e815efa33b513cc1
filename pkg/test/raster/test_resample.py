import math
from unittest import TestCase

import numpy as np
import pytest
from parameterized import parameterized

from craterlens.raster import ImageGrid, bicubic_resize, cubic_weight, resize_matrix
from craterlens.utils import ArgumentError


def keys(x: float, a: float = -0.5) -> float:
    x = abs(x)
    if x <= 1:
        return (a + 2) * x**3 - (a + 3) * x**2 + 1
    if x < 2:
        return a * x**3 - 5 * a * x**2 + 8 * a * x - 4 * a
    return 0.0


def brute_force_sample(values: np.ndarray, out_h: int, out_w: int, i: int, j: int) -> float:
    h, w = values.shape
    sy = (i + 0.5) * h / out_h - 0.5
    sx = (j + 0.5) * w / out_w - 0.5
    y0, x0 = math.floor(sy), math.floor(sx)
    total = 0.0
    for dy in range(-1, 3):
        for dx in range(-1, 3):
            yy = min(max(y0 + dy, 0), h - 1)
            xx = min(max(x0 + dx, 0), w - 1)
            total += keys(sy - (y0 + dy)) * keys(sx - (x0 + dx)) * values[yy, xx]
    return total


class TestCubicKernel(TestCase):
    def test_interpolating(self):
        assert cubic_weight(0.0) == 1.0
        for x in (-2.0, -1.0, 1.0, 2.0, 2.5):
            assert cubic_weight(x) == 0.0

    def test_partition_of_unity(self):
        for frac in np.linspace(0.0, 1.0, 11):
            taps = [cubic_weight(frac - k) for k in range(-1, 3)]
            assert math.isclose(sum(taps), 1.0, abs_tol=1e-12)

    @parameterized.expand([(5, 5), (4, 9), (9, 4), (3, 17)])
    def test_matrix_rows_sum_to_one(self, n_in, n_out):
        assert np.allclose(resize_matrix(n_in, n_out).sum(axis=1), 1.0)


class TestBicubicResize(TestCase):
    def setUp(self):
        self.rng = np.random.default_rng(11)

    def test_same_size_is_identity(self):
        img = ImageGrid(self.rng.uniform(size=(6, 7)))
        assert np.array_equal(bicubic_resize(img, 6, 7).values, img.values)

    def test_constant_image(self):
        img = ImageGrid.constant(5, 4, 0.3)
        assert np.allclose(bicubic_resize(img, 11, 3).values, 0.3)

    @parameterized.expand([(6, 6, 13, 9), (9, 8, 4, 3), (5, 7, 10, 14)])
    def test_matches_pointwise_oracle(self, h, w, out_h, out_w):
        values = self.rng.uniform(0.3, 0.7, size=(h, w))
        out = bicubic_resize(ImageGrid(values), out_h, out_w).values
        for i in range(out_h):
            for j in range(out_w):
                assert math.isclose(out[i, j], brute_force_sample(values, out_h, out_w, i, j), abs_tol=1e-12)

    def test_output_is_clipped(self):
        values = np.zeros((4, 4))
        values[:, 2:] = 1.0
        out = bicubic_resize(ImageGrid(values), 4, 13).values
        assert out.min() >= 0.0 and out.max() <= 1.0

    def test_keeps_bit_depth(self):
        img = ImageGrid(np.full((2, 2), 0.5), source_bit_depth=8)
        assert bicubic_resize(img, 3, 3).source_bit_depth == 8

    def test_invalid_size(self):
        with pytest.raises(ArgumentError):
            bicubic_resize(ImageGrid.constant(2, 2, 0.0), 0, 2)
