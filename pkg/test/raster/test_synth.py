from unittest import TestCase

import numpy as np

from craterlens.raster import synth_texture


class TestSynthTexture(TestCase):
    def test_spans_unit_interval(self):
        img = synth_texture(24, 32, np.random.default_rng(0))
        assert img.shape == (24, 32)
        assert img.values.min() == 0.0
        assert np.isclose(img.values.max(), 1.0)

    def test_reproducible(self):
        a = synth_texture(16, 16, np.random.default_rng(4))
        b = synth_texture(16, 16, np.random.default_rng(4))
        assert np.array_equal(a.values, b.values)
