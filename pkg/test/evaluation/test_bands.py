from unittest import TestCase

import pytest

from constants.reference_metrics import source_resolution, working_resolution
from craterlens.evaluation import diameter_band_for_scale, scaled_meters_per_pixel
from craterlens.utils import ArgumentError


class TestBands(TestCase):
    def test_band(self):
        assert diameter_band_for_scale(100.0, 200.0, working_resolution) == (5.0, 10.0)
        assert diameter_band_for_scale(10.0, 20.0, 12.5) == (0.125, 0.25)

    def test_scaled_resolution(self):
        assert scaled_meters_per_pixel(working_resolution, 4.0) == 12.5
        assert scaled_meters_per_pixel(working_resolution, 2.0) == 25.0
        assert scaled_meters_per_pixel(source_resolution, 1.0) == source_resolution

    def test_invalid(self):
        with pytest.raises(ArgumentError):
            diameter_band_for_scale(0.0, 10.0, 50.0)
        with pytest.raises(ArgumentError):
            scaled_meters_per_pixel(50.0, 0.0)
