from unittest import TestCase

import pytest
from parameterized import parameterized

from craterlens.detect import DetectionPx, filter_score, remove_boundary
from craterlens.utils import ArgumentError


class TestRemoveBoundary(TestCase):
    def setUp(self):
        self.dets = [
            DetectionPx(5.0, 5.0, 20.0, 20.0, 0.9),
            DetectionPx(4.0, 30.0, 20.0, 40.0, 0.9),
            DetectionPx(50.0, 50.0, 95.0, 95.0, 0.9),
            DetectionPx(50.0, 50.0, 95.1, 60.0, 0.9),
            DetectionPx(-2.0, 10.0, 8.0, 20.0, 0.9),
        ]

    def test_zero_margin_keeps_everything(self):
        assert remove_boundary(self.dets, 0, 100, 100) == self.dets

    def test_edges_inclusive(self):
        assert remove_boundary(self.dets, 5, 100, 100) == [self.dets[0], self.dets[2]]

    def test_rectangular_patch(self):
        assert remove_boundary(self.dets, 5, 120, 60) == [self.dets[0]]

    def test_negative_margin(self):
        with pytest.raises(ArgumentError):
            remove_boundary(self.dets, -1, 100, 100)


class TestFilterScore(TestCase):
    @parameterized.expand([(0.0, 4), (0.5, 3), (0.7, 2), (0.71, 1), (1.0, 0)])
    def test_threshold_inclusive(self, s, expected):
        dets = [DetectionPx(0, 0, 1, 1, score) for score in (0.2, 0.5, 0.7, 0.99)]
        kept = filter_score(dets, s)
        assert len(kept) == expected
        assert all(d.score >= s for d in kept)

    def test_invalid_threshold(self):
        with pytest.raises(ArgumentError):
            filter_score([], 1.2)
