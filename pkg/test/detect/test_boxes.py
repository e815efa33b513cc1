from unittest import TestCase

import numpy as np
import pytest

from craterlens.detect import DetectionPx, boxes_array, iou, iou_matrix, scores_array
from craterlens.testing import brute_force_iou
from craterlens.utils import ArgumentError


def random_boxes(rng: np.random.Generator, n: int) -> np.ndarray:
    xy = rng.uniform(0.0, 20.0, size=(n, 2))
    wh = rng.uniform(1.0, 8.0, size=(n, 2))
    return np.concatenate([xy, xy + wh], axis=1)


class TestDetectionPx(TestCase):
    def test_properties(self):
        d = DetectionPx(1.0, 2.0, 4.0, 8.0, 0.5, patch_id=3)
        assert d.box == (1.0, 2.0, 4.0, 8.0)
        assert d.width == 3.0 and d.height == 6.0

    def test_validation(self):
        with pytest.raises(ArgumentError):
            DetectionPx(1.0, 0.0, 1.0, 2.0, 0.5)
        with pytest.raises(ArgumentError):
            DetectionPx(0.0, 0.0, 1.0, 1.0, 1.5)

    def test_arrays(self):
        dets = [DetectionPx(0, 0, 1, 1, 0.3), DetectionPx(2, 2, 4, 5, 0.9)]
        assert boxes_array(dets).shape == (2, 4)
        assert np.array_equal(scores_array(dets), [0.3, 0.9])
        assert boxes_array([]).shape == (0, 4)


class TestIoU(TestCase):
    def test_known_values(self):
        assert iou((0, 0, 2, 2), (0, 0, 2, 2)) == 1.0
        assert iou((0, 0, 2, 2), (1, 0, 3, 2)) == 1.0 / 3.0
        assert iou((0, 0, 1, 1), (1, 0, 2, 1)) == 0.0
        assert iou((0, 0, 1, 1), (5, 5, 6, 6)) == 0.0

    def test_matrix_matches_oracle(self):
        rng = np.random.default_rng(0)
        a, b = random_boxes(rng, 15), random_boxes(rng, 11)
        m = iou_matrix(a, b)
        assert m.shape == (15, 11)
        for i in range(15):
            for j in range(11):
                assert np.isclose(m[i, j], brute_force_iou(a[i], b[j]))
        assert np.allclose(m, iou_matrix(b, a).T)

    def test_degenerate(self):
        with pytest.raises(ArgumentError):
            iou((0, 0, 0, 1), (0, 0, 1, 1))
