from unittest import TestCase

import numpy as np
import pytest

from craterlens.nn import l1_loss
from craterlens.utils import ArgumentError


class TestL1Loss(TestCase):
    def test_value_and_gradient(self):
        loss, grad = l1_loss(np.array([0.5, 0.2, 1.0, 0.0]), np.array([0.0, 0.4, 1.0, 0.1]))
        assert np.isclose(loss, (0.5 + 0.2 + 0.0 + 0.1) / 4)
        assert np.array_equal(grad, [0.25, -0.25, 0.0, -0.25])

    def test_errors(self):
        with pytest.raises(ArgumentError):
            l1_loss(np.zeros(3), np.zeros(4))
        with pytest.raises(ArgumentError):
            l1_loss(np.zeros(0), np.zeros(0))
