import numpy as np

from craterlens.utils import ArgumentError, FloatArray

__all__ = ["l1_loss"]


def l1_loss(pred: FloatArray, target: FloatArray) -> tuple[float, FloatArray]:
    """Mean absolute error and its gradient with respect to `pred`.

    The gradient is sign(pred - target) / N, with sign(0) = 0.
    """
    if pred.shape != target.shape:
        raise ArgumentError(f"Shape mismatch {pred.shape} vs {target.shape}")
    if pred.size == 0:
        raise ArgumentError("L1 loss of an empty tensor")
    diff = pred - target
    return float(np.mean(np.abs(diff))), np.sign(diff) / diff.size
