from dataclasses import dataclass, replace

import numpy as np

from craterlens.utils import ArgumentError, FloatArray

__all__ = ["AdamState", "adam_init", "adam_step", "step_lr"]


@dataclass(frozen=True, eq=False)
class AdamState:
    """Per-tensor state of the Adam optimizer.

    Attributes
    ----------
    step: int
        Number of updates applied so far.
    m: FloatArray
        First moment estimate, shaped like the parameter.
    v: FloatArray
        Second moment estimate, shaped like the parameter.
    lr: float
        Learning rate used by the next update.
    beta1, beta2, eps: float
        Adam hyperparameters.
    """

    step: int
    m: FloatArray
    v: FloatArray
    lr: float = 1e-4
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8


def adam_init(param: FloatArray, lr: float = 1e-4, beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8):
    return AdamState(0, np.zeros_like(param), np.zeros_like(param), lr, beta1, beta2, eps)


def adam_step(param: FloatArray, grad: FloatArray, state: AdamState) -> tuple[FloatArray, AdamState]:
    """One bias-corrected Adam update.

    Returns the new parameter and state; the inputs are not modified. A
    tensor whose gradient is identically zero did not take part in the
    step and is returned unchanged together with its state.
    """
    if param.shape != grad.shape or state.m.shape != param.shape:
        raise ArgumentError(f"Shape mismatch: param {param.shape}, grad {grad.shape}, state {state.m.shape}")
    if not np.any(grad):
        return param, state

    t = state.step + 1
    m = state.beta1 * state.m + (1 - state.beta1) * grad
    v = state.beta2 * state.v + (1 - state.beta2) * grad * grad
    m_hat = m / (1 - state.beta1**t)
    v_hat = v / (1 - state.beta2**t)
    new_param = param - state.lr * m_hat / (np.sqrt(v_hat) + state.eps)
    return new_param, replace(state, step=t, m=m, v=v)


def step_lr(base_lr: float, epoch: int, decay_epoch: int, factor: float = 0.5) -> float:
    """Learning rate multiplied by `factor` once `epoch` reaches `decay_epoch`."""
    return base_lr * factor if epoch >= decay_epoch else base_lr
