from dataclasses import dataclass
from typing import Callable, Mapping, Optional

import numpy as np

from craterlens.utils import FloatArray, NumericError
from craterlens.utils.logging import get_logger

__all__ = ["GradCheckReport", "grad_check", "grad_check_report"]

logger = get_logger(__name__)

LossFn = Callable[[Mapping[str, FloatArray]], float]
PatternFn = Callable[[Mapping[str, FloatArray]], np.ndarray]


@dataclass(frozen=True)
class GradCheckReport:
    """Outcome of a finite-difference gradient check.

    Attributes
    ----------
    max_rel_error: float
        Worst relative error over the checked coordinates.
    worst: Optional[tuple[str, int]]
        Parameter name and flat index of the worst coordinate.
    checked: int
        Number of coordinates compared.
    skipped: int
        Coordinates left out because the activation pattern changed within
        the perturbation interval.
    refined: int
        Checked coordinates that needed a perturbation smaller than `eps`.
    """

    max_rel_error: float
    worst: Optional[tuple[str, int]]
    checked: int
    skipped: int
    refined: int = 0


def _relative_error(analytic: float, numeric: float, floor: float) -> float:
    return abs(analytic - numeric) / max(abs(analytic), abs(numeric), floor)


def grad_check_report(
    fn: LossFn,
    params: Mapping[str, FloatArray],
    grads: Mapping[str, FloatArray],
    eps: float = 1e-3,
    *,
    pattern_fn: Optional[PatternFn] = None,
    min_eps: Optional[float] = None,
    floor: float = 1e-6,
    max_coords: Optional[int] = None,
    rng: Optional[np.random.Generator] = None,
) -> GradCheckReport:
    """Compares analytic gradients with central finite differences.

    Each coordinate is perturbed by ``+eps`` and ``-eps`` in a private copy
    of the parameters and ``(f(+) - f(-)) / (2 eps)`` is compared with the
    analytic value. The relative error uses ``max(|a|, |n|, floor)`` as the
    denominator.

    Parameters
    ----------
    fn: LossFn
        Deterministic scalar function of the named parameters.
    params: Mapping[str, FloatArray]
        Point at which the gradient is checked. Not modified.
    grads: Mapping[str, FloatArray]
        Analytic gradient, same keys and shapes as `params`.
    eps: float
        Perturbation size.
    pattern_fn: PatternFn, optional
        Returns the activation pattern (ReLU signs, L1 residual signs) at a
        parameter point. Coordinates where the pattern differs between the
        two perturbed points and the unperturbed one are skipped, since the
        function has a kink there.
    min_eps: float, optional
        When given, a coordinate whose pattern changes is retried with the
        perturbation divided by 10 until it is stable or would drop below
        `min_eps`. Only skipped coordinates are retried.
    floor: float
        Lower bound of the relative error denominator.
    max_coords: int, optional
        Check at most this many coordinates per tensor, chosen with `rng`.
    rng: np.random.Generator, optional
        Required when `max_coords` is given.
    """
    if min_eps is not None and not 0 < min_eps <= eps:
        raise ValueError(f"min_eps must lie in (0, {eps}], got {min_eps}")
    work = {name: np.array(value, dtype=np.float64) for name, value in params.items()}
    base_pattern = pattern_fn(work) if pattern_fn is not None else None

    def differences(flat: np.ndarray, i: int, step: float) -> tuple[float, float, bool]:
        orig = flat[i]
        flat[i] = orig + step
        f_plus = fn(work)
        changed = pattern_fn is not None and not np.array_equal(pattern_fn(work), base_pattern)
        flat[i] = orig - step
        f_minus = fn(work)
        if pattern_fn is not None and not changed:
            changed = not np.array_equal(pattern_fn(work), base_pattern)
        flat[i] = orig
        return f_plus, f_minus, changed

    worst_err = 0.0
    worst: Optional[tuple[str, int]] = None
    checked = skipped = refined = 0

    for name, tensor in work.items():
        analytic = np.asarray(grads[name], dtype=np.float64).reshape(-1)
        flat = tensor.reshape(-1)
        indices = np.arange(flat.size)
        if max_coords is not None and flat.size > max_coords:
            if rng is None:
                raise ValueError("max_coords requires a random generator")
            indices = np.sort(rng.choice(flat.size, size=max_coords, replace=False))

        for i in indices:
            step = eps
            f_plus, f_minus, pattern_changed = differences(flat, i, step)
            while pattern_changed and min_eps is not None and step / 10 >= min_eps:
                step /= 10
                f_plus, f_minus, pattern_changed = differences(flat, i, step)

            if not (np.isfinite(f_plus) and np.isfinite(f_minus) and np.isfinite(analytic[i])):
                raise NumericError(f"Non-finite value while checking {name}[{i}]")
            if pattern_changed:
                logger.debug("Skipping %s[%d]: activation pattern changes within %g", name, i, step)
                skipped += 1
                continue

            numeric = (f_plus - f_minus) / (2 * step)
            err = _relative_error(float(analytic[i]), numeric, floor)
            checked += 1
            refined += int(step < eps)
            if err > worst_err or worst is None:
                worst_err = max(err, worst_err)
                worst = (name, int(i))

    return GradCheckReport(max_rel_error=worst_err, worst=worst, checked=checked, skipped=skipped, refined=refined)


def grad_check(
    fn: Callable[[Mapping[str, FloatArray]], tuple[float, Mapping[str, FloatArray]]],
    params: Mapping[str, FloatArray],
    eps: float = 1e-3,
    **kwargs,
) -> float:
    """Worst relative error between the gradient returned by `fn` and central differences.

    `fn` returns the loss and its analytic gradient; it is evaluated once for
    the gradient and twice per coordinate for the differences.
    """
    _, grads = fn(params)
    return grad_check_report(lambda p: fn(p)[0], params, grads, eps, **kwargs).max_rel_error
