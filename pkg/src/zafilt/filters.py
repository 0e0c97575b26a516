"""Online adaptive filters: sign-error (least absolute deviation) and
mean-square families, each in plain, zero-attracting and reweighted
zero-attracting variants.

Every filter shares the same per-sample cycle: predict with the current
taps, compute the error against the desired sample, then apply the
algorithm's weight update in place.  The zero-attracting variants add a
``-rho * sgn(w)`` pull toward zero; the reweighted variants scale that
pull by ``1 / (1 + epsilon * |w|)`` so large taps are spared.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

__all__ = [
    "Algorithm",
    "FilterParams",
    "FilterState",
    "StepRecord",
    "sgn",
    "predict",
    "reweight_vector",
    "step",
    "step_lad",
    "step_za_lad",
    "step_rza_lad",
    "step_lms",
    "step_za_lms",
    "step_rza_lms",
    "l1_penalized_cost",
    "l1_penalized_gradient",
    "log_sum_penalized_cost",
    "log_sum_penalized_gradient",
]


class Algorithm(enum.Enum):
    """Tags for the six supported weight-update rules."""

    LAD = "lad"
    ZA_LAD = "za_lad"
    RZA_LAD = "rza_lad"
    LMS = "lms"
    ZA_LMS = "za_lms"
    RZA_LMS = "rza_lms"

    @property
    def is_sign_error(self) -> bool:
        """True for the LAD family (update driven by sgn(e), not e)."""
        return self in (Algorithm.LAD, Algorithm.ZA_LAD, Algorithm.RZA_LAD)


@dataclass(frozen=True)
class FilterParams:
    """Parameters of one adaptive-filter instance.

    Parameters
    ----------
    algorithm : Algorithm or str
        Which update rule to run.
    mu : float
        Step size, > 0.
    rho : float, optional
        Combined zero-attractor gain (step size times regularization
        weight), >= 0.  Ignored by the plain LAD/LMS rules.
    epsilon : float, optional
        Reweighting constant, > 0.  Only enters the reweighted rules but
        is validated for every algorithm.
    label : str, optional
        Name used in result tables; defaults to the algorithm tag.
    """

    algorithm: Algorithm
    mu: float
    rho: float = 0.0
    epsilon: float = 1e-2
    label: str | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "algorithm", Algorithm(self.algorithm))
        if not (math.isfinite(self.mu) and self.mu > 0):
            raise ValueError(f"mu must be a positive finite number, got {self.mu}")
        if not (math.isfinite(self.rho) and self.rho >= 0):
            raise ValueError(f"rho must be a non-negative finite number, got {self.rho}")
        if not (math.isfinite(self.epsilon) and self.epsilon > 0):
            raise ValueError(f"epsilon must be a positive finite number, got {self.epsilon}")

    @property
    def name(self) -> str:
        return self.label if self.label is not None else self.algorithm.value


class FilterState:
    """Tap weights and iteration counter of one running filter.

    Weights start at zero; :func:`step` mutates them in place.  A state
    must never be stepped concurrently from two threads.
    """

    __slots__ = ("weights", "iteration")

    def __init__(self, num_taps: int):
        if num_taps < 1:
            raise ValueError(f"num_taps must be >= 1, got {num_taps}")
        self.weights = np.zeros(num_taps)
        self.iteration = 0

    @property
    def num_taps(self) -> int:
        return self.weights.shape[0]


class StepRecord(NamedTuple):
    """Filter output and error of one prediction/update cycle."""

    output: float
    error: float


def sgn(x: float) -> float:
    """Sign of a finite scalar, with sgn(0) = 0.

    The zero case makes w = 0 an exact fixed point of the attractor term
    and e = 0 an exact no-op of the gradient term.
    """
    if not math.isfinite(x):
        raise ValueError(f"sgn requires a finite value, got {x}")
    if x > 0:
        return 1.0
    if x < 0:
        return -1.0
    return 0.0


def predict(state: FilterState, regressor) -> float:
    """Inner product of the current taps with the regressor; no mutation."""
    x = np.asarray(regressor, dtype=np.float64)
    if x.shape != state.weights.shape:
        raise ValueError(f"regressor has shape {x.shape}, expected {state.weights.shape}")
    return float(state.weights @ x)


def reweight_vector(weights, epsilon: float) -> np.ndarray:
    """Element-wise sgn(w) / (1 + epsilon * |w|).

    This is the direction of the reweighted attractor: full strength on
    vanishing taps, decaying like 1/(epsilon * |w|) on large ones.
    """
    if not (math.isfinite(epsilon) and epsilon > 0):
        raise ValueError(f"epsilon must be a positive finite number, got {epsilon}")
    w = np.asarray(weights, dtype=np.float64)
    return np.sign(w) / (1.0 + epsilon * np.abs(w))


def _checked_regressor(state: FilterState, params: FilterParams,
                       expected: Algorithm, regressor) -> np.ndarray:
    if params.algorithm is not expected:
        raise ValueError(
            f"params are for {params.algorithm.value!r}, not {expected.value!r}"
        )
    x = np.asarray(regressor, dtype=np.float64)
    if x.shape != state.weights.shape:
        raise ValueError(f"regressor has shape {x.shape}, expected {state.weights.shape}")
    return x


def step_lad(state: FilterState, params: FilterParams, regressor,
             desired: float) -> StepRecord:
    """Sign-error update: w <- w + mu * sgn(e) * x."""
    x = _checked_regressor(state, params, Algorithm.LAD, regressor)
    y = float(state.weights @ x)
    e = desired - y
    state.weights += (params.mu * sgn(e)) * x
    state.iteration += 1
    return StepRecord(y, e)


def step_za_lad(state: FilterState, params: FilterParams, regressor,
                desired: float) -> StepRecord:
    """Zero-attracting sign-error update:
    w <- w + mu * sgn(e) * x - rho * sgn(w).

    Both terms are evaluated at the pre-update taps.
    """
    x = _checked_regressor(state, params, Algorithm.ZA_LAD, regressor)
    w = state.weights
    y = float(w @ x)
    e = desired - y
    w += (params.mu * sgn(e)) * x - params.rho * np.sign(w)
    state.iteration += 1
    return StepRecord(y, e)


def step_rza_lad(state: FilterState, params: FilterParams, regressor,
                 desired: float) -> StepRecord:
    """Reweighted zero-attracting sign-error update:
    w <- w + mu * sgn(e) * x - rho * sgn(w) / (1 + epsilon * |w|).

    Both terms are evaluated at the pre-update taps; the reweighting
    vector is recomputed every step, never cached.
    """
    x = _checked_regressor(state, params, Algorithm.RZA_LAD, regressor)
    w = state.weights
    y = float(w @ x)
    e = desired - y
    w += (params.mu * sgn(e)) * x - params.rho * reweight_vector(w, params.epsilon)
    state.iteration += 1
    return StepRecord(y, e)


def step_lms(state: FilterState, params: FilterParams, regressor,
             desired: float) -> StepRecord:
    """Mean-square update: w <- w + mu * e * x."""
    x = _checked_regressor(state, params, Algorithm.LMS, regressor)
    y = float(state.weights @ x)
    e = desired - y
    state.weights += (params.mu * e) * x
    state.iteration += 1
    return StepRecord(y, e)


def step_za_lms(state: FilterState, params: FilterParams, regressor,
                desired: float) -> StepRecord:
    """Zero-attracting mean-square update: w <- w + mu * e * x - rho * sgn(w)."""
    x = _checked_regressor(state, params, Algorithm.ZA_LMS, regressor)
    w = state.weights
    y = float(w @ x)
    e = desired - y
    w += (params.mu * e) * x - params.rho * np.sign(w)
    state.iteration += 1
    return StepRecord(y, e)


def step_rza_lms(state: FilterState, params: FilterParams, regressor,
                 desired: float) -> StepRecord:
    """Reweighted zero-attracting mean-square update:
    w <- w + mu * e * x - rho * sgn(w) / (1 + epsilon * |w|).
    """
    x = _checked_regressor(state, params, Algorithm.RZA_LMS, regressor)
    w = state.weights
    y = float(w @ x)
    e = desired - y
    w += (params.mu * e) * x - params.rho * reweight_vector(w, params.epsilon)
    state.iteration += 1
    return StepRecord(y, e)


_STEP_FUNCS = {
    Algorithm.LAD: step_lad,
    Algorithm.ZA_LAD: step_za_lad,
    Algorithm.RZA_LAD: step_rza_lad,
    Algorithm.LMS: step_lms,
    Algorithm.ZA_LMS: step_za_lms,
    Algorithm.RZA_LMS: step_rza_lms,
}


def step(state: FilterState, params: FilterParams, regressor,
         desired: float) -> StepRecord:
    """One prediction/update cycle, dispatched on ``params.algorithm``.

    Parameters
    ----------
    state : FilterState
        Mutated in place: weights updated, iteration incremented.
    params : FilterParams
        Algorithm tag and update constants.
    regressor : array_like, shape (num_taps,)
        Input vector x(n), most recent sample first.
    desired : float
        Reference sample d(n).

    Returns
    -------
    StepRecord
        Filter output y(n) and error e(n) = d(n) - y(n), both computed
        before the weight update.
    """
    try:
        fn = _STEP_FUNCS[params.algorithm]
    except (KeyError, TypeError):
        raise ValueError(f"unknown algorithm tag {params.algorithm!r}") from None
    return fn(state, params, regressor, desired)


def l1_penalized_cost(weights, regressor, desired: float, reg_weight: float) -> float:
    """Instantaneous objective behind the zero-attracting sign update:
    |d - w.x| + reg_weight * sum(|w|).
    """
    w = np.asarray(weights, dtype=np.float64)
    x = np.asarray(regressor, dtype=np.float64)
    e = desired - float(w @ x)
    return abs(e) + reg_weight * float(np.abs(w).sum())


def l1_penalized_gradient(weights, regressor, desired: float,
                          reg_weight: float) -> np.ndarray:
    """Subgradient of :func:`l1_penalized_cost` with respect to the weights:
    -sgn(e) * x + reg_weight * sgn(w).
    """
    w = np.asarray(weights, dtype=np.float64)
    x = np.asarray(regressor, dtype=np.float64)
    e = desired - float(w @ x)
    return -sgn(e) * x + reg_weight * np.sign(w)


def log_sum_penalized_cost(weights, regressor, desired: float, reg_weight: float,
                           epsilon: float) -> float:
    """Instantaneous objective behind the reweighted attractor:
    |d - w.x| + reg_weight * sum(log(1 + epsilon * |w|)).
    """
    if not (math.isfinite(epsilon) and epsilon > 0):
        raise ValueError(f"epsilon must be a positive finite number, got {epsilon}")
    w = np.asarray(weights, dtype=np.float64)
    x = np.asarray(regressor, dtype=np.float64)
    e = desired - float(w @ x)
    return abs(e) + reg_weight * float(np.log1p(epsilon * np.abs(w)).sum())


def log_sum_penalized_gradient(weights, regressor, desired: float, reg_weight: float,
                               epsilon: float) -> np.ndarray:
    """Subgradient of :func:`log_sum_penalized_cost` with respect to the
    weights: -sgn(e) * x + reg_weight * epsilon * sgn(w) / (1 + epsilon * |w|).
    """
    w = np.asarray(weights, dtype=np.float64)
    x = np.asarray(regressor, dtype=np.float64)
    e = desired - float(w @ x)
    return -sgn(e) * x + reg_weight * epsilon * reweight_vector(w, epsilon)
