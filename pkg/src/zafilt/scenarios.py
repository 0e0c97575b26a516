"""Time-varying true systems and ready-made experiment configurations.

A system trajectory is a piecewise-constant coefficient vector: an ordered
list of phases, each starting at a given iteration.  The three stock
examples share one 16-tap system that steps from 1/16-sparse through
8/16-sparse to fully dense.
"""
from __future__ import annotations

import bisect
import enum
import math
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .filters import Algorithm, FilterParams
from .noise import GsnrSpec, NoiseParams, calibrate_scale
from .signals import InputKind, InputSpec

__all__ = [
    "Phase",
    "SystemTrajectory",
    "ScenarioConfig",
    "Example",
    "true_weights_at",
    "phase_index_at",
    "phase_segments",
    "default_filter_params",
    "make_example",
]

NUM_TAPS = 16
GSNR_DB = 10.0
NOISE_ALPHA = 1.2

# Step sizes and attractor gains shared by the stock examples.
_DEFAULTS = {
    Algorithm.LAD: dict(mu=5e-3),
    Algorithm.ZA_LAD: dict(mu=5e-3, rho=1.5e-4),
    Algorithm.RZA_LAD: dict(mu=5e-3, rho=1.5e-3, epsilon=1e-2),
    Algorithm.LMS: dict(mu=5e-3),
    Algorithm.ZA_LMS: dict(mu=5e-3, rho=1.5e-4),
    Algorithm.RZA_LMS: dict(mu=5e-3, rho=1.5e-3, epsilon=1e-2),
}


def default_filter_params(algorithm: Algorithm | str, **overrides) -> FilterParams:
    """Stock parameters for one algorithm, with optional field overrides."""
    algorithm = Algorithm(algorithm)
    kwargs = dict(_DEFAULTS[algorithm])
    kwargs.update(overrides)
    return FilterParams(algorithm=algorithm, **kwargs)


@dataclass(frozen=True, eq=False)
class Phase:
    """One constant stretch of the true system."""

    start_iteration: int
    coefficients: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "coefficients", np.asarray(self.coefficients, dtype=np.float64)
        )
        if self.start_iteration < 0:
            raise ValueError(f"start_iteration must be >= 0, got {self.start_iteration}")
        if self.coefficients.ndim != 1:
            raise ValueError("coefficients must be a 1-D vector")


@dataclass(frozen=True, eq=False)
class SystemTrajectory:
    """Piecewise-constant true coefficient vector over a finite run."""

    num_taps: int
    phases: tuple[Phase, ...]
    total_iterations: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "phases", tuple(self.phases))
        if not self.phases:
            raise ValueError("at least one phase is required")
        if self.phases[0].start_iteration != 0:
            raise ValueError("the first phase must start at iteration 0")
        starts = [p.start_iteration for p in self.phases]
        if any(b <= a for a, b in zip(starts, starts[1:])):
            raise ValueError(f"phase starts must be strictly increasing, got {starts}")
        for p in self.phases:
            if p.coefficients.shape != (self.num_taps,):
                raise ValueError(
                    f"phase at {p.start_iteration} has {p.coefficients.shape[0]} "
                    f"coefficients, expected {self.num_taps}"
                )
        if self.total_iterations <= starts[-1]:
            raise ValueError(
                f"total_iterations ({self.total_iterations}) must exceed the "
                f"last phase start ({starts[-1]})"
            )

    @property
    def starts(self) -> list[int]:
        return [p.start_iteration for p in self.phases]


def _phase_position(trajectory: SystemTrajectory, n: int) -> int:
    if not 0 <= n < trajectory.total_iterations:
        raise ValueError(
            f"iteration {n} outside [0, {trajectory.total_iterations})"
        )
    return bisect.bisect_right(trajectory.starts, n) - 1


def true_weights_at(trajectory: SystemTrajectory, n: int) -> np.ndarray:
    """Coefficients of the phase active at iteration n (a fresh copy)."""
    return trajectory.phases[_phase_position(trajectory, n)].coefficients.copy()


def phase_index_at(trajectory: SystemTrajectory, n: int) -> int:
    """Index of the phase active at iteration n."""
    return _phase_position(trajectory, n)


def phase_segments(trajectory: SystemTrajectory,
                   upto: int | None = None) -> Iterator[tuple[slice, np.ndarray]]:
    """(slice, coefficients) pairs covering iterations [0, upto)."""
    end = trajectory.total_iterations if upto is None else upto
    if not 0 <= end <= trajectory.total_iterations:
        raise ValueError(f"upto must be in [0, {trajectory.total_iterations}], got {upto}")
    starts = trajectory.starts + [trajectory.total_iterations]
    for k, phase in enumerate(trajectory.phases):
        lo, hi = starts[k], min(starts[k + 1], end)
        if lo >= hi:
            break
        yield slice(lo, hi), phase.coefficients


@dataclass(frozen=True, eq=False)
class ScenarioConfig:
    """Everything one Monte-Carlo experiment needs: the true system, the
    input process, the noise law, the filters to run and the trial count.
    """

    name: str
    trajectory: SystemTrajectory
    input_spec: InputSpec
    noise: NoiseParams
    algorithms: tuple[FilterParams, ...]
    trials: int = 500

    def __post_init__(self) -> None:
        object.__setattr__(self, "algorithms", tuple(self.algorithms))
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if not self.algorithms:
            raise ValueError("at least one algorithm is required")
        labels = [p.name for p in self.algorithms]
        if len(set(labels)) != len(labels):
            raise ValueError(f"algorithm labels must be distinct, got {labels}")


class Example(enum.Enum):
    """The three stock experiments."""

    EX1 = "example1"
    EX2 = "example2"
    EX3 = "example3"


def _single_tap() -> np.ndarray:
    w = np.zeros(NUM_TAPS)
    w[4] = 1.0  # the 5th tap, counting from 1
    return w


def _odd_taps() -> np.ndarray:
    w = np.zeros(NUM_TAPS)
    w[0::2] = 1.0  # taps 1, 3, ..., 15, counting from 1
    return w


def _dense_taps() -> np.ndarray:
    w = _odd_taps()
    w[1::2] = -1.0  # even taps, counting from 1
    return w


def _switching_trajectory(first_switch: int, second_switch: int,
                          total: int) -> SystemTrajectory:
    return SystemTrajectory(
        num_taps=NUM_TAPS,
        phases=(
            Phase(0, _single_tap()),
            Phase(first_switch, _odd_taps()),
            Phase(second_switch, _dense_taps()),
        ),
        total_iterations=total,
    )


def _stable_noise(signal_power: float) -> NoiseParams:
    scale = calibrate_scale(GsnrSpec(GSNR_DB, signal_power), NOISE_ALPHA)
    return NoiseParams(alpha=NOISE_ALPHA, beta=0.0, location=0.0, scale=scale)


def make_example(which: Example | str) -> ScenarioConfig:
    """Fully-populated configuration for one of the stock experiments.

    - ``example1``: time-invariant 1/16-sparse system, white input, the
      sign-error family only (the epsilon study runs variants of it).
    - ``example2``: tap switches at 3000 and 6000 over 9000 iterations,
      white input, all six algorithms.
    - ``example3``: switches at 20000 and 40000 over 60000 iterations,
      AR(1) input with a = 0.8, all six algorithms.

    All use stable noise with alpha = 1.2 scaled for a 10 dB generalized
    SNR against the input power, and 500 trials.
    """
    which = Example(which)
    if which is Example.EX1:
        trajectory = SystemTrajectory(
            num_taps=NUM_TAPS,
            phases=(Phase(0, _single_tap()),),
            total_iterations=3000,
        )
        input_spec = InputSpec(InputKind.WHITE_GAUSSIAN, variance=1.0)
        algorithms = (Algorithm.LAD, Algorithm.ZA_LAD, Algorithm.RZA_LAD)
    elif which is Example.EX2:
        trajectory = _switching_trajectory(3000, 6000, 9000)
        input_spec = InputSpec(InputKind.WHITE_GAUSSIAN, variance=1.0)
        algorithms = tuple(Algorithm)
    else:
        trajectory = _switching_trajectory(20000, 40000, 60000)
        input_spec = InputSpec(InputKind.AR1, variance=1.0, ar_coefficient=0.8)
        algorithms = tuple(Algorithm)
    return ScenarioConfig(
        name=which.value,
        trajectory=trajectory,
        input_spec=input_spec,
        noise=_stable_noise(input_spec.stationary_power),
        algorithms=tuple(default_filter_params(a) for a in algorithms),
        trials=500,
    )
