"""Input-signal generation and tapped-delay-line regressor construction."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .noise import sample_gaussian

__all__ = [
    "InputKind",
    "InputSpec",
    "RegressorWindow",
    "next_input",
    "generate_input",
    "regressor_matrix",
]


class InputKind(enum.Enum):
    WHITE_GAUSSIAN = "white_gaussian"
    AR1 = "ar1"


@dataclass(frozen=True)
class InputSpec:
    """Input process: white Gaussian samples, or a first-order
    autoregression x(n) = a * x(n-1) + u(n) driven by white Gaussian u.

    ``variance`` is the driving-noise variance in both cases; the AR(1)
    stationary power is ``variance / (1 - ar_coefficient**2)``.
    """

    kind: InputKind
    variance: float = 1.0
    ar_coefficient: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", InputKind(self.kind))
        if not (math.isfinite(self.variance) and self.variance > 0):
            raise ValueError(f"variance must be a positive finite number, got {self.variance}")
        if not math.isfinite(self.ar_coefficient):
            raise ValueError(f"ar_coefficient must be finite, got {self.ar_coefficient}")
        if self.kind is InputKind.AR1 and not abs(self.ar_coefficient) < 1:
            raise ValueError(
                f"ar_coefficient must satisfy |a| < 1, got {self.ar_coefficient}"
            )

    @property
    def stationary_power(self) -> float:
        """Long-run variance of the generated process."""
        if self.kind is InputKind.AR1:
            return self.variance / (1.0 - self.ar_coefficient**2)
        return self.variance


def next_input(spec: InputSpec, prev: float, rng: np.random.Generator) -> float:
    """One new input sample given the previous one (0.0 before the start)."""
    u = sample_gaussian(0.0, spec.variance, rng)
    if spec.kind is InputKind.AR1:
        return spec.ar_coefficient * prev + u
    return u


def generate_input(spec: InputSpec, count: int, rng: np.random.Generator) -> np.ndarray:
    """Input sequence x(0..count-1) with zero initial condition.

    Innovations are drawn in one block of ``2 * count`` uniforms, so the
    stream layout differs from repeated :func:`next_input` calls on the
    same generator; the recursion arithmetic is identical.
    """
    u = sample_gaussian(0.0, spec.variance, rng, size=count)
    if spec.kind is not InputKind.AR1 or spec.ar_coefficient == 0.0:
        return u
    out = np.empty(count)
    a = spec.ar_coefficient
    prev = 0.0
    for n in range(count):
        prev = a * prev + u[n]
        out[n] = prev
    return out


class RegressorWindow:
    """Most-recent-first tapped delay line of fixed length.

    Starts all-zero; after ``push(s)`` the buffer holds
    ``(s, previous[0], previous[1], ...)`` truncated to its length.
    """

    __slots__ = ("_buffer",)

    def __init__(self, num_taps: int):
        if num_taps < 1:
            raise ValueError(f"num_taps must be >= 1, got {num_taps}")
        self._buffer = np.zeros(num_taps)

    def push(self, sample: float) -> np.ndarray:
        """Shift one sample in and return the live buffer (do not mutate)."""
        buf = self._buffer
        buf[1:] = buf[:-1]
        buf[0] = sample
        return buf

    @property
    def values(self) -> np.ndarray:
        return self._buffer

    def __len__(self) -> int:
        return self._buffer.shape[0]


def regressor_matrix(samples: np.ndarray, num_taps: int) -> np.ndarray:
    """All delay-line states for a sample sequence at once.

    Row n equals the :class:`RegressorWindow` contents after pushing
    ``samples[n]``, i.e. ``(x(n), x(n-1), ..., x(n-M+1))`` with zeros
    before the start.
    """
    samples = np.asarray(samples, dtype=np.float64)
    if samples.ndim != 1:
        raise ValueError(f"samples must be 1-D, got shape {samples.shape}")
    padded = np.concatenate([np.zeros(num_taps - 1), samples])
    windows = np.lib.stride_tricks.sliding_window_view(padded, num_taps)
    return np.ascontiguousarray(windows[:, ::-1])
