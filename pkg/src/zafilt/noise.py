"""Heavy-tailed measurement noise: symmetric alpha-stable sampling and
calibration of the noise scale against a generalized signal-to-noise ratio.

The stable family covers Gaussian noise (alpha = 2) through increasingly
impulsive regimes as alpha decreases; for alpha < 2 the variance is
infinite, so signal-to-noise ratios are expressed against the dispersion
``scale ** alpha`` instead of a variance.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "NoiseParams",
    "GsnrSpec",
    "sample_stable",
    "sample_gaussian",
    "calibrate_scale",
]


@dataclass(frozen=True)
class NoiseParams:
    """Four-parameter stable law.

    Parameters
    ----------
    alpha : float
        Characteristic exponent in (0, 2]; smaller means heavier tails.
    beta : float, optional
        Skewness in [-1, 1]; 0 gives a symmetric law.
    location : float, optional
        Shift parameter.
    scale : float, optional
        Spread parameter, > 0 (its alpha-th power is the dispersion).
    """

    alpha: float
    beta: float = 0.0
    location: float = 0.0
    scale: float = 1.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.alpha) and 0 < self.alpha <= 2):
            raise ValueError(f"alpha must be in (0, 2], got {self.alpha}")
        if not (math.isfinite(self.beta) and -1 <= self.beta <= 1):
            raise ValueError(f"beta must be in [-1, 1], got {self.beta}")
        if not math.isfinite(self.location):
            raise ValueError(f"location must be finite, got {self.location}")
        if not (math.isfinite(self.scale) and self.scale > 0):
            raise ValueError(f"scale must be a positive finite number, got {self.scale}")


@dataclass(frozen=True)
class GsnrSpec:
    """Requested generalized signal-to-noise ratio.

    ``signal_power`` is the variance of the clean input process, not of
    the noiseless filter output.
    """

    gsnr_db: float
    signal_power: float = 1.0

    def __post_init__(self) -> None:
        if not math.isfinite(self.gsnr_db):
            raise ValueError(f"gsnr_db must be finite, got {self.gsnr_db}")
        if not (math.isfinite(self.signal_power) and self.signal_power > 0):
            raise ValueError(
                f"signal_power must be a positive finite number, got {self.signal_power}"
            )


def calibrate_scale(spec: GsnrSpec, alpha: float) -> float:
    """Stable scale delta such that
    10 * log10(signal_power / delta**alpha) equals ``spec.gsnr_db``.

    At alpha = 2 this reduces to an ordinary SNR up to the factor two
    between the Gaussian variance (2 * scale**2) and the dispersion.
    """
    if not (math.isfinite(alpha) and 0 < alpha <= 2):
        raise ValueError(f"alpha must be in (0, 2], got {alpha}")
    dispersion = spec.signal_power * 10.0 ** (-spec.gsnr_db / 10.0)
    return dispersion ** (1.0 / alpha)


def sample_stable(params: NoiseParams, rng: np.random.Generator, size: int | None = None):
    """Draw stable variates by transforming pairs of uniforms.

    Uses the Chambers-Mallows-Stuck construction: one uniform angle on
    (-pi/2, pi/2) and one unit exponential per variate, i.e. exactly two
    uniform draws per variate regardless of the parameters.

    Parameters
    ----------
    params : NoiseParams
    rng : numpy.random.Generator
    size : int, optional
        ``None`` (default) returns a single float after consuming two
        uniforms; an integer returns that many variates drawn from one
        block of ``2 * size`` uniforms (same distribution, different
        stream layout than repeated scalar calls).

    Returns
    -------
    float or numpy.ndarray
    """
    n = 1 if size is None else int(size)
    v = rng.random((2, n))
    u = np.pi * (v[0] - 0.5)
    w = -np.log1p(-v[1])

    alpha, beta = params.alpha, params.beta
    if alpha == 1.0:
        half_pi = 0.5 * np.pi
        shifted = half_pi + beta * u
        x = (shifted * np.tan(u)
             - beta * np.log(half_pi * w * np.cos(u) / shifted)) / half_pi
        out = params.scale * x + params.location
        if beta != 0.0:
            out = out + (2.0 / np.pi) * beta * params.scale * math.log(params.scale)
    else:
        t = beta * math.tan(0.5 * math.pi * alpha)
        shift = math.atan(t) / alpha
        prefactor = (1.0 + t * t) ** (0.5 / alpha)
        x = (prefactor
             * np.sin(alpha * (u + shift)) / np.cos(u) ** (1.0 / alpha)
             * (np.cos(u - alpha * (u + shift)) / w) ** ((1.0 - alpha) / alpha))
        out = params.scale * x + params.location
    return float(out[0]) if size is None else out


def sample_gaussian(mean: float, variance: float, rng: np.random.Generator,
                    size: int | None = None):
    """Gaussian variates from pairs of uniforms (Box-Muller).

    Two uniform draws per variate, so stream consumption is deterministic
    and matches :func:`sample_stable`.  ``variance`` may be 0, in which
    case the mean is returned exactly (the uniforms are still consumed).
    """
    if not (math.isfinite(variance) and variance >= 0):
        raise ValueError(f"variance must be a non-negative finite number, got {variance}")
    n = 1 if size is None else int(size)
    v = rng.random((2, n))
    z = np.sqrt(-2.0 * np.log1p(-v[0])) * np.cos(2.0 * np.pi * v[1])
    out = mean + math.sqrt(variance) * z
    return float(out[0]) if size is None else out
