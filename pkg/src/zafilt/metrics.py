"""Mean square deviation between estimated and true tap vectors."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .scenarios import SystemTrajectory, phase_segments

__all__ = ["MsdSeries", "msd", "msd_trajectory", "to_db"]


@dataclass(frozen=True, eq=False)
class MsdSeries:
    """Trial-averaged squared deviation per iteration for one algorithm.

    ``values`` are linear (not dB); ``trials`` is the number of trials
    that entered the average.
    """

    algorithm: str
    values: np.ndarray
    trials: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", np.asarray(self.values, dtype=np.float64))
        if self.values.ndim != 1:
            raise ValueError("values must be a 1-D vector")
        if self.trials < 0:
            raise ValueError(f"trials must be >= 0, got {self.trials}")


def msd(estimates, truth) -> float:
    """Average squared Euclidean deviation of K estimates from the truth:
    (1/K) * sum_k ||w_k - w_o||^2.
    """
    est = np.asarray(estimates, dtype=np.float64)
    truth = np.asarray(truth, dtype=np.float64)
    if est.ndim != 2 or est.shape[0] < 1:
        raise ValueError(f"estimates must be a non-empty K x M array, got shape {est.shape}")
    if truth.shape != (est.shape[1],):
        raise ValueError(
            f"truth has shape {truth.shape}, expected ({est.shape[1]},)"
        )
    dev = est - truth
    return float(np.einsum("km,km->k", dev, dev).mean())


def msd_trajectory(per_trial_weight_histories, trajectory: SystemTrajectory,
                   algorithm: str = "") -> MsdSeries:
    """Per-iteration MSD of recorded weight histories against a
    time-varying true system.

    Parameters
    ----------
    per_trial_weight_histories : array_like, shape (K, N, M) or (N, M)
        Weight vector of each trial at each iteration.
    trajectory : SystemTrajectory
        Supplies the true coefficients per iteration; N must not exceed
        its total iteration count.
    algorithm : str, optional
        Label stored on the returned series.
    """
    hist = np.asarray(per_trial_weight_histories, dtype=np.float64)
    if hist.ndim == 2:
        hist = hist[np.newaxis]
    if hist.ndim != 3:
        raise ValueError(
            "histories must share one (iterations, taps) shape across trials"
        )
    trials, iterations, taps = hist.shape
    if trials < 1:
        raise ValueError("at least one trial history is required")
    if taps != trajectory.num_taps:
        raise ValueError(f"histories have {taps} taps, expected {trajectory.num_taps}")
    if iterations > trajectory.total_iterations:
        raise ValueError(
            f"histories cover {iterations} iterations, trajectory only "
            f"{trajectory.total_iterations}"
        )
    values = np.empty(iterations)
    for segment, coefficients in phase_segments(trajectory, upto=iterations):
        dev = hist[:, segment, :] - coefficients
        values[segment] = np.einsum("knm,knm->kn", dev, dev).mean(axis=0)
    return MsdSeries(algorithm=algorithm, values=values, trials=trials)


def to_db(values) -> np.ndarray:
    """Linear MSD to decibels; zeros map to -inf without warnings."""
    values = np.asarray(values, dtype=np.float64)
    with np.errstate(divide="ignore"):
        return 10.0 * np.log10(values)
