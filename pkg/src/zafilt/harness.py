"""Seeded Monte-Carlo experiment runner.

Each trial draws its own input and noise sequences from streams derived
from the master seed, steps every configured filter over the identical
(regressor, desired) pairs, and reports the squared deviation from the
true system at every iteration.  Trials are aggregated in index order so
results are byte-identical for any worker count.
"""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .filters import FilterState, step
from .metrics import MsdSeries
from .noise import sample_stable
from .scenarios import ScenarioConfig, phase_segments
from .signals import generate_input, regressor_matrix

__all__ = ["TrialSeed", "TrialResult", "ExperimentResult", "run_trial", "run_experiment"]


@dataclass(frozen=True)
class TrialSeed:
    """Addressing of one trial's random streams.

    Streams are derived as ``SeedSequence(master_seed, spawn_key=(trial_index,))``
    spawned into one child per purpose (input, then noise), so distinct
    (master_seed, trial_index) pairs give statistically independent
    streams and every trial is reproducible in isolation.
    """

    master_seed: int
    trial_index: int

    def __post_init__(self) -> None:
        if not 0 <= self.master_seed < 2**64:
            raise ValueError(f"master_seed must be a 64-bit unsigned integer, got {self.master_seed}")
        if self.trial_index < 0:
            raise ValueError(f"trial_index must be >= 0, got {self.trial_index}")

    def streams(self) -> tuple[np.random.Generator, np.random.Generator]:
        """(input stream, noise stream) for this trial."""
        root = np.random.SeedSequence(entropy=self.master_seed,
                                      spawn_key=(self.trial_index,))
        input_seq, noise_seq = root.spawn(2)
        return np.random.default_rng(input_seq), np.random.default_rng(noise_seq)


@dataclass(eq=False)
class TrialResult:
    """Weight histories and per-iteration squared deviations of one trial,
    keyed by algorithm label.

    ``histories[label][i]`` is the weight vector before processing
    iteration ``i * stride`` (so row 0 is the all-zero start).
    """

    histories: dict[str, np.ndarray]
    squared_deviation: dict[str, np.ndarray]


@dataclass(eq=False)
class ExperimentResult:
    """Aggregated output of :func:`run_experiment`."""

    config: ScenarioConfig
    master_seed: int
    series: dict[str, MsdSeries]
    diverged: dict[str, int]
    wall_time_s: float


def run_trial(config: ScenarioConfig, seed: TrialSeed,
              history_stride: int = 1) -> TrialResult:
    """Run every configured filter once over one realization.

    All filters see bit-identical input and noise sequences (common
    random numbers), so per-trial comparisons between algorithms are
    paired.

    Parameters
    ----------
    config : ScenarioConfig
    seed : TrialSeed
    history_stride : int, optional
        Keep every ``history_stride``-th weight vector in the returned
        histories; 0 keeps none.  Squared deviations are always computed
        at every iteration.
    """
    if history_stride < 0:
        raise ValueError(f"history_stride must be >= 0, got {history_stride}")
    trajectory = config.trajectory
    iterations = trajectory.total_iterations
    taps = trajectory.num_taps

    input_rng, noise_rng = seed.streams()
    x = generate_input(config.input_spec, iterations, input_rng)
    regressors = regressor_matrix(x, taps)
    desired = np.empty(iterations)
    for segment, coefficients in phase_segments(trajectory):
        desired[segment] = regressors[segment] @ coefficients
    desired += sample_stable(config.noise, noise_rng, size=iterations)

    histories: dict[str, np.ndarray] = {}
    squared_deviation: dict[str, np.ndarray] = {}
    recorded = np.empty((iterations, taps))
    for params in config.algorithms:
        state = FilterState(taps)
        weights = state.weights
        for n in range(iterations):
            recorded[n] = weights
            step(state, params, regressors[n], desired[n])
        sqdev = np.empty(iterations)
        for segment, coefficients in phase_segments(trajectory):
            dev = recorded[segment] - coefficients
            sqdev[segment] = np.einsum("nm,nm->n", dev, dev)
        squared_deviation[params.name] = sqdev
        if history_stride >= 1:
            histories[params.name] = recorded[::history_stride].copy()
    return TrialResult(histories=histories, squared_deviation=squared_deviation)


def _trial_squared_deviation(config: ScenarioConfig, master_seed: int,
                             trial_index: int) -> dict[str, np.ndarray]:
    seed = TrialSeed(master_seed=master_seed, trial_index=trial_index)
    return run_trial(config, seed, history_stride=0).squared_deviation


def run_experiment(config: ScenarioConfig, master_seed: int, parallelism: int = 1,
                   divergence_cap: float | None = None,
                   progress: Callable[[int, int], None] | None = None) -> ExperimentResult:
    """Average the per-iteration squared deviation over independent trials.

    Parameters
    ----------
    config : ScenarioConfig
    master_seed : int
        64-bit seed from which every per-trial stream is derived.
    parallelism : int, optional
        Worker processes; 1 runs inline.  The output is byte-identical
        for any value because trials are summed strictly in index order.
    divergence_cap : float, optional
        A trial whose squared deviation goes non-finite for an algorithm
        counts as diverged for it.  With the default ``None`` such trials
        are excluded from that algorithm's average; with a cap they are
        included, clipped to the cap.
    progress : callable, optional
        Called as ``progress(done, total)`` after each aggregated trial.

    Returns
    -------
    ExperimentResult
        One :class:`MsdSeries` per configured algorithm (in configuration
        order) plus per-algorithm diverged-trial counts.
    """
    if parallelism < 1:
        raise ValueError(f"parallelism must be >= 1, got {parallelism}")
    if divergence_cap is not None and not divergence_cap > 0:
        raise ValueError(f"divergence_cap must be positive, got {divergence_cap}")
    started = time.perf_counter()
    trials = config.trials
    iterations = config.trajectory.total_iterations
    labels = [params.name for params in config.algorithms]
    sums = {label: np.zeros(iterations) for label in labels}
    included = {label: 0 for label in labels}
    diverged = {label: 0 for label in labels}

    def accumulate(per_label: dict[str, np.ndarray], done: int) -> None:
        for label in labels:
            sqdev = per_label[label]
            finite = np.isfinite(sqdev)
            if not finite.all():
                diverged[label] += 1
                if divergence_cap is None:
                    continue
                sqdev = np.where(finite, np.minimum(sqdev, divergence_cap),
                                 divergence_cap)
            elif divergence_cap is not None:
                sqdev = np.minimum(sqdev, divergence_cap)
            sums[label] += sqdev
            included[label] += 1
        if progress is not None:
            progress(done, trials)

    if parallelism == 1:
        for k in range(trials):
            accumulate(_trial_squared_deviation(config, master_seed, k), k + 1)
    else:
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            futures = [
                pool.submit(_trial_squared_deviation, config, master_seed, k)
                for k in range(trials)
            ]
            # Consume strictly in trial order: float sums stay identical
            # no matter which worker finishes first.
            for k, future in enumerate(futures):
                accumulate(future.result(), k + 1)
                futures[k] = None

    series = {}
    for label in labels:
        if included[label] > 0:
            values = sums[label] / included[label]
        else:
            values = np.full(iterations, np.nan)
        series[label] = MsdSeries(algorithm=label, values=values,
                                  trials=included[label])
    return ExperimentResult(
        config=config,
        master_seed=master_seed,
        series=series,
        diverged=diverged,
        wall_time_s=time.perf_counter() - started,
    )
