"""Command-line front end: JSON-configured Monte-Carlo runs, CSV curves
and a per-phase summary report.

The run configuration is a strict JSON document (unknown keys are
rejected).  Either start from a stock scenario and override parts of it::

    {"scenario": "example2", "trials": 100}

or describe everything explicitly with the ``system``, ``input``,
``noise`` and ``algorithms`` keys.  Command-line flags override file
values.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .filters import FilterParams
from .harness import ExperimentResult, run_experiment
from .metrics import to_db
from .noise import GsnrSpec, NoiseParams, calibrate_scale
from .scenarios import (
    Example,
    Phase,
    ScenarioConfig,
    SystemTrajectory,
    default_filter_params,
    make_example,
    phase_index_at,
    phase_segments,
)
from .signals import InputKind, InputSpec

__all__ = ["ConfigError", "RunOptions", "parse_config", "emit_csv", "summarize", "main"]

CSV_HEADER = ["iteration", "algorithm", "msd_linear", "msd_db", "phase_index"]


class ConfigError(ValueError):
    """A run configuration that cannot be used."""


@dataclass
class RunOptions:
    """Execution knobs that ride along with the scenario itself."""

    master_seed: int = 0
    parallelism: int = 1
    out_dir: Path | None = None
    divergence_cap: float | None = None


_TOP_KEYS = {
    "scenario", "trials", "master_seed", "parallelism", "out_dir",
    "divergence_cap", "input", "noise", "system", "algorithms",
}
_INPUT_KEYS = {"kind", "variance", "ar_coefficient"}
_NOISE_KEYS = {"alpha", "beta", "location", "scale", "gsnr_db", "signal_power"}
_SYSTEM_KEYS = {"taps", "total_iterations", "phases"}
_PHASE_KEYS = {"start", "coefficients"}
_ALGORITHM_KEYS = {"algorithm", "mu", "rho", "epsilon", "label"}


def _reject_unknown(mapping: dict, allowed: set, where: str) -> None:
    unknown = sorted(set(mapping) - allowed)
    if unknown:
        raise ConfigError(f"unknown key(s) {unknown} in {where}")


def _require(mapping: dict, key: str, where: str):
    if key not in mapping:
        raise ConfigError(f"missing required key '{key}' in {where}")
    return mapping[key]


def _build_input(raw: dict) -> InputSpec:
    _reject_unknown(raw, _INPUT_KEYS, "input")
    try:
        return InputSpec(
            kind=InputKind(_require(raw, "kind", "input")),
            variance=raw.get("variance", 1.0),
            ar_coefficient=raw.get("ar_coefficient", 0.0),
        )
    except ValueError as exc:
        raise ConfigError(f"input: {exc}") from None


def _build_noise(raw: dict, input_spec: InputSpec) -> NoiseParams:
    _reject_unknown(raw, _NOISE_KEYS, "noise")
    if "scale" in raw and "gsnr_db" in raw:
        raise ConfigError("noise: give either 'scale' or 'gsnr_db', not both")
    try:
        alpha = _require(raw, "alpha", "noise")
        if "gsnr_db" in raw:
            spec = GsnrSpec(
                gsnr_db=raw["gsnr_db"],
                signal_power=raw.get("signal_power", input_spec.stationary_power),
            )
            scale = calibrate_scale(spec, alpha)
        elif "scale" in raw:
            if "signal_power" in raw:
                raise ConfigError("noise: 'signal_power' only applies with 'gsnr_db'")
            scale = raw["scale"]
        else:
            raise ConfigError("noise: one of 'scale' or 'gsnr_db' is required")
        return NoiseParams(
            alpha=alpha,
            beta=raw.get("beta", 0.0),
            location=raw.get("location", 0.0),
            scale=scale,
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"noise: {exc}") from None


def _build_system(raw: dict) -> SystemTrajectory:
    _reject_unknown(raw, _SYSTEM_KEYS, "system")
    phases_raw = _require(raw, "phases", "system")
    if not isinstance(phases_raw, list) or not phases_raw:
        raise ConfigError("system.phases must be a non-empty list")
    phases = []
    for i, entry in enumerate(phases_raw):
        _reject_unknown(entry, _PHASE_KEYS, f"system.phases[{i}]")
        phases.append(Phase(
            start_iteration=_require(entry, "start", f"system.phases[{i}]"),
            coefficients=_require(entry, "coefficients", f"system.phases[{i}]"),
        ))
    try:
        return SystemTrajectory(
            num_taps=_require(raw, "taps", "system"),
            phases=tuple(phases),
            total_iterations=_require(raw, "total_iterations", "system"),
        )
    except ValueError as exc:
        raise ConfigError(f"system: {exc}") from None


def _build_algorithms(raw: list) -> tuple[FilterParams, ...]:
    if not isinstance(raw, list) or not raw:
        raise ConfigError("algorithms must be a non-empty list")
    params = []
    for i, entry in enumerate(raw):
        where = f"algorithms[{i}]"
        _reject_unknown(entry, _ALGORITHM_KEYS, where)
        overrides = {k: v for k, v in entry.items() if k != "algorithm"}
        try:
            params.append(default_filter_params(
                _require(entry, "algorithm", where), **overrides
            ))
        except ValueError as exc:
            raise ConfigError(f"{where}: {exc}") from None
    return tuple(params)


def _resolve(raw: dict) -> tuple[ScenarioConfig, RunOptions]:
    if not isinstance(raw, dict):
        raise ConfigError("the run configuration must be a JSON object")
    _reject_unknown(raw, _TOP_KEYS, "the run configuration")

    base = None
    if "scenario" in raw:
        try:
            base = make_example(Example(raw["scenario"]))
        except ValueError:
            names = ", ".join(e.value for e in Example)
            raise ConfigError(
                f"scenario must be one of {names}, got {raw['scenario']!r}"
            ) from None

    if "input" in raw:
        input_spec = _build_input(raw["input"])
    elif base is not None:
        input_spec = base.input_spec
    else:
        raise ConfigError("missing required key 'input' (or a 'scenario' to default from)")

    if "noise" in raw:
        noise = _build_noise(raw["noise"], input_spec)
    elif base is not None:
        noise = base.noise
    else:
        raise ConfigError("missing required key 'noise' (or a 'scenario' to default from)")

    if "system" in raw:
        trajectory = _build_system(raw["system"])
    elif base is not None:
        trajectory = base.trajectory
    else:
        raise ConfigError("missing required key 'system' (or a 'scenario' to default from)")

    if "algorithms" in raw:
        algorithms = _build_algorithms(raw["algorithms"])
    elif base is not None:
        algorithms = base.algorithms
    else:
        raise ConfigError("missing required key 'algorithms' (or a 'scenario' to default from)")

    trials = raw.get("trials", base.trials if base is not None else 500)
    try:
        config = ScenarioConfig(
            name=base.name if base is not None else "custom",
            trajectory=trajectory,
            input_spec=input_spec,
            noise=noise,
            algorithms=algorithms,
            trials=trials,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    options = RunOptions()
    if "master_seed" in raw:
        seed = raw["master_seed"]
        if not isinstance(seed, int) or not 0 <= seed < 2**64:
            raise ConfigError(f"master_seed must be a 64-bit unsigned integer, got {seed}")
        options.master_seed = seed
    if "parallelism" in raw:
        workers = raw["parallelism"]
        if not isinstance(workers, int) or workers < 1:
            raise ConfigError(f"parallelism must be an integer >= 1, got {workers}")
        options.parallelism = workers
    if "out_dir" in raw:
        options.out_dir = Path(raw["out_dir"])
    if "divergence_cap" in raw and raw["divergence_cap"] is not None:
        cap = raw["divergence_cap"]
        if not isinstance(cap, (int, float)) or not cap > 0:
            raise ConfigError(f"divergence_cap must be positive, got {cap}")
        options.divergence_cap = float(cap)
    return config, options


def parse_config(source: str | Path) -> tuple[ScenarioConfig, RunOptions]:
    """Load and validate a run configuration.

    ``source`` may be a path to a JSON file, or the JSON text itself
    (recognized by a leading '{').
    """
    if isinstance(source, Path) or not source.lstrip().startswith("{"):
        try:
            text = Path(source).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from None
    else:
        text = source
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from None
    return _resolve(raw)


def config_to_dict(config: ScenarioConfig, options: RunOptions) -> dict:
    """Serialize a resolved configuration back to the JSON schema, with
    the noise scale made explicit so the run can be repeated exactly.
    """
    out = {
        "scenario": config.name if config.name != "custom" else None,
        "trials": config.trials,
        "master_seed": options.master_seed,
        "parallelism": options.parallelism,
        "divergence_cap": options.divergence_cap,
        "input": {
            "kind": config.input_spec.kind.value,
            "variance": config.input_spec.variance,
            "ar_coefficient": config.input_spec.ar_coefficient,
        },
        "noise": {
            "alpha": config.noise.alpha,
            "beta": config.noise.beta,
            "location": config.noise.location,
            "scale": config.noise.scale,
        },
        "system": {
            "taps": config.trajectory.num_taps,
            "total_iterations": config.trajectory.total_iterations,
            "phases": [
                {"start": p.start_iteration, "coefficients": p.coefficients.tolist()}
                for p in config.trajectory.phases
            ],
        },
        "algorithms": [
            {
                "algorithm": p.algorithm.value,
                "mu": p.mu,
                "rho": p.rho,
                "epsilon": p.epsilon,
            } | ({"label": p.label} if p.label is not None else {})
            for p in config.algorithms
        ],
    }
    if out["scenario"] is None:
        del out["scenario"]
    if options.out_dir is not None:
        out["out_dir"] = str(options.out_dir)
    return out


def _format_value(value: float) -> str:
    # 17 significant digits round-trips any float64; infinities come out
    # as the literals 'inf'/'-inf'.
    return format(value, ".17g")


def emit_csv(result: ExperimentResult, path: str | Path) -> None:
    """Write the averaged curves as CSV rows sorted by (algorithm, iteration).

    Columns: iteration, algorithm, msd_linear, msd_db, phase_index.
    A zero MSD yields the literal ``-inf`` in the dB column.
    """
    trajectory = result.config.trajectory
    phase_of = np.array([
        phase_index_at(trajectory, n) for n in range(trajectory.total_iterations)
    ])
    try:
        with open(path, "w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(CSV_HEADER)
            for label in sorted(result.series):
                series = result.series[label]
                values_db = to_db(series.values)
                for n in range(series.values.shape[0]):
                    writer.writerow([
                        n,
                        label,
                        _format_value(series.values[n]),
                        _format_value(values_db[n]),
                        phase_of[n],
                    ])
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc}") from exc


def _steady_window(lo: int, hi: int) -> tuple[int, int]:
    # Final tenth of the phase, at least one iteration.
    length = max(1, (hi - lo) // 10)
    return hi - length, hi


def summarize(result: ExperimentResult) -> str:
    """Per-phase, per-algorithm steady-state report.

    Steady state is taken as the mean linear MSD over the final 10% of
    each phase, reported in dB together with the diverged-trial count and
    an ordering of the algorithms from best to worst.
    """
    config = result.config
    lines = [
        f"experiment {config.name}: {config.trials} trials, master seed "
        f"{result.master_seed}, wall time {result.wall_time_s:.2f} s"
    ]
    for k, (segment, _) in enumerate(phase_segments(config.trajectory)):
        lo, hi = segment.start, segment.stop
        ss_lo, ss_hi = _steady_window(lo, hi)
        lines.append(f"phase {k} [{lo}, {hi}), steady-state window [{ss_lo}, {ss_hi}):")
        steady = {}
        for label, series in result.series.items():
            mean_linear = float(series.values[ss_lo:ss_hi].mean())
            steady[label] = mean_linear
            mean_db = float(to_db(mean_linear))
            lines.append(
                f"  {label:<12} msd {mean_db:>8.2f} dB ({mean_linear:.6e})"
                f"  diverged {result.diverged[label]}/{config.trials}"
            )
        ordering = sorted(steady, key=lambda lab: steady[lab])
        lines.append(
            "  ordering: "
            + " < ".join(f"{lab} ({float(to_db(steady[lab])):.2f} dB)" for lab in ordering)
        )
    return "\n".join(lines) + "\n"


def _progress_printer(stream):
    def report(done: int, total: int) -> None:
        step = max(1, total // 10)
        if done % step == 0 or done == total:
            print(f"trials {done}/{total}", file=stream)

    return report


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="zafilt",
        description="Run a sparse-adaptive-filter identification experiment "
                    "and write MSD-vs-iteration curves as CSV.",
    )
    parser.add_argument("--config", type=Path, help="JSON run configuration")
    parser.add_argument("--scenario", choices=[e.value for e in Example],
                        help="stock experiment to run (overrides the file value)")
    parser.add_argument("--seed", type=int, help="64-bit master seed")
    parser.add_argument("--trials", type=int, help="number of independent trials")
    parser.add_argument("--parallelism", type=int, help="worker processes")
    parser.add_argument("--out", type=Path, help="output directory")
    args = parser.parse_args(argv)

    try:
        if args.config is not None:
            raw = json.loads(args.config.read_text(encoding="utf-8"))
            if not isinstance(raw, dict):
                raise ConfigError("the run configuration must be a JSON object")
        else:
            raw = {}
        if args.scenario is not None:
            raw["scenario"] = args.scenario
        if args.seed is not None:
            raw["master_seed"] = args.seed
        if args.trials is not None:
            raw["trials"] = args.trials
        if args.parallelism is not None:
            raw["parallelism"] = args.parallelism
        if args.out is not None:
            raw["out_dir"] = str(args.out)
        if not raw:
            parser.error("give --config and/or --scenario")
        config, options = _resolve(raw)
        if options.out_dir is None:
            raise ConfigError("an output directory is required (--out or 'out_dir')")
    except json.JSONDecodeError as exc:
        print(f"error: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}",
              file=sys.stderr)
        return 2
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    result = run_experiment(
        config,
        options.master_seed,
        parallelism=options.parallelism,
        divergence_cap=options.divergence_cap,
        progress=_progress_printer(sys.stderr),
    )
    report = summarize(result)
    try:
        options.out_dir.mkdir(parents=True, exist_ok=True)
        emit_csv(result, options.out_dir / "msd.csv")
        (options.out_dir / "summary.txt").write_text(report, encoding="utf-8")
        echo = config_to_dict(config, options)
        (options.out_dir / "config.json").write_text(
            json.dumps(echo, indent=2) + "\n", encoding="utf-8"
        )
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(report, end="")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
