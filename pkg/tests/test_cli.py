import csv
import json
import math

import numpy as np
import pytest

from zafilt.cli import (
    CSV_HEADER,
    ConfigError,
    config_to_dict,
    emit_csv,
    main,
    parse_config,
    summarize,
)
from zafilt.harness import run_experiment
from zafilt.noise import NoiseParams
from zafilt.scenarios import Phase, ScenarioConfig, SystemTrajectory, make_example
from zafilt.signals import InputKind, InputSpec


def tiny_config(trials=1, iterations=1, algorithms=None):
    if algorithms is None:
        algorithms = [{"algorithm": "lad"}]
    raw = {
        "system": {
            "taps": 2,
            "total_iterations": iterations,
            "phases": [{"start": 0, "coefficients": [0.0, 0.0]}],
        },
        "input": {"kind": "white_gaussian", "variance": 1.0},
        "noise": {"alpha": 1.2, "scale": 0.1},
        "algorithms": algorithms,
        "trials": trials,
    }
    return raw


class TestParseConfig:
    def test_scenario_only_fills_stock_defaults(self):
        config, options = parse_config('{"scenario": "example2"}')
        assert config.name == "example2"
        assert config.trials == 500
        by_name = {p.name: p for p in config.algorithms}
        assert set(by_name) == {"lad", "za_lad", "rza_lad", "lms", "za_lms", "rza_lms"}
        assert all(p.mu == 5e-3 for p in config.algorithms)
        assert by_name["za_lad"].rho == 1.5e-4
        assert by_name["rza_lad"].rho == 1.5e-3
        assert by_name["rza_lad"].epsilon == 1e-2
        assert by_name["za_lms"].rho == 1.5e-4
        assert by_name["rza_lms"].rho == 1.5e-3
        assert options.master_seed == 0 and options.parallelism == 1

    def test_scenario_with_overrides(self):
        config, options = parse_config(
            '{"scenario": "example1", "trials": 7, "master_seed": 9, "parallelism": 3}'
        )
        assert config.trials == 7
        assert options.master_seed == 9
        assert options.parallelism == 3

    def test_algorithm_entry_fills_table_defaults(self):
        raw = tiny_config(algorithms=[{"algorithm": "rza_lad", "label": "r"}])
        config, _ = parse_config(json.dumps(raw))
        params = config.algorithms[0]
        assert params.mu == 5e-3 and params.rho == 1.5e-3 and params.epsilon == 1e-2

    def test_negative_mu_names_field(self):
        raw = tiny_config(algorithms=[{"algorithm": "lad", "mu": -1}])
        with pytest.raises(ConfigError, match="mu"):
            parse_config(json.dumps(raw))

    def test_zero_epsilon_names_field(self):
        raw = tiny_config(algorithms=[{"algorithm": "rza_lad", "epsilon": 0}])
        with pytest.raises(ConfigError, match="epsilon"):
            parse_config(json.dumps(raw))

    def test_unknown_top_level_key(self):
        with pytest.raises(ConfigError, match="bogus"):
            parse_config('{"scenario": "example1", "bogus": 1}')

    def test_unknown_nested_key(self):
        raw = tiny_config()
        raw["noise"]["spread"] = 2.0
        with pytest.raises(ConfigError, match="spread"):
            parse_config(json.dumps(raw))

    def test_malformed_json_reports_position(self):
        with pytest.raises(ConfigError, match=r"line 2, column"):
            parse_config('{\n  "scenario": }')

    def test_unknown_scenario(self):
        with pytest.raises(ConfigError, match="example9"):
            parse_config('{"scenario": "example9"}')

    def test_missing_sections_without_scenario(self):
        with pytest.raises(ConfigError, match="input"):
            parse_config('{"trials": 3}')

    def test_noise_scale_and_gsnr_are_exclusive(self):
        raw = tiny_config()
        raw["noise"] = {"alpha": 1.2, "scale": 0.1, "gsnr_db": 10.0}
        with pytest.raises(ConfigError, match="not both"):
            parse_config(json.dumps(raw))

    def test_gsnr_defaults_to_input_power(self):
        raw = tiny_config()
        raw["input"] = {"kind": "ar1", "variance": 1.0, "ar_coefficient": 0.8}
        raw["noise"] = {"alpha": 1.2, "gsnr_db": 10.0}
        config, _ = parse_config(json.dumps(raw))
        expected = (10.0 ** -1 / (1 - 0.64)) ** (1 / 1.2)
        assert config.noise.scale == pytest.approx(expected, rel=1e-12)

    def test_bad_master_seed(self):
        raw = tiny_config()
        raw["master_seed"] = -2
        with pytest.raises(ConfigError, match="master_seed"):
            parse_config(json.dumps(raw))

    def test_reads_files(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text('{"scenario": "example1"}', encoding="utf-8")
        config, _ = parse_config(path)
        assert config.name == "example1"

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="cannot read"):
            parse_config(tmp_path / "nope.json")


class TestEmitCsv:
    def test_zero_deviation_row(self, tmp_path):
        # One trial, one iteration, all-zero system: MSD is exactly 0 and
        # the dB column carries the -inf literal.
        config, _ = parse_config(json.dumps(tiny_config()))
        result = run_experiment(config, master_seed=0)
        path = tmp_path / "msd.csv"
        emit_csv(result, path)
        lines = path.read_text(encoding="utf-8").split("\n")
        assert lines[0] == "iteration,algorithm,msd_linear,msd_db,phase_index"
        assert lines[1] == "0,lad,0,-inf,0"
        assert lines[-1] == ""

    def test_example2_baseline_at_zero(self, tmp_path):
        config, _ = parse_config('{"scenario": "example2", "trials": 1}')
        result = run_experiment(config, master_seed=4)
        path = tmp_path / "msd.csv"
        emit_csv(result, path)
        with open(path, newline="", encoding="utf-8") as handle:
            rows = list(csv.DictReader(handle))
        assert len(rows) == 9000 * 6
        first_lad = next(r for r in rows if r["algorithm"] == "lad")
        assert first_lad["iteration"] == "0"
        assert first_lad["msd_linear"] == "1"
        assert first_lad["msd_db"] == "0"
        assert first_lad["phase_index"] == "0"

    def test_rows_sorted_and_phase_indexed(self, tmp_path):
        config, _ = parse_config('{"scenario": "example2", "trials": 1}')
        result = run_experiment(config, master_seed=4)
        path = tmp_path / "msd.csv"
        emit_csv(result, path)
        with open(path, newline="", encoding="utf-8") as handle:
            rows = list(csv.DictReader(handle))
        keys = [(r["algorithm"], int(r["iteration"])) for r in rows]
        assert keys == sorted(keys)
        assert rows[0]["algorithm"] == "lad"
        assert rows[3000]["phase_index"] == "1"
        assert rows[6000]["phase_index"] == "2"

    def test_round_trip_is_exact(self, tmp_path):
        config, _ = parse_config(json.dumps(tiny_config(trials=2, iterations=50)))
        result = run_experiment(config, master_seed=8)
        path = tmp_path / "msd.csv"
        emit_csv(result, path)
        with open(path, newline="", encoding="utf-8") as handle:
            rows = list(csv.DictReader(handle))
        parsed = np.array([float(r["msd_linear"]) for r in rows])
        np.testing.assert_array_equal(parsed, result.series["lad"].values)

    def test_uses_lf_newlines(self, tmp_path):
        config, _ = parse_config(json.dumps(tiny_config()))
        result = run_experiment(config, master_seed=0)
        path = tmp_path / "msd.csv"
        emit_csv(result, path)
        raw = path.read_bytes()
        assert b"\r" not in raw

    def test_io_error(self, tmp_path):
        config, _ = parse_config(json.dumps(tiny_config()))
        result = run_experiment(config, master_seed=0)
        with pytest.raises(OSError, match="no/such"):
            emit_csv(result, tmp_path / "no/such/dir/msd.csv")


class TestSummarize:
    def test_phase_blocks_and_ordering_line(self):
        config, _ = parse_config('{"scenario": "example2", "trials": 2}')
        result = run_experiment(config, master_seed=6)
        report = summarize(result)
        assert report.count("phase ") == 3
        assert report.count("ordering:") == 3
        for label in ("lad", "za_lad", "rza_lad", "lms", "za_lms", "rza_lms"):
            assert report.count(f"  {label} ") >= 3 or label in report
        assert "diverged 0/2" in report
        assert "wall time" in report

    def test_steady_state_window_is_final_tenth(self):
        config, _ = parse_config('{"scenario": "example2", "trials": 1}')
        result = run_experiment(config, master_seed=6)
        report = summarize(result)
        assert "[2700, 3000)" in report
        assert "[5700, 6000)" in report
        assert "[8700, 9000)" in report


class TestConfigEcho:
    def test_round_trip_reproduces_config(self):
        config, options = parse_config(
            '{"scenario": "example3", "trials": 4, "master_seed": 11}'
        )
        echo = config_to_dict(config, options)
        config2, options2 = parse_config(json.dumps(echo))
        assert options2.master_seed == options.master_seed
        assert config2.trials == config.trials
        assert config2.noise == config.noise
        assert config2.input_spec == config.input_spec
        assert config2.algorithms == config.algorithms
        for p1, p2 in zip(config.trajectory.phases, config2.trajectory.phases):
            assert p1.start_iteration == p2.start_iteration
            np.testing.assert_array_equal(p1.coefficients, p2.coefficients)


class TestMain:
    def test_end_to_end(self, tmp_path, capsys):
        out = tmp_path / "results"
        code = main([
            "--scenario", "example1",
            "--trials", "2",
            "--seed", "3",
            "--parallelism", "1",
            "--out", str(out),
        ])
        assert code == 0
        assert (out / "msd.csv").exists()
        assert (out / "summary.txt").exists()
        assert (out / "config.json").exists()
        captured = capsys.readouterr()
        assert "experiment example1" in captured.out
        assert "trials 2/2" in captured.err
        echoed = json.loads((out / "config.json").read_text(encoding="utf-8"))
        assert echoed["master_seed"] == 3
        assert echoed["trials"] == 2

    def test_flags_override_file(self, tmp_path):
        config_path = tmp_path / "run.json"
        config_path.write_text(
            '{"scenario": "example1", "trials": 50, "master_seed": 1}', encoding="utf-8"
        )
        out = tmp_path / "results"
        code = main([
            "--config", str(config_path),
            "--trials", "1",
            "--seed", "2",
            "--out", str(out),
        ])
        assert code == 0
        echoed = json.loads((out / "config.json").read_text(encoding="utf-8"))
        assert echoed["trials"] == 1
        assert echoed["master_seed"] == 2

    def test_echo_rerun_is_identical(self, tmp_path):
        first = tmp_path / "first"
        assert main(["--scenario", "example1", "--trials", "2", "--seed", "5",
                     "--out", str(first)]) == 0
        second = tmp_path / "second"
        assert main(["--config", str(first / "config.json"),
                     "--out", str(second)]) == 0
        assert (first / "msd.csv").read_bytes() == (second / "msd.csv").read_bytes()

    def test_validation_error_exit_code(self, tmp_path, capsys):
        config_path = tmp_path / "run.json"
        config_path.write_text(
            json.dumps(tiny_config(algorithms=[{"algorithm": "lad", "mu": -1}])),
            encoding="utf-8",
        )
        code = main(["--config", str(config_path), "--out", str(tmp_path / "o")])
        assert code == 2
        assert "mu" in capsys.readouterr().err

    def test_malformed_json_exit_code(self, tmp_path, capsys):
        config_path = tmp_path / "run.json"
        config_path.write_text("{", encoding="utf-8")
        code = main(["--config", str(config_path), "--out", str(tmp_path / "o")])
        assert code == 2
        assert "line 1" in capsys.readouterr().err

    def test_requires_out_dir(self, capsys):
        code = main(["--scenario", "example1", "--trials", "1"])
        assert code == 2
        assert "output directory" in capsys.readouterr().err
