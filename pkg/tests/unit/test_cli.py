"""Tests for the command-line front end."""

import json
from pathlib import Path

import pytest

from services.cli.app import EXIT_CHECK_FAILED, EXIT_CONFIG, EXIT_OK, EXIT_RUNTIME, load_experiment_config, main
from services.harness.results_csv import RESULT_COLUMNS
from services.search.export import FIXATION_COLUMNS
from shared.errors import CalibrationError, ConfigurationError
from shared.types import GazeParams


@pytest.fixture
def small_config(tmp_path: Path, params: GazeParams) -> Path:
    path = tmp_path / "small.json"
    document = {
        "inset_grid": [[10, 10], [40, 40]],
        "trials_per_condition": 20,
        "master_seed": 5,
        "params": params.model_dump(mode="json"),
        "protocol": {"slip_probability": 0.0},
    }
    path.write_text(json.dumps(document), encoding="utf-8")
    return path


class TestAdvise:
    """Tests for the advise subcommand."""

    @pytest.mark.unit
    def test_default_display(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["advise"]) == EXIT_OK

        out = capsys.readouterr().out
        assert "recommended minimum inset: 30 x 30 deg" in out
        assert "degraded area fraction: 79.53%" in out
        assert "resolution: inset 21.72 arcmin/px, periphery 107.57 arcmin/px" in out

    @pytest.mark.unit
    def test_cave_example(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["advise", "--example", "cave"]) == EXIT_OK

        assert "inset area fraction: 1.23%" in capsys.readouterr().out

    @pytest.mark.unit
    def test_narrow_display_warns(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["advise", "--hfov", "25", "--vfov", "58.4"]) == EXIT_OK

        captured = capsys.readouterr()
        assert "recommended minimum inset: 25 x 30 deg" in captured.out
        assert "warning: horizontal field of view 25 deg is below the 30 deg rule" in captured.err

    @pytest.mark.unit
    def test_json_output(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["advise", "--json", "--rule-deg", "20"]) == EXIT_OK

        report = json.loads(capsys.readouterr().out)
        assert report["inset"]["h_extent_deg"] == 20
        assert report["effective_extent_deg"] == [16.0, 16.0]
        assert report["feature_resolvable_in_inset"] is True

    @pytest.mark.unit
    def test_invalid_display(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["advise", "--hpx", "0"]) == EXIT_CONFIG
        assert "config error" in capsys.readouterr().err


class TestSimulate:
    """Tests for the simulate subcommand."""

    @pytest.mark.unit
    def test_fixation_log(self, small_config: Path, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["simulate", "--config", str(small_config), "--trial-seed", "5", "--h-extent", "20"]) == EXIT_OK

        captured = capsys.readouterr()
        assert captured.out.splitlines()[0] == ",".join(FIXATION_COLUMNS)
        assert "20x20: search time" in captured.err
        assert "trial seed 5" in captured.err

    @pytest.mark.unit
    def test_saved_trial_replays_identically(
        self, small_config: Path, tmp_path: Path, capsys: pytest.CaptureFixture[str]
    ) -> None:
        trial_file = tmp_path / "trial.json"
        base = ["simulate", "--config", str(small_config), "--h-extent", "20", "--json"]

        assert main([*base, "--trial-seed", "11", "--save-trial", str(trial_file)]) == EXIT_OK
        generated = json.loads(capsys.readouterr().out)
        assert main([*base, "--trial-file", str(trial_file)]) == EXIT_OK
        replayed = json.loads(capsys.readouterr().out)

        assert json.loads(trial_file.read_text(encoding="utf-8"))[0]["seed"] == 11
        assert replayed == generated
        assert generated[0]["search_time_s"] > 0

    @pytest.mark.unit
    def test_missing_trial_file(self, small_config: Path, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        missing = tmp_path / "none.json"

        assert main(["simulate", "--config", str(small_config), "--trial-file", str(missing)]) == EXIT_CONFIG
        assert "trial file not found" in capsys.readouterr().err


class TestRun:
    """Tests for the run subcommand."""

    @pytest.mark.unit
    def test_run_is_reproducible(self, small_config: Path, tmp_path: Path) -> None:
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"

        assert main(["run", "--config", str(small_config), "--out", str(first)]) == EXIT_OK
        assert main(["run", "--config", str(small_config), "--out", str(second)]) == EXIT_OK

        assert first.read_bytes() == second.read_bytes()
        lines = first.read_text(encoding="utf-8").splitlines()
        assert lines[0] == ",".join(RESULT_COLUMNS)
        assert len(lines) == 4

    @pytest.mark.unit
    def test_threads_do_not_change_output(self, small_config: Path, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["--threads", "1", "run", "--config", str(small_config)]) == EXIT_OK
        serial = capsys.readouterr().out
        assert main(["--threads", "8", "run", "--config", str(small_config)]) == EXIT_OK

        assert capsys.readouterr().out == serial

    @pytest.mark.unit
    def test_runtime_flags_after_subcommand(self, small_config: Path, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["--threads", "2", "run", "--config", str(small_config)]) == EXIT_OK
        before = capsys.readouterr().out
        assert main(["run", "--config", str(small_config), "--threads", "2", "-v"]) == EXIT_OK

        assert capsys.readouterr().out == before
        assert main(["run", "--config", str(small_config), "--threads", "0"]) == EXIT_CONFIG

    @pytest.mark.unit
    def test_summary_relative_to_baseline(self, small_config: Path, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["run", "--config", str(small_config)]) == EXIT_OK

        err = capsys.readouterr().err.splitlines()
        assert err[0].startswith("10x10: mean ")
        assert err[0].endswith("s vs undegraded)")
        assert err[-1].startswith("undegraded: mean ")

    @pytest.mark.unit
    def test_seed_flag_overrides_config(self, small_config: Path, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["run", "--config", str(small_config)]) == EXIT_OK
        configured = capsys.readouterr().out
        assert main(["run", "--config", str(small_config), "--seed", "6"]) == EXIT_OK

        assert capsys.readouterr().out != configured

    @pytest.mark.unit
    def test_check_needs_full_grid(self, small_config: Path, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["run", "--config", str(small_config), "--check"]) == EXIT_CONFIG
        assert "missing cells" in capsys.readouterr().err

    @pytest.mark.unit
    def test_check_flat_model_fails(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        """Kinematics with a head as fast as it can be leave no inset-size effect to find."""
        path = tmp_path / "flat.json"
        flat = {"eye_latency_s": 0.2, "eye_velocity_dps": 700.0, "head_velocity_dps": 699.0, "dwell_s": 0.5}
        path.write_text(json.dumps({"trials_per_condition": 20, "params": flat}), encoding="utf-8")

        assert main(["run", "--config", str(path), "--check"]) == EXIT_CHECK_FAILED
        assert "horizontal 10 slower=False" in capsys.readouterr().err

    @pytest.mark.unit
    def test_missing_config(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["run", "--config", str(tmp_path / "nope.json")]) == EXIT_CONFIG
        assert "config file not found" in capsys.readouterr().err

    @pytest.mark.unit
    def test_invalid_threads(self, small_config: Path) -> None:
        assert main(["--threads", "0", "run", "--config", str(small_config)]) == EXIT_CONFIG


class TestCalibrate:
    """Tests for the calibrate subcommand."""

    @pytest.mark.unit
    def test_writes_parameter_file(
        self, small_config: Path, tmp_path: Path, capsys: pytest.CaptureFixture[str]
    ) -> None:
        out = tmp_path / "gaze.json"

        assert main(["calibrate", "--config", str(small_config), "--trials", "300", "--out", str(out)]) == EXIT_OK

        document = json.loads(out.read_text(encoding="utf-8"))
        assert set(document) == {"params", "provenance"}
        assert "undegraded: simulated" in capsys.readouterr().err

    @pytest.mark.unit
    def test_failure_prints_diagnostics(
        self, small_config: Path, monkeypatch: pytest.MonkeyPatch, capsys: pytest.CaptureFixture[str]
    ) -> None:
        def failing_fit(*_args: object, **_kwargs: object) -> None:
            raise CalibrationError("calibration RMS error 0.400 s exceeds 0.250 s", diagnostics={"rms_s": 0.4})

        monkeypatch.setattr("services.cli.app.calibrate", failing_fit)

        assert main(["calibrate", "--config", str(small_config)]) == EXIT_RUNTIME
        lines = capsys.readouterr().err.splitlines()
        start = lines.index("error: calibration RMS error 0.400 s exceeds 0.250 s")
        assert json.loads("\n".join(lines[start + 1 :])) == {"rms_s": 0.4}


class TestLoadExperimentConfig:
    """Tests for config document parsing."""

    @pytest.mark.unit
    def test_defaults_without_path(self) -> None:
        config = load_experiment_config(None)

        assert config.trials_per_condition == 1000
        assert len(config.inset_grid) == 16

    @pytest.mark.unit
    def test_shipped_default(self) -> None:
        config = load_experiment_config(Path(__file__).parents[2] / "config" / "default.json")

        assert config.master_seed == 42
        assert config.protocol.n_objects == 5

    @pytest.mark.unit
    def test_malformed_json_reports_location(self, tmp_path: Path) -> None:
        path = tmp_path / "broken.json"
        path.write_text('{\n  "trials_per_condition": ,\n}', encoding="utf-8")

        with pytest.raises(ConfigurationError, match=r"broken\.json:2:\d+: malformed JSON"):
            load_experiment_config(path)

    @pytest.mark.unit
    def test_unknown_field_reports_location(self, tmp_path: Path) -> None:
        path = tmp_path / "unknown.json"
        path.write_text('{"protocol": {"n_objects": 5, "colour": "red"}}', encoding="utf-8")

        with pytest.raises(ConfigurationError, match=r"protocol\.colour"):
            load_experiment_config(path)
