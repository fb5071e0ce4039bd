"""Command-line front end.

Subcommands: ``advise``, ``simulate``, ``run`` and ``calibrate``. Results go to
``--out`` or stdout; diagnostics and logs go to stderr.

Exit codes: 0 success, 1 pattern check failed, 2 configuration error,
3 runtime error.
"""

import argparse
import json
import logging
import sys
from collections.abc import Iterator, Sequence
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path
from typing import TextIO

from pydantic import ValidationError

from services.cli.advise import PRESETS, build_design_report, format_report
from services.harness.calibration import calibrate
from services.harness.experiment import (
    condition_label,
    fixation_orders_consistent,
    resolve_master_seed,
    resolve_params,
    run_conditions,
    summarize,
)
from services.harness.pattern import check_pattern
from services.harness.reference import REFERENCE
from services.harness.results_csv import write_results_csv
from services.search.export import results_to_json, trials_from_json, trials_to_json, write_fixations_csv
from services.search.simulator import simulate_trial
from services.search.trials import derive_trial_seed, generate_trial
from shared.config import get_settings
from shared.errors import CalibrationError, ConfigurationError, PerilodError
from shared.logging import setup_logging
from shared.types import FLIGHT_HELMET, CalibrationResult, ConditionStats, DisplaySpec, ExperimentConfig

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 2
EXIT_RUNTIME = 3

DEFAULT_CALIBRATION_OUT = Path("gaze_params.json")


@dataclass(frozen=True)
class CliConfig:
    """Options shared by every subcommand."""

    subcommand: str
    config_path: Path | None
    seed: int | None
    out: Path | None
    verbosity: int
    threads: int


def load_experiment_config(path: Path | None) -> ExperimentConfig:
    """Parse a config document, or return built-in defaults when no path is given.

    Raises:
        ConfigurationError: With line/column or field diagnostics
    """
    if path is None:
        return ExperimentConfig()
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError as e:
        raise ConfigurationError(f"config file not found: {path}") from e
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"{path}:{e.lineno}:{e.colno}: malformed JSON: {e.msg}") from e
    try:
        return ExperimentConfig.model_validate(document)
    except ValidationError as e:
        fields = "; ".join(f"{'.'.join(str(part) for part in err['loc'])}: {err['msg']}" for err in e.errors())
        raise ConfigurationError(f"{path}: invalid config: {fields}") from e


def _apply_overrides(config: ExperimentConfig, args: argparse.Namespace) -> ExperimentConfig:
    update: dict[str, object] = {}
    if args.seed is not None:
        update["master_seed"] = args.seed
    if getattr(args, "trials", None) is not None:
        update["trials_per_condition"] = args.trials
    if not update:
        return config
    return ExperimentConfig.model_validate({**config.model_dump(), **update})


@contextmanager
def _output(path: Path | None) -> Iterator[TextIO]:
    if path is None:
        yield sys.stdout
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as stream:
        yield stream


def _cli_config(args: argparse.Namespace) -> CliConfig:
    return CliConfig(
        subcommand=args.command,
        config_path=getattr(args, "config", None),
        seed=getattr(args, "seed", None),
        out=getattr(args, "out", None),
        verbosity=args.verbose,
        threads=args.threads if args.threads is not None else get_settings().threads,
    )


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_advise(args: argparse.Namespace, cli: CliConfig) -> int:
    if args.example:
        display = PRESETS[args.example]
    else:
        display = DisplaySpec(hfov_deg=args.hfov, vfov_deg=args.vfov, h_px=args.hpx, v_px=args.vpx)
    report = build_design_report(
        display,
        periphery_px=(args.periphery_hpx, args.periphery_vpx),
        blend_band_deg=args.blend_band,
        rule_deg=args.rule_deg,
        feature_deg=args.feature_deg,
    )
    with _output(cli.out) as stream:
        stream.write((report.model_dump_json(indent=2) if args.json else format_report(report)) + "\n")
    for message in report.warnings:
        print(f"warning: {message}", file=sys.stderr)
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace, cli: CliConfig) -> int:
    config = _apply_overrides(load_experiment_config(cli.config_path), args)
    params = resolve_params(config, args.params)
    if args.trial_file is not None:
        try:
            trial = trials_from_json(args.trial_file.read_text(encoding="utf-8"))[0]
        except FileNotFoundError as e:
            raise ConfigurationError(f"trial file not found: {args.trial_file}") from e
        except (ValidationError, IndexError) as e:
            raise ConfigurationError(f"{args.trial_file}: not a trial list: {e}") from e
        seed = trial.seed
    else:
        seed = args.trial_seed if args.trial_seed is not None else derive_trial_seed(resolve_master_seed(config), 0)
        trial = generate_trial(config.protocol, not args.absent, seed)
    if args.save_trial is not None:
        args.save_trial.parent.mkdir(parents=True, exist_ok=True)
        args.save_trial.write_text(trials_to_json([trial]) + "\n", encoding="utf-8")

    inset = None
    if args.h_extent is not None:
        inset = config.inset(args.h_extent, args.h_extent if args.v_extent is None else args.v_extent)
    result = simulate_trial(trial, config.display, inset, params, config.protocol)
    with _output(cli.out) as stream:
        if args.json:
            stream.write(results_to_json([result]) + "\n")
        else:
            write_fixations_csv([(0, result)], stream)
    print(
        f"{condition_label(inset)}: search time {result.search_time_s:.3f} s, "
        f"{'correct' if result.correct else 'slip'}, {len(result.fixations)} fixations (trial seed {seed})",
        file=sys.stderr,
    )
    return EXIT_OK


def _print_baseline_deltas(stats: list[ConditionStats]) -> None:
    baseline = next((row.mean_time_present_s for row in stats if row.undegraded), None)
    for row in stats:
        line = f"{row.label}: mean {row.mean_time_present_s:.3f} s, accuracy {row.accuracy_present:.1%}"
        if baseline is not None and not row.undegraded:
            line += f" ({row.mean_time_present_s - baseline:+.3f} s vs undegraded)"
        print(line, file=sys.stderr)


def cmd_run(args: argparse.Namespace, cli: CliConfig) -> int:
    config = _apply_overrides(load_experiment_config(cli.config_path), args)
    params = resolve_params(config, args.params)
    trials, runs = run_conditions(config, params, threads=cli.threads)
    stats = [summarize(run.inset, trials, run.results) for run in runs]
    with _output(cli.out) as stream:
        write_results_csv(stats, stream)
    _print_baseline_deltas(stats)

    if not args.check:
        return EXIT_OK
    report = check_pattern(stats, REFERENCE)
    orders_match = fixation_orders_consistent(runs)
    print(
        f"pattern: horizontal 10 slower={report.horizontal_10_slower}, "
        f"vertical 10 slower={report.vertical_10_slower}, "
        f"40x40 matches undegraded={report.large_inset_matches_undegraded}, "
        f"fixation order consistent={orders_match}, rank correlation={report.rank_correlation}",
        file=sys.stderr,
    )
    return EXIT_OK if report.passed and orders_match else EXIT_CHECK_FAILED


def cmd_calibrate(args: argparse.Namespace, cli: CliConfig) -> int:
    config = _apply_overrides(load_experiment_config(cli.config_path), args)
    if args.params is not None:
        config = ExperimentConfig.model_validate({**config.model_dump(), "params": resolve_params(config, args.params)})

    def report(result: CalibrationResult) -> None:
        for label, (simulated, target) in result.fitted.items():
            print(f"{label}: simulated {simulated:.3f} s, reference {target:.3f} s", file=sys.stderr)
        print(f"rms {result.rms_s:.4f} s, holdout rms {result.holdout_rms_s}", file=sys.stderr)

    calibrate(
        config,
        REFERENCE,
        master_seed=resolve_master_seed(config),
        threads=cli.threads,
        param_file=cli.out or DEFAULT_CALIBRATION_OUT,
        on_result=report,
    )
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="perilod", description="Head-tracked peripheral-degradation LOD model")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG logs")
    parser.add_argument("--threads", type=int, default=None, help="Worker threads (default PERILOD_THREADS or 1)")
    sub = parser.add_subparsers(dest="command", required=True)

    def runtime(p: argparse.ArgumentParser) -> None:
        # Also accepted after the subcommand; SUPPRESS keeps the top-level value when omitted
        p.add_argument("-v", "--verbose", action="count", default=argparse.SUPPRESS, help=argparse.SUPPRESS)
        p.add_argument("--threads", type=int, default=argparse.SUPPRESS, help=argparse.SUPPRESS)

    def common(p: argparse.ArgumentParser) -> None:
        runtime(p)
        p.add_argument("--config", type=Path, default=None, help="Experiment config JSON")
        p.add_argument("--seed", type=int, default=None, help="Master seed (overrides config and PERILOD_SEED)")
        p.add_argument("--out", type=Path, default=None, help="Output path (default stdout)")
        p.add_argument("--params", type=Path, default=None, help="Gaze parameter file")

    advise = sub.add_parser("advise", help="Recommend an inset for a display")
    runtime(advise)
    advise.add_argument("--hfov", type=float, default=FLIGHT_HELMET.hfov_deg)
    advise.add_argument("--vfov", type=float, default=FLIGHT_HELMET.vfov_deg)
    advise.add_argument("--hpx", type=int, default=FLIGHT_HELMET.h_px)
    advise.add_argument("--vpx", type=int, default=FLIGHT_HELMET.v_px)
    advise.add_argument("--periphery-hpx", type=int, default=42)
    advise.add_argument("--periphery-vpx", type=int, default=28)
    advise.add_argument("--blend-band", type=float, default=2.0)
    advise.add_argument("--rule-deg", type=float, default=30.0, help="Minimum inset extent per axis")
    advise.add_argument("--feature-deg", type=float, default=3.0, help="Size of the detail that must be seen")
    advise.add_argument("--example", choices=sorted(PRESETS), default=None, help="Use a preset display")
    advise.add_argument("--json", action="store_true", help="Emit the report as JSON")
    advise.add_argument("--seed", type=int, default=None, help=argparse.SUPPRESS)
    advise.add_argument("--out", type=Path, default=None, help="Output path (default stdout)")

    simulate = sub.add_parser("simulate", help="Simulate one trial and print its fixation log")
    common(simulate)
    simulate.add_argument("--trial-seed", type=int, default=None, help="Exact trial seed")
    simulate.add_argument("--h-extent", type=float, default=None, help="Inset horizontal extent (omit: undegraded)")
    simulate.add_argument("--v-extent", type=float, default=None, help="Inset vertical extent")
    simulate.add_argument("--absent", action="store_true", help="Generate a target-absent trial")
    simulate.add_argument("--trial-file", type=Path, default=None, help="Replay the first trial of a saved trial list")
    simulate.add_argument("--save-trial", type=Path, default=None, help="Write the simulated trial as JSON")
    simulate.add_argument("--json", action="store_true", help="Emit the trial result as JSON instead of CSV")

    run = sub.add_parser("run", help="Run the inset sweep and write the results CSV")
    common(run)
    run.add_argument("--trials", type=int, default=None, help="Override trials per condition")
    run.add_argument("--check", action="store_true", help="Exit 1 unless the expected pattern is reproduced")

    calibrate = sub.add_parser("calibrate", help="Fit gaze kinematics to the reference means")
    common(calibrate)
    calibrate.add_argument("--trials", type=int, default=None, help="Override trials per condition")

    return parser


COMMANDS = {"advise": cmd_advise, "simulate": cmd_simulate, "run": cmd_run, "calibrate": cmd_calibrate}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    settings = get_settings()
    level = {0: settings.log_level, 1: "INFO"}.get(args.verbose, "DEBUG")
    setup_logging(level)

    try:
        cli = _cli_config(args)
        if cli.threads < 1:
            raise ConfigurationError("--threads must be at least 1")
        return COMMANDS[cli.subcommand](args, cli)
    except (ConfigurationError, ValidationError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except CalibrationError as e:
        logger.error("Calibration failed", extra={"error": str(e)})
        print(f"error: {e}", file=sys.stderr)
        print(json.dumps(e.diagnostics, indent=2, sort_keys=True), file=sys.stderr)
        return EXIT_RUNTIME
    except (PerilodError, OSError) as e:
        logger.error("Run failed", extra={"error": str(e)}, exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
