"""Experiment sweeps over inset conditions.

All conditions share one set of trials (same seeds), so differences between
conditions come from the display alone. Trial ``i`` depends only on
``(master_seed, i)``: enlarging a run leaves its existing trials unchanged.
"""

import logging
import math
from dataclasses import dataclass
from pathlib import Path

from services.lod.params import load_gaze_params
from services.search.simulator import check_task_possible, simulate_condition
from services.search.trials import derive_trial_seed, generate_trial, is_target_present
from shared.config import get_settings
from shared.logging import condition_ctx, master_seed_ctx
from shared.types import ConditionStats, ExperimentConfig, GazeParams, InsetSpec, Trial, TrialResult

logger = logging.getLogger(__name__)

UNDEGRADED_LABEL = "undegraded"


@dataclass(frozen=True)
class ConditionRun:
    """Per-trial results for one display condition."""

    label: str
    inset: InsetSpec | None
    results: list[TrialResult]


def condition_label(inset: InsetSpec | None) -> str:
    if inset is None:
        return UNDEGRADED_LABEL
    return f"{inset.h_extent_deg:g}x{inset.v_extent_deg:g}"


def resolve_master_seed(config: ExperimentConfig) -> int:
    """Config value, else ``PERILOD_SEED``, else 0."""
    if config.master_seed is not None:
        return config.master_seed
    env_seed = get_settings().seed
    return env_seed if env_seed is not None else 0


def resolve_params(config: ExperimentConfig, params_file: Path | None = None) -> GazeParams:
    """Inline params, else ``params_file``, else ``PERILOD_PARAMS_FILE``, else the shipped file."""
    if config.params is not None:
        return config.params
    return load_gaze_params(params_file or get_settings().params_file)


def conditions(config: ExperimentConfig) -> list[InsetSpec | None]:
    """Grid insets in configured order, followed by the undegraded baseline."""
    insets: list[InsetSpec | None] = [config.inset(h, v) for h, v in config.inset_grid]
    if config.include_undegraded:
        insets.append(None)
    return insets


def generate_trials(config: ExperimentConfig, master_seed: int | None = None) -> list[Trial]:
    """The matched trial set used by every condition."""
    seed = resolve_master_seed(config) if master_seed is None else master_seed
    return [
        generate_trial(
            config.protocol,
            is_target_present(index, config.present_absent_ratio),
            derive_trial_seed(seed, index),
        )
        for index in range(config.trials_per_condition)
    ]


def summarize(inset: InsetSpec | None, trials: list[Trial], results: list[TrialResult]) -> ConditionStats:
    """Aggregate target-present trials; the mean and sd use correct trials only."""
    present = [result for trial, result in zip(trials, results, strict=True) if trial.target_present]
    times = [result.search_time_s for result in present if result.correct]

    if times:
        mean = math.fsum(times) / len(times)
        sd = math.sqrt(math.fsum((t - mean) ** 2 for t in times) / (len(times) - 1)) if len(times) > 1 else 0.0
    else:
        logger.warning("No correct target-present trials", extra={"condition": condition_label(inset)})
        mean = sd = math.nan

    return ConditionStats(
        h_extent_deg=inset.h_extent_deg if inset else None,
        v_extent_deg=inset.v_extent_deg if inset else None,
        mean_time_present_s=mean,
        sd_time_s=sd,
        accuracy_present=len(times) / len(present) if present else 0.0,
        n=max(1, len(present)),
        n_correct=len(times),
        n_trials=len(trials),
    )


def run_conditions(
    config: ExperimentConfig,
    params: GazeParams,
    master_seed: int | None = None,
    threads: int = 1,
    trials: list[Trial] | None = None,
) -> tuple[list[Trial], list[ConditionRun]]:
    """Simulate the matched trial set under every condition, in condition order."""
    seed = resolve_master_seed(config) if master_seed is None else master_seed
    for inset in conditions(config):
        check_task_possible(config.display, inset, config.protocol)
    trials = trials if trials is not None else generate_trials(config, seed)

    runs: list[ConditionRun] = []
    seed_token = master_seed_ctx.set(seed)
    try:
        for inset in conditions(config):
            label = condition_label(inset)
            token = condition_ctx.set(label)
            try:
                results = simulate_condition(trials, config.display, inset, params, config.protocol, threads)
                logger.info("Simulated condition", extra={"trials": len(results)})
            finally:
                condition_ctx.reset(token)
            runs.append(ConditionRun(label=label, inset=inset, results=results))
    finally:
        master_seed_ctx.reset(seed_token)
    return trials, runs


def run_experiment(
    config: ExperimentConfig,
    params: GazeParams | None = None,
    master_seed: int | None = None,
    threads: int = 1,
) -> list[ConditionStats]:
    """Run every condition and summarize each; rows follow condition order."""
    params = params or resolve_params(config)
    trials, runs = run_conditions(config, params, master_seed, threads)
    return [summarize(run.inset, trials, run.results) for run in runs]


def fixation_orders_consistent(runs: list[ConditionRun]) -> bool:
    """Whether every condition visited objects in the same order on every trial."""
    if not runs:
        return True
    baseline = [result.order for result in runs[0].results]
    return all([result.order for result in run.results] == baseline for run in runs[1:])
