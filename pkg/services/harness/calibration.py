"""Calibration of gaze kinematics against reference search times.

Fixation order and shift kinds do not depend on velocities, latency or dwell,
so each fitted condition is simulated once and its shifts are reduced to
arrays of (amplitude, head amplitude, combined?). Mean search time for any
candidate kinematics is then a closed-form expression over those arrays.

Latency and dwell are both paid once per visit, so only their sum is
identified by the fit.
"""

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np
from scipy.optimize import brute, minimize

from services.harness.experiment import (
    condition_label,
    generate_trials,
    resolve_master_seed,
    resolve_params,
    summarize,
)
from services.harness.reference import ReferenceTable
from services.lod.params import save_gaze_params
from services.search.simulator import simulate_condition
from shared.errors import CalibrationError
from shared.logging import master_seed_ctx
from shared.types import CalibrationResult, ExperimentConfig, GazeParams, InsetSpec, ShiftKind, Trial, TrialResult

logger = logging.getLogger(__name__)

# (eye_velocity_dps, head_velocity_dps, eye_latency_s, dwell_s)
PARAM_NAMES = ("eye_velocity_dps", "head_velocity_dps", "eye_latency_s", "dwell_s")
BOUNDS: tuple[tuple[float, float], ...] = ((150.0, 700.0), (10.0, 140.0), (0.10, 0.35), (0.20, 1.50))
GRID_POINTS = 6
MAX_RMS_S = 0.25
FIT_EXTENTS: tuple[tuple[int, int] | None, ...] = (None, (10, 10), (40, 40))


@dataclass(frozen=True)
class _ShiftArrays:
    """Shifts of all correct target-present trials in one condition."""

    amplitude: np.ndarray
    head_amplitude: np.ndarray
    combined: np.ndarray
    n_trials: int

    def mean_time(self, eye_velocity: float, head_velocity: float, latency: float, dwell: float) -> float:
        eye_time = self.amplitude / eye_velocity
        motion = np.where(self.combined, np.maximum(eye_time, self.head_amplitude / head_velocity), eye_time)
        return float((self.amplitude.size * (latency + dwell) + motion.sum()) / self.n_trials)


def _shift_arrays(trials: list[Trial], results: list[TrialResult]) -> _ShiftArrays:
    shifts = [
        fixation.shift
        for trial, result in zip(trials, results, strict=True)
        if trial.target_present and result.correct
        for fixation in result.fixations
    ]
    n_trials = sum(1 for trial, result in zip(trials, results, strict=True) if trial.target_present and result.correct)
    if n_trials == 0:
        raise CalibrationError("no correct target-present trials to calibrate against")
    return _ShiftArrays(
        amplitude=np.array([shift.amplitude_deg for shift in shifts]),
        head_amplitude=np.array([shift.head_amplitude_deg for shift in shifts]),
        combined=np.array([shift.kind is ShiftKind.COMBINED for shift in shifts]),
        n_trials=n_trials,
    )


def _reference_time(reference: ReferenceTable, extents: tuple[int, int] | None) -> float:
    return reference.undegraded_time_s if extents is None else reference.mean_time_s[extents]


def _with_kinematics(base: GazeParams, values: np.ndarray) -> GazeParams:
    update = {name: float(value) for name, value in zip(PARAM_NAMES, values, strict=True)}
    return GazeParams.model_validate({**base.model_dump(), **update})


def _holdout_rms(
    config: ExperimentConfig,
    reference: ReferenceTable,
    trials: list[Trial],
    params: GazeParams,
    threads: int,
) -> float | None:
    errors: list[float] = []
    for h, v in config.inset_grid:
        key = (round(h), round(v))
        if key in FIT_EXTENTS or key not in reference.mean_time_s:
            continue
        inset = config.inset(h, v)
        results = simulate_condition(trials, config.display, inset, params, config.protocol, threads)
        stats = summarize(inset, trials, results)
        errors.append((stats.mean_time_present_s - reference.mean_time_s[key]) ** 2)
    return math.sqrt(math.fsum(errors) / len(errors)) if errors else None


def fit_kinematics(
    config: ExperimentConfig,
    reference: ReferenceTable,
    master_seed: int | None = None,
    threads: int = 1,
    holdout: bool = True,
    max_rms_s: float = MAX_RMS_S,
) -> CalibrationResult:
    """Grid search then bounded Powell refinement of the four kinematic parameters.

    Raises:
        CalibrationError: If the best fit's RMS error exceeds ``max_rms_s``
    """
    seed = resolve_master_seed(config) if master_seed is None else master_seed
    base = resolve_params(config)
    trials = generate_trials(config, seed)
    token = master_seed_ctx.set(seed)
    try:
        insets: list[InsetSpec | None] = [None if ext is None else config.inset(*ext) for ext in FIT_EXTENTS]
        arrays = [
            _shift_arrays(trials, simulate_condition(trials, config.display, inset, base, config.protocol, threads))
            for inset in insets
        ]
        targets = [_reference_time(reference, ext) for ext in FIT_EXTENTS]

        def objective(values: np.ndarray) -> float:
            return math.fsum(
                (shifts.mean_time(*values) - target) ** 2 for shifts, target in zip(arrays, targets, strict=True)
            )

        coarse = brute(objective, BOUNDS, Ns=GRID_POINTS, finish=None)
        refined = minimize(objective, np.asarray(coarse, dtype=float), method="Powell", bounds=BOUNDS)
        best = refined.x if refined.fun <= objective(np.asarray(coarse, dtype=float)) else np.asarray(coarse)
        params = _with_kinematics(base, best)

        fitted: dict[str, tuple[float, float]] = {}
        errors: list[float] = []
        for inset, target in zip(insets, targets, strict=True):
            results = simulate_condition(trials, config.display, inset, params, config.protocol, threads)
            simulated = summarize(inset, trials, results).mean_time_present_s
            fitted[condition_label(inset)] = (simulated, target)
            errors.append((simulated - target) ** 2)
        residual = math.fsum(errors)
        rms = math.sqrt(residual / len(errors))

        result = CalibrationResult(
            params=params,
            residual_s2=residual,
            rms_s=rms,
            holdout_rms_s=_holdout_rms(config, reference, trials, params, threads) if holdout else None,
            fitted=fitted,
            evaluations=GRID_POINTS ** len(BOUNDS) + int(refined.nfev),
        )
    finally:
        master_seed_ctx.reset(token)

    logger.info("Calibration finished", extra={"rms_s": rms, "holdout_rms_s": result.holdout_rms_s})
    if rms > max_rms_s:
        raise CalibrationError(
            f"calibration RMS error {rms:.3f} s exceeds {max_rms_s:.3f} s",
            diagnostics=result.model_dump(mode="json"),
        )
    return result


def calibrate(
    config: ExperimentConfig,
    reference: ReferenceTable,
    master_seed: int | None = None,
    threads: int = 1,
    param_file: Path | None = None,
    on_result: Callable[[CalibrationResult], None] | None = None,
) -> GazeParams:
    """Fit kinematics and optionally write them, with provenance, to ``param_file``."""
    seed = resolve_master_seed(config) if master_seed is None else master_seed
    result = fit_kinematics(config, reference, master_seed=seed, threads=threads)
    if on_result is not None:
        on_result(result)

    if param_file is not None:
        provenance: dict[str, Any] = {
            "method": "scipy.optimize.brute grid then bounded Powell over target-present means",
            "master_seed": seed,
            "trials_per_condition": config.trials_per_condition,
            "fitted_conditions": list(result.fitted),
            "bounds": dict(zip(PARAM_NAMES, BOUNDS, strict=True)),
            "residual_s2": result.residual_s2,
            "rms_s": result.rms_s,
            "holdout_rms_s": result.holdout_rms_s,
            "fitted": result.fitted,
        }
        save_gaze_params(result.params, param_file, provenance)
    return result.params
