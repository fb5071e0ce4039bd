"""Visual-search simulation.

The simulated observer sees every object's location from the start (objects
are large enough to be located in the low-detail periphery), but can only tell
the target apart once it is fixated inside the high-detail region. It visits
objects greedily, always moving to the nearest unvisited object from where it
is looking, and stops at the target or after visiting everything.

Fixation order therefore depends only on the trial, never on the inset;
insets change how long each shift takes.
"""

import contextvars
import logging
import math
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from services.lod.gaze import apply_shift, line_of_sight
from services.lod.geometry import (
    angular_resolution,
    check_inset_fits,
    eye_only_constraint,
    periphery_resolution,
    resolvable,
)
from shared.errors import ConfigurationError, SimulationError
from shared.logging import trial_id_ctx
from shared.types import (
    Axis,
    Direction,
    DisplaySpec,
    Fixation,
    GazeParams,
    GazeState,
    InsetSpec,
    ProtocolSpec,
    SceneObject,
    Trial,
    TrialResult,
)

logger = logging.getLogger(__name__)

# Second stream of a trial's seed; the first generates the trial itself.
SLIP_STREAM = 1


def check_task_possible(display: DisplaySpec, inset: InsetSpec | None, protocol: ProtocolSpec) -> None:
    """Verify objects can be located in the periphery and identified at full resolution.

    Raises:
        ConfigurationError: If the task cannot be performed on this display
    """
    full_res = angular_resolution(display, Axis.HORIZONTAL)
    if not resolvable(protocol.feature_size_deg, full_res):
        raise ConfigurationError(
            f"a {protocol.feature_size_deg:g} deg feature is not resolvable at {full_res:.2f} arcmin/px anywhere on the display"
        )
    if inset is not None:
        check_inset_fits(display, inset)
        low_res = periphery_resolution(display, inset, Axis.HORIZONTAL)
        if not resolvable(protocol.object_size_deg, low_res):
            raise ConfigurationError(
                f"{protocol.object_size_deg:g} deg objects cannot be located at periphery resolution {low_res:.2f} arcmin/px"
            )


def nearest_unvisited(sight: Direction, objects: Sequence[SceneObject], visited: set[int]) -> int:
    """Index of the closest unvisited object; ties go to the lower index."""
    best_index = -1
    best_distance = math.inf
    for index, obj in enumerate(objects):
        if index in visited:
            continue
        distance = math.dist(sight, obj.dir)
        if distance < best_distance:
            best_index, best_distance = index, distance
    return best_index


def _identifiable(state: GazeState, inset: InsetSpec | None, display: DisplaySpec) -> bool:
    if inset is None:
        return True
    halves = (inset.h_extent_deg / 2.0, inset.v_extent_deg / 2.0)
    for axis, eye, half in zip((Axis.HORIZONTAL, Axis.VERTICAL), state.eye_offset, halves, strict=True):
        if eye_only_constraint(inset, axis, display) != math.inf and abs(eye) > half:
            return False
    return True


def _slipped(trial: Trial, protocol: ProtocolSpec) -> bool:
    rng = np.random.default_rng([trial.seed, SLIP_STREAM])
    return bool(rng.random() < protocol.slip_probability)


def simulate_trial(
    trial: Trial,
    display: DisplaySpec,
    inset: InsetSpec | None,
    params: GazeParams,
    protocol: ProtocolSpec,
) -> TrialResult:
    """Run one search and return its time, correctness and fixation log.

    Search time is the sum of shift durations and dwells; the onset delay
    precedes the objects' appearance and is not counted.

    Raises:
        ConfigurationError: If the task is impossible on this display
        SimulationError: If a fixation ends outside the high-detail region
    """
    check_task_possible(display, inset, protocol)

    state = GazeState(head_dir=trial.home_dir, eye_offset=(0.0, 0.0))
    visited: set[int] = set()
    fixations: list[Fixation] = []
    elapsed: list[float] = []

    while len(visited) < len(trial.objects):
        index = nearest_unvisited(line_of_sight(state), trial.objects, visited)
        shift = apply_shift(state, trial.objects[index].dir, inset, params, display)
        state = shift.new_state
        if not _identifiable(state, inset, display):
            raise SimulationError(f"fixation on object {index} left it outside the inset (seed {trial.seed})")

        visited.add(index)
        fixations.append(Fixation(object_index=index, shift=shift))
        elapsed.extend((shift.duration_s, params.dwell_s))
        if trial.objects[index].is_target:
            break

    result = TrialResult(search_time_s=math.fsum(elapsed), correct=not _slipped(trial, protocol), fixations=fixations)
    logger.debug(
        "Simulated trial",
        extra={"seed": trial.seed, "search_time_s": result.search_time_s, "fixations": len(fixations)},
    )
    return result


def simulate_condition(
    trials: Sequence[Trial],
    display: DisplaySpec,
    inset: InsetSpec | None,
    params: GazeParams,
    protocol: ProtocolSpec,
    threads: int = 1,
) -> list[TrialResult]:
    """Simulate many trials under one display condition; results keep the input order."""
    check_task_possible(display, inset, protocol)

    def run(indexed: tuple[int, Trial]) -> TrialResult:
        token = trial_id_ctx.set(indexed[0])
        try:
            return simulate_trial(indexed[1], display, inset, params, protocol)
        finally:
            trial_id_ctx.reset(token)

    if threads <= 1:
        return [run(item) for item in enumerate(trials)]
    parent = contextvars.copy_context()
    with ThreadPoolExecutor(max_workers=threads) as executor:
        return list(executor.map(lambda item: parent.copy().run(run, item), enumerate(trials)))
