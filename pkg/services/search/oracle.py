"""Brute-force bound on search time.

Tries every visiting order with the same gaze model and stopping rule as the
simulator and returns the cheapest. The greedy order is one of those
permutations, so the result never exceeds the simulated time.
"""

import math
from itertools import permutations

from services.lod.gaze import apply_shift
from shared.errors import SimulationError
from shared.types import DisplaySpec, GazeParams, GazeState, InsetSpec, Trial

MAX_ORACLE_OBJECTS = 8


def _order_time(
    trial: Trial, order: tuple[int, ...], display: DisplaySpec, inset: InsetSpec | None, params: GazeParams
) -> float:
    state = GazeState(head_dir=trial.home_dir, eye_offset=(0.0, 0.0))
    elapsed: list[float] = []
    for index in order:
        shift = apply_shift(state, trial.objects[index].dir, inset, params, display)
        state = shift.new_state
        elapsed.extend((shift.duration_s, params.dwell_s))
        if trial.objects[index].is_target:
            break
    return math.fsum(elapsed)


def visit_order_oracle(trial: Trial, display: DisplaySpec, inset: InsetSpec | None, params: GazeParams) -> float:
    """Minimum search time over all visiting orders.

    Raises:
        SimulationError: If the trial has more than ``MAX_ORACLE_OBJECTS`` objects
    """
    if len(trial.objects) > MAX_ORACLE_OBJECTS:
        raise SimulationError(
            f"oracle refuses {len(trial.objects)} objects; factorial search is limited to {MAX_ORACLE_OBJECTS}"
        )

    best = math.inf
    for order in permutations(range(len(trial.objects))):
        best = min(best, _order_time(trial, order, display, inset, params))
    return best
