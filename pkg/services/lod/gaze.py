"""Eye/head coordination model.

A gaze shift is either made by the eye alone or by eye and head together.
Small offsets are reached by the eye; larger ones, or any offset that would
leave the fixation outside a head-fixed high-detail inset, recruit the head.
Eye and head start together, the eye arrives first, and the shift ends when
the slower of the two has finished.

Kind and duration depend only on the offset, the inset and the parameters,
never on the current eye eccentricity.
"""

import math

from services.lod.geometry import eye_only_constraint
from shared.errors import ConfigurationError
from shared.types import Axis, Direction, DisplaySpec, GazeParams, GazeState, InsetSpec, ShiftKind, ShiftResult

_AXES = (Axis.HORIZONTAL, Axis.VERTICAL)
MAX_OFFSET_DEG = 180.0


def _constraints(inset: InsetSpec | None, display: DisplaySpec | None) -> tuple[float, float]:
    h, v = (eye_only_constraint(inset, axis, display) for axis in _AXES)
    return h, v


def line_of_sight(state: GazeState) -> Direction:
    """Gaze direction: the fixated target if known, else head direction plus eye offset."""
    if state.gaze_dir is not None:
        return state.gaze_dir
    return (state.head_dir[0] + state.eye_offset[0], state.head_dir[1] + state.eye_offset[1])


def classify_shift(
    offset_deg: Direction,
    inset: InsetSpec | None,
    params: GazeParams,
    display: DisplaySpec | None = None,
) -> ShiftKind:
    """Decide whether an offset is reached by the eye alone.

    Undegraded viewing allows eye-only shifts up to the threshold on the larger
    axis. With an inset, each axis must also stay inside the inset less its
    blend band.

    Raises:
        ConfigurationError: If an offset component exceeds 180 degrees
    """
    if any(abs(component) > MAX_OFFSET_DEG for component in offset_deg):
        raise ConfigurationError(f"offset {offset_deg} exceeds {MAX_OFFSET_DEG:g} degrees on an axis")

    limits = _constraints(inset, display)
    for component, limit in zip(offset_deg, limits, strict=True):
        if abs(component) > min(params.eye_only_threshold_deg, limit):
            return ShiftKind.COMBINED
    return ShiftKind.EYE_ONLY


def head_amplitude(
    offset_deg: Direction,
    params: GazeParams,
    inset: InsetSpec | None = None,
    display: DisplaySpec | None = None,
) -> float:
    """Head travel for a combined shift: amplitude less the eye's residual eccentricity.

    The residual is capped by the tightest inset constraint among the axes the
    shift actually moves along, and by the eye's range.
    """
    amplitude = math.hypot(*offset_deg)
    if amplitude == 0.0:
        return 0.0
    relevant = [limit for component, limit in zip(offset_deg, _constraints(inset, display), strict=True) if component]
    constraint = min([params.eye_range_deg, *relevant])
    return max(0.0, amplitude - min(params.residual_eye_offset_deg, constraint))


def shift_time(
    offset_deg: Direction,
    kind: ShiftKind,
    params: GazeParams,
    inset: InsetSpec | None = None,
    display: DisplaySpec | None = None,
) -> float:
    """Seconds from shift onset until gaze rests on the target."""
    amplitude = math.hypot(*offset_deg)
    eye_time = amplitude / params.eye_velocity_dps
    if kind is ShiftKind.EYE_ONLY:
        return params.eye_latency_s + eye_time
    head_time = head_amplitude(offset_deg, params, inset, display) / params.head_velocity_dps
    return params.eye_latency_s + max(eye_time, head_time)


def apply_shift(
    state: GazeState,
    target_dir: Direction,
    inset: InsetSpec | None,
    params: GazeParams,
    display: DisplaySpec | None = None,
) -> ShiftResult:
    """Move gaze onto ``target_dir`` and report how, how long, and the resulting state.

    A combined shift leaves the eye off-center by at most the residual offset
    (less inside a small inset). An eye-only shift keeps the head still unless
    the eye would leave its range or the inset, in which case the head follows
    by the excess without adding time.
    """
    sight = line_of_sight(state)
    offset = (target_dir[0] - sight[0], target_dir[1] - sight[1])
    kind = classify_shift(offset, inset, params, display)
    duration = shift_time(offset, kind, params, inset, display)

    head: list[float] = []
    eye: list[float] = []
    for i, constraint in enumerate(_constraints(inset, display)):
        limit = min(params.eye_range_deg, constraint)
        if kind is ShiftKind.COMBINED:
            to_target = target_dir[i] - state.head_dir[i]
            eye_i = math.copysign(min(abs(to_target), params.residual_eye_offset_deg, limit), to_target)
        else:
            eye_i = target_dir[i] - state.head_dir[i]
            # Head follow-through past the eye's limit is deliberately untimed.
            if abs(eye_i) > limit:
                eye_i = math.copysign(limit, eye_i)
        eye.append(eye_i)
        head.append(target_dir[i] - eye_i)

    return ShiftResult(
        kind=kind,
        duration_s=duration,
        new_state=GazeState(head_dir=(head[0], head[1]), eye_offset=(eye[0], eye[1]), gaze_dir=target_dir),
        amplitude_deg=math.hypot(*offset),
        head_amplitude_deg=head_amplitude(offset, params, inset, display) if kind is ShiftKind.COMBINED else 0.0,
    )
