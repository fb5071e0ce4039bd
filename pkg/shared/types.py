"""Shared type definitions."""

from enum import Enum
from typing import Any, Self

from pydantic import BaseModel, ConfigDict, Field, model_validator

Direction = tuple[float, float]
"""Angular direction or offset as (azimuth, elevation) in degrees."""


class _Frozen(BaseModel):
    """Immutable value type; unknown fields are rejected when parsing JSON."""

    model_config = ConfigDict(frozen=True, extra="forbid")


class Axis(str, Enum):
    """Display axis enumeration."""

    HORIZONTAL = "horizontal"
    VERTICAL = "vertical"


class ShiftKind(str, Enum):
    """How a gaze shift is achieved."""

    EYE_ONLY = "eye_only"
    COMBINED = "combined"


class HomeAnchor(str, Enum):
    """Where the observer's gaze rests before the objects appear."""

    LEFT_EDGE = "left_edge"
    CENTER = "center"


# ---------------------------------------------------------------------------
# Display geometry
# ---------------------------------------------------------------------------


class DisplaySpec(_Frozen):
    """Angular field of view and pixel dimensions of a head-fixed display."""

    hfov_deg: float = Field(..., gt=0, le=360, description="Horizontal field of view in degrees")
    vfov_deg: float = Field(..., gt=0, le=360, description="Vertical field of view in degrees")
    h_px: int = Field(..., gt=0, description="Horizontal pixel count")
    v_px: int = Field(..., gt=0, description="Vertical pixel count")


FLIGHT_HELMET = DisplaySpec(hfov_deg=75.3, vfov_deg=58.4, h_px=208, v_px=139)


class InsetSpec(_Frozen):
    """Head-centered rectangular high-detail region plus the periphery resolution.

    Extents are checked against a display only where both are used together.
    """

    h_extent_deg: float = Field(..., gt=0, le=360, description="Horizontal inset extent in degrees")
    v_extent_deg: float = Field(..., gt=0, le=360, description="Vertical inset extent in degrees")
    periphery_h_px: int = Field(default=42, gt=0, description="Horizontal pixels of the low-detail view")
    periphery_v_px: int = Field(default=28, gt=0, description="Vertical pixels of the low-detail view")
    blend_band_deg: float = Field(default=2.0, ge=0, description="Alpha-blended overlap at the inset edge")


class PixelBudget(_Frozen):
    """Rendering cost of a composite (inset + periphery) frame versus a full high-detail frame."""

    full_hi_px: int = Field(..., ge=0, description="Pixels of a full high-detail frame")
    inset_hi_px: int = Field(..., ge=0, description="High-detail pixels inside the inset")
    periphery_lo_px: int = Field(..., ge=0, description="Pixels of the low-detail periphery view")
    composite_px: int = Field(..., ge=0, description="inset_hi_px + periphery_lo_px")
    savings_fraction: float = Field(..., ge=0, le=1, description="1 - composite/full, clamped to [0, 1]")


# ---------------------------------------------------------------------------
# Gaze model
# ---------------------------------------------------------------------------


class GazeParams(_Frozen):
    """Eye/head coordination thresholds and the calibrated kinematics."""

    eye_only_threshold_deg: float = Field(default=30.0, gt=0, description="Largest offset reached by eye alone")
    simultaneous_onset_deg: float = Field(default=15.0, gt=0, description="Offset above which eye and head start together")
    eye_range_deg: float = Field(default=45.0, gt=0, description="Physical extent of eye rotation")
    residual_eye_offset_deg: float = Field(default=15.0, ge=0, description="Eye eccentricity left after a combined shift")
    eye_latency_s: float = Field(..., gt=0, description="Latency before any gaze movement starts")
    eye_velocity_dps: float = Field(..., gt=0, description="Mean eye velocity in degrees/second")
    head_velocity_dps: float = Field(..., gt=0, description="Mean head velocity in degrees/second")
    dwell_s: float = Field(..., gt=0, description="Inspection time per fixated object")

    @model_validator(mode="after")
    def _check_ordering(self) -> Self:
        if not self.simultaneous_onset_deg <= self.eye_only_threshold_deg <= self.eye_range_deg:
            raise ValueError("require simultaneous_onset_deg <= eye_only_threshold_deg <= eye_range_deg")
        if self.residual_eye_offset_deg > self.eye_only_threshold_deg:
            raise ValueError("residual_eye_offset_deg must not exceed eye_only_threshold_deg")
        if self.eye_velocity_dps <= self.head_velocity_dps:
            raise ValueError("eye_velocity_dps must exceed head_velocity_dps")
        return self


class GazeState(_Frozen):
    """Head direction plus the eye's offset from it.

    ``gaze_dir`` holds the exact fixated direction after a shift; when unset the
    line of sight is the sum of head direction and eye offset.
    """

    head_dir: Direction = Field(default=(0.0, 0.0), description="Head direction (azimuth, elevation) in degrees")
    eye_offset: Direction = Field(default=(0.0, 0.0), description="Eye offset from head_dir, per axis, in degrees")
    gaze_dir: Direction | None = Field(default=None, description="Exact line of sight, if known")


class ShiftResult(_Frozen):
    """Outcome of moving gaze to a new target."""

    kind: ShiftKind
    duration_s: float = Field(..., gt=0, description="Time from shift onset until gaze is on target")
    new_state: GazeState
    amplitude_deg: float = Field(default=0.0, ge=0, description="Euclidean gaze amplitude")
    head_amplitude_deg: float = Field(default=0.0, ge=0, description="Head travel used for timing")


# ---------------------------------------------------------------------------
# Search protocol
# ---------------------------------------------------------------------------


class ProtocolSpec(_Frozen):
    """Trial-generation protocol for the search task."""

    n_objects: int = Field(default=5, ge=1, description="Objects per trial")
    object_size_deg: float = Field(default=12.0, gt=0, description="Angular size of each object")
    feature_size_deg: float = Field(default=3.0, gt=0, description="Angular size of the discriminating feature")
    search_space: Direction = Field(default=(150.0, 118.0), description="Search space extent (h, v) in degrees")
    cluster_extent: Direction = Field(default=(75.3, 58.4), description="Cluster window extent (h, v) in degrees")
    onset_delay_range_s: tuple[float, float] = Field(default=(0.1, 0.8), description="Uniform onset delay bounds")
    slip_probability: float = Field(default=0.03, ge=0, le=1, description="Chance of pressing the wrong button")
    home_anchor: HomeAnchor = Field(default=HomeAnchor.LEFT_EDGE, description="Initial gaze relative to the cluster")
    max_placement_attempts: int = Field(default=1000, ge=1, description="Rejection-sampling budget per object")

    @model_validator(mode="after")
    def _check_extents(self) -> Self:
        for cluster, space in zip(self.cluster_extent, self.search_space, strict=True):
            if cluster <= 0 or space <= 0:
                raise ValueError("search_space and cluster_extent must be positive")
            if cluster > space:
                raise ValueError("cluster_extent must fit inside search_space")
        low, high = self.onset_delay_range_s
        if not 0 < low < high:
            raise ValueError("onset_delay_range_s must be a positive, non-degenerate interval")
        return self


class SceneObject(_Frozen):
    """One search object."""

    dir: Direction = Field(..., description="Object center direction in degrees")
    is_target: bool = Field(default=False, description="Whether this is the closed-mouth target")


class Trial(_Frozen):
    """A generated search trial, reproducible from its seed."""

    objects: list[SceneObject] = Field(..., min_length=1)
    target_present: bool
    onset_delay_s: float = Field(..., ge=0)
    seed: int = Field(..., ge=0, lt=2**64)
    home_dir: Direction = Field(default=(0.0, 0.0), description="Line of sight when the trial starts")

    @model_validator(mode="after")
    def _check_target(self) -> Self:
        targets = sum(obj.is_target for obj in self.objects)
        if targets > 1:
            raise ValueError("at most one object may be the target")
        if self.target_present != (targets == 1):
            raise ValueError("target_present must match the objects' target flags")
        return self


class Fixation(_Frozen):
    """One object visit within a trial."""

    object_index: int = Field(..., ge=0)
    shift: ShiftResult


class TrialResult(_Frozen):
    """Simulated outcome of a trial."""

    search_time_s: float = Field(..., gt=0)
    correct: bool
    fixations: list[Fixation]

    @property
    def order(self) -> list[int]:
        return [fixation.object_index for fixation in self.fixations]


# ---------------------------------------------------------------------------
# Experiment harness
# ---------------------------------------------------------------------------


class ConditionStats(_Frozen):
    """Per-condition summary over target-present trials."""

    h_extent_deg: float | None = Field(default=None, description="Inset horizontal extent; None when undegraded")
    v_extent_deg: float | None = Field(default=None, description="Inset vertical extent; None when undegraded")
    mean_time_present_s: float = Field(..., description="Mean search time over correct target-present trials")
    sd_time_s: float = Field(..., description="Sample standard deviation; 0 when fewer than two trials")
    accuracy_present: float = Field(..., ge=0, le=1)
    n: int = Field(..., gt=0, description="Target-present trials simulated")
    n_correct: int = Field(default=0, ge=0, description="Correct target-present trials behind the mean")
    n_trials: int = Field(default=0, ge=0, description="All trials simulated, present and absent")

    @property
    def undegraded(self) -> bool:
        return self.h_extent_deg is None

    @property
    def label(self) -> str:
        if self.h_extent_deg is None or self.v_extent_deg is None:
            return "undegraded"
        return f"{self.h_extent_deg:g}x{self.v_extent_deg:g}"


class PatternReport(_Frozen):
    """Findings from comparing a grid of condition means against the expected pattern."""

    horizontal_10_slower: bool = Field(..., description="10 deg horizontal slower than 30 and 40 by the margin")
    vertical_10_slower: bool = Field(..., description="10 deg vertical slower than 30 and 40 by the margin")
    large_inset_matches_undegraded: bool = Field(..., description="40x40 within tolerance of undegraded")
    rank_correlation: float | None = Field(default=None, description="Spearman rho against the reference grid")
    horizontal_marginals: dict[str, float] = Field(default_factory=dict)
    vertical_marginals: dict[str, float] = Field(default_factory=dict)
    margin_s: float = 0.1
    tolerance: float = 0.1
    details: dict[str, Any] = Field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.horizontal_10_slower and self.vertical_10_slower and self.large_inset_matches_undegraded


class CalibrationResult(_Frozen):
    """Best-fit kinematics and how well they reproduce the reference means."""

    params: GazeParams
    residual_s2: float = Field(..., ge=0, description="Sum of squared errors over the fitted conditions")
    rms_s: float = Field(..., ge=0)
    holdout_rms_s: float | None = None
    fitted: dict[str, tuple[float, float]] = Field(
        default_factory=dict, description="Condition label -> (simulated, reference) mean seconds"
    )
    evaluations: int = 0


class ExperimentConfig(_Frozen):
    """A full sweep: inset grid, optional undegraded baseline, trial counts and seeds."""

    display: DisplaySpec = Field(default=FLIGHT_HELMET)
    inset_grid: list[Direction] = Field(
        default_factory=lambda: [(float(h), float(v)) for h in (10, 20, 30, 40) for v in (10, 20, 30, 40)],
        min_length=1,
        description="(h_extent_deg, v_extent_deg) pairs",
    )
    include_undegraded: bool = True
    trials_per_condition: int = Field(default=1000, ge=1)
    present_absent_ratio: tuple[int, int] = Field(default=(14, 6), description="Target-present : target-absent")
    master_seed: int | None = Field(default=None, ge=0, description="Falls back to PERILOD_SEED, then 0")
    periphery_px: tuple[int, int] = Field(default=(42, 28), description="Low-detail view resolution")
    blend_band_deg: float = Field(default=2.0, ge=0)
    params: GazeParams | None = Field(default=None, description="Inline kinematics; otherwise the parameter file")
    protocol: ProtocolSpec = Field(default_factory=ProtocolSpec)

    @model_validator(mode="after")
    def _check_ratio(self) -> Self:
        present, absent = self.present_absent_ratio
        if present < 1 or absent < 0:
            raise ValueError("present_absent_ratio needs at least one present trial and no negative counts")
        return self

    def inset(self, h_extent_deg: float, v_extent_deg: float) -> InsetSpec:
        return InsetSpec(
            h_extent_deg=h_extent_deg,
            v_extent_deg=v_extent_deg,
            periphery_h_px=self.periphery_px[0],
            periphery_v_px=self.periphery_px[1],
            blend_band_deg=self.blend_band_deg,
        )
