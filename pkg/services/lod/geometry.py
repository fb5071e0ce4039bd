"""Angular and display arithmetic for peripherally degraded displays.

Angular extents are treated as flat rectangles (degree-squared products), so a
30x30 inset on a 270x270 display covers 900/72900 of it. No solid-angle
correction is applied.
"""

import math

from shared.errors import ConfigurationError
from shared.types import Axis, DisplaySpec, InsetSpec, PixelBudget

ARCMIN_PER_DEG = 60.0
DEFAULT_MIN_PIXELS = 2.0  # two samples across a feature


def _round_half_up(value: float) -> int:
    return math.floor(value + 0.5)


def _fov(display: DisplaySpec, axis: Axis) -> tuple[float, int]:
    if axis is Axis.HORIZONTAL:
        return display.hfov_deg, display.h_px
    return display.vfov_deg, display.v_px


def _inset_extent(inset: InsetSpec, axis: Axis) -> float:
    return inset.h_extent_deg if axis is Axis.HORIZONTAL else inset.v_extent_deg


def check_inset_fits(display: DisplaySpec, inset: InsetSpec) -> None:
    """Raise ``ConfigurationError`` if the inset is larger than the display on either axis."""
    if inset.h_extent_deg > display.hfov_deg or inset.v_extent_deg > display.vfov_deg:
        raise ConfigurationError(
            f"inset {inset.h_extent_deg:g}x{inset.v_extent_deg:g} deg exceeds display "
            f"{display.hfov_deg:g}x{display.vfov_deg:g} deg"
        )


def angular_resolution(display: DisplaySpec, axis: Axis = Axis.HORIZONTAL) -> float:
    """Arcminutes per pixel along one axis (linear, no optics correction).

    Args:
        display: Display to measure
        axis: Horizontal or vertical

    Returns:
        fov_deg * 60 / px for the axis
    """
    fov_deg, px = _fov(display, axis)
    return fov_deg * ARCMIN_PER_DEG / px


def periphery_resolution(display: DisplaySpec, inset: InsetSpec, axis: Axis = Axis.HORIZONTAL) -> float:
    """Arcminutes per pixel of the low-detail view stretched over the whole display."""
    fov_deg, _ = _fov(display, axis)
    px = inset.periphery_h_px if axis is Axis.HORIZONTAL else inset.periphery_v_px
    return fov_deg * ARCMIN_PER_DEG / px


def inset_area_fraction(display: DisplaySpec, inset: InsetSpec) -> float:
    """Share of the display area covered by the inset."""
    check_inset_fits(display, inset)
    return (inset.h_extent_deg * inset.v_extent_deg) / (display.hfov_deg * display.vfov_deg)


def degraded_area_fraction(display: DisplaySpec, inset: InsetSpec) -> float:
    """Share of the display area rendered at periphery resolution."""
    return 1.0 - inset_area_fraction(display, inset)


def pixel_budget(display: DisplaySpec, inset: InsetSpec) -> PixelBudget:
    """Pixels rendered for a composite frame versus a full high-detail frame.

    Inset pixel counts round half up per axis; savings are clamped to [0, 1].
    """
    check_inset_fits(display, inset)
    full_hi_px = display.h_px * display.v_px
    inset_h = _round_half_up(display.h_px * inset.h_extent_deg / display.hfov_deg)
    inset_v = _round_half_up(display.v_px * inset.v_extent_deg / display.vfov_deg)
    inset_hi_px = inset_h * inset_v
    periphery_lo_px = inset.periphery_h_px * inset.periphery_v_px
    composite_px = inset_hi_px + periphery_lo_px
    savings = 1.0 - composite_px / full_hi_px if full_hi_px > 0 else 0.0
    return PixelBudget(
        full_hi_px=full_hi_px,
        inset_hi_px=inset_hi_px,
        periphery_lo_px=periphery_lo_px,
        composite_px=composite_px,
        savings_fraction=min(1.0, max(0.0, savings)),
    )


def resolvable(feature_deg: float, resolution_arcmin_per_px: float, min_pixels: float = DEFAULT_MIN_PIXELS) -> bool:
    """Whether a feature spans at least ``min_pixels`` pixels (inclusive).

    Raises:
        ConfigurationError: If either argument is not positive
    """
    if feature_deg <= 0 or resolution_arcmin_per_px <= 0:
        raise ConfigurationError("feature size and resolution must be positive")
    return feature_deg * ARCMIN_PER_DEG / resolution_arcmin_per_px >= min_pixels


def effective_extent(inset: InsetSpec) -> tuple[float, float]:
    """Inset extent left fully high-detail once the blend band is trimmed from each edge."""
    band = 2.0 * inset.blend_band_deg
    return max(0.0, inset.h_extent_deg - band), max(0.0, inset.v_extent_deg - band)


def eye_only_constraint(inset: InsetSpec | None, axis: Axis, display: DisplaySpec | None = None) -> float:
    """Largest eye eccentricity on an axis that keeps the fixation inside the high-detail inset.

    No inset, or an inset spanning the display on this axis, leaves the axis
    unconstrained (``math.inf``).
    """
    if inset is None:
        return math.inf
    extent = _inset_extent(inset, axis)
    if display is not None and extent >= _fov(display, axis)[0]:
        return math.inf
    return max(0.0, extent / 2.0 - inset.blend_band_deg)
