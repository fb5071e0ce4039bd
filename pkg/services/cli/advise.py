"""Design advice for a peripherally degraded display."""

import logging

from pydantic import BaseModel, Field

from services.lod.geometry import (
    angular_resolution,
    degraded_area_fraction,
    effective_extent,
    inset_area_fraction,
    periphery_resolution,
    pixel_budget,
    resolvable,
)
from shared.types import Axis, DisplaySpec, InsetSpec, PixelBudget

logger = logging.getLogger(__name__)

DEFAULT_RULE_DEG = 30.0

PRESETS: dict[str, DisplaySpec] = {
    "flight-helmet": DisplaySpec(hfov_deg=75.3, vfov_deg=58.4, h_px=208, v_px=139),
    "cave": DisplaySpec(hfov_deg=270.0, vfov_deg=270.0, h_px=4096, v_px=4096),
}


class DesignReport(BaseModel):
    """Recommended inset and what it saves on a given display."""

    display: DisplaySpec
    inset: InsetSpec = Field(..., description="Smallest inset that should not slow search")
    rendered_extent_deg: tuple[float, float] = Field(..., description="Inset extent including the blend band")
    effective_extent_deg: tuple[float, float] = Field(..., description="Extent fully high-detail after blending")
    inset_fraction: float
    degraded_fraction: float
    budget: PixelBudget
    inset_resolution_arcmin: float
    periphery_resolution_arcmin: float
    feature_resolvable_in_inset: bool
    feature_resolvable_in_periphery: bool
    warnings: list[str] = Field(default_factory=list)


def build_design_report(
    display: DisplaySpec,
    periphery_px: tuple[int, int] = (42, 28),
    blend_band_deg: float = 2.0,
    rule_deg: float = DEFAULT_RULE_DEG,
    feature_deg: float = 3.0,
) -> DesignReport:
    """Apply the minimum-inset rule to a display and cost it out.

    When the display is narrower than the rule on an axis, the inset spans the
    whole axis and a warning says the display must stay high-detail there.
    """
    warnings: list[str] = []
    extents: list[float] = []
    for axis, fov in ((Axis.HORIZONTAL, display.hfov_deg), (Axis.VERTICAL, display.vfov_deg)):
        if fov < rule_deg:
            warnings.append(
                f"{axis.value} field of view {fov:g} deg is below the {rule_deg:g} deg rule; "
                "the full display must stay high-detail on this axis"
            )
            extents.append(fov)
        else:
            extents.append(rule_deg)

    inset = InsetSpec(
        h_extent_deg=extents[0],
        v_extent_deg=extents[1],
        periphery_h_px=periphery_px[0],
        periphery_v_px=periphery_px[1],
        blend_band_deg=blend_band_deg,
    )
    rendered = (
        min(display.hfov_deg, extents[0] + 2.0 * blend_band_deg),
        min(display.vfov_deg, extents[1] + 2.0 * blend_band_deg),
    )
    inset_res = angular_resolution(display, Axis.HORIZONTAL)
    periphery_res = periphery_resolution(display, inset, Axis.HORIZONTAL)

    for message in warnings:
        logger.warning(message)

    return DesignReport(
        display=display,
        inset=inset,
        rendered_extent_deg=rendered,
        effective_extent_deg=effective_extent(inset),
        inset_fraction=inset_area_fraction(display, inset),
        degraded_fraction=degraded_area_fraction(display, inset),
        budget=pixel_budget(display, inset),
        inset_resolution_arcmin=inset_res,
        periphery_resolution_arcmin=periphery_res,
        feature_resolvable_in_inset=resolvable(feature_deg, inset_res),
        feature_resolvable_in_periphery=resolvable(feature_deg, periphery_res),
        warnings=warnings,
    )


def format_report(report: DesignReport) -> str:
    display, inset, budget = report.display, report.inset, report.budget
    lines = [
        f"display: {display.hfov_deg:g} x {display.vfov_deg:g} deg, {display.h_px} x {display.v_px} px",
        f"recommended minimum inset: {inset.h_extent_deg:g} x {inset.v_extent_deg:g} deg "
        f"(render {report.rendered_extent_deg[0]:g} x {report.rendered_extent_deg[1]:g} deg "
        f"with {inset.blend_band_deg:g} deg blend band)",
        f"effective high-detail extent: {report.effective_extent_deg[0]:g} x {report.effective_extent_deg[1]:g} deg",
        f"inset area fraction: {report.inset_fraction:.2%}",
        f"degraded area fraction: {report.degraded_fraction:.2%}",
        f"pixels: full {budget.full_hi_px}, inset {budget.inset_hi_px}, periphery {budget.periphery_lo_px}, "
        f"composite {budget.composite_px}",
        f"pixel savings: {budget.savings_fraction:.2%}",
        f"resolution: inset {report.inset_resolution_arcmin:.2f} arcmin/px, "
        f"periphery {report.periphery_resolution_arcmin:.2f} arcmin/px",
        f"feature resolvable: inset {'yes' if report.feature_resolvable_in_inset else 'no'}, "
        f"periphery {'yes' if report.feature_resolvable_in_periphery else 'no'}",
    ]
    lines.extend(f"warning: {message}" for message in report.warnings)
    return "\n".join(lines)
