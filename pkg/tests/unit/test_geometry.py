"""Tests for display geometry and pixel budgets."""

import math

import numpy as np
import pytest
from pydantic import ValidationError

from services.lod.geometry import (
    angular_resolution,
    degraded_area_fraction,
    effective_extent,
    eye_only_constraint,
    inset_area_fraction,
    periphery_resolution,
    pixel_budget,
    resolvable,
)
from shared.errors import ConfigurationError
from shared.types import FLIGHT_HELMET, Axis, DisplaySpec, InsetSpec

CAVE = DisplaySpec(hfov_deg=270.0, vfov_deg=270.0, h_px=4096, v_px=4096)


def inset(h: float, v: float, periphery: tuple[int, int] = (42, 28), band: float = 2.0) -> InsetSpec:
    return InsetSpec(
        h_extent_deg=h, v_extent_deg=v, periphery_h_px=periphery[0], periphery_v_px=periphery[1], blend_band_deg=band
    )


class TestDisplaySpec:
    """Tests for display validation and parsing."""

    @pytest.mark.unit
    def test_flight_helmet_constant(self) -> None:
        assert (FLIGHT_HELMET.hfov_deg, FLIGHT_HELMET.vfov_deg, FLIGHT_HELMET.h_px, FLIGHT_HELMET.v_px) == (
            75.3,
            58.4,
            208,
            139,
        )

    @pytest.mark.unit
    @pytest.mark.parametrize(
        "fields",
        [
            {"hfov_deg": 0, "vfov_deg": 58.4, "h_px": 208, "v_px": 139},
            {"hfov_deg": 361, "vfov_deg": 58.4, "h_px": 208, "v_px": 139},
            {"hfov_deg": 75.3, "vfov_deg": 58.4, "h_px": 0, "v_px": 139},
        ],
    )
    def test_invalid_display_rejected(self, fields: dict[str, float]) -> None:
        with pytest.raises(ValidationError):
            DisplaySpec.model_validate(fields)

    @pytest.mark.unit
    def test_json_unknown_field_rejected(self) -> None:
        with pytest.raises(ValidationError):
            DisplaySpec.model_validate_json('{"hfov_deg": 90, "vfov_deg": 90, "h_px": 10, "v_px": 10, "dpi": 3}')

    @pytest.mark.unit
    def test_inset_json_round_trip_fields(self) -> None:
        parsed = InsetSpec.model_validate_json(
            '{"h_extent_deg": 30, "v_extent_deg": 20, "periphery_h_px": 42, "periphery_v_px": 28, "blend_band_deg": 1}'
        )
        assert parsed == inset(30, 20, band=1.0)


class TestAngularResolution:
    """Tests for arcmin-per-pixel arithmetic."""

    @pytest.mark.unit
    def test_flight_helmet_horizontal(self) -> None:
        value = angular_resolution(FLIGHT_HELMET, Axis.HORIZONTAL)
        assert value == pytest.approx(21.72, abs=0.005)
        assert abs(value - 21.74) < 0.05

    @pytest.mark.unit
    def test_unit_display(self) -> None:
        assert angular_resolution(DisplaySpec(hfov_deg=90, vfov_deg=90, h_px=5400, v_px=5400)) == 1.0

    @pytest.mark.unit
    def test_periphery_resolution(self) -> None:
        assert periphery_resolution(FLIGHT_HELMET, inset(30, 30)) == pytest.approx(107.57, abs=0.05)

    @pytest.mark.unit
    def test_vertical_axis(self) -> None:
        assert angular_resolution(FLIGHT_HELMET, Axis.VERTICAL) == pytest.approx(58.4 * 60 / 139)

    @pytest.mark.unit
    def test_doubling_pixels_halves_resolution(self) -> None:
        doubled = DisplaySpec(hfov_deg=75.3, vfov_deg=58.4, h_px=416, v_px=278)
        for axis in Axis:
            assert angular_resolution(doubled, axis) == angular_resolution(FLIGHT_HELMET, axis) / 2


class TestAreaFractions:
    """Tests for inset and degraded area fractions."""

    @pytest.mark.unit
    def test_cave_inset_fraction(self) -> None:
        assert inset_area_fraction(CAVE, inset(30, 30)) == pytest.approx(0.012346, abs=0.0005)

    @pytest.mark.unit
    def test_full_display_inset(self) -> None:
        full = inset(75.3, 58.4)
        assert inset_area_fraction(FLIGHT_HELMET, full) == 1.0
        assert degraded_area_fraction(FLIGHT_HELMET, full) == 0.0

    @pytest.mark.unit
    def test_flight_helmet_fractions(self) -> None:
        assert inset_area_fraction(FLIGHT_HELMET, inset(30, 30)) == pytest.approx(0.20466, abs=1e-5)
        assert degraded_area_fraction(FLIGHT_HELMET, inset(30, 30)) == pytest.approx(0.795, abs=0.005)
        assert degraded_area_fraction(FLIGHT_HELMET, inset(10, 10)) == pytest.approx(0.9773, abs=1e-4)

    @pytest.mark.unit
    def test_inset_exceeding_display_rejected(self) -> None:
        with pytest.raises(ConfigurationError):
            inset_area_fraction(FLIGHT_HELMET, inset(80, 30))
        with pytest.raises(ConfigurationError):
            degraded_area_fraction(FLIGHT_HELMET, inset(30, 60))

    @pytest.mark.unit
    def test_fractions_sum_to_one_and_are_monotone(self) -> None:
        rng = np.random.default_rng(11)
        for _ in range(500):
            h, v = rng.uniform(1, 75.3), rng.uniform(1, 58.4)
            grow = rng.uniform(0, 1)
            small, large = inset(h, v), inset(min(75.3, h + grow), v)
            assert inset_area_fraction(FLIGHT_HELMET, small) + degraded_area_fraction(
                FLIGHT_HELMET, small
            ) == pytest.approx(1.0, abs=1e-15)
            assert inset_area_fraction(FLIGHT_HELMET, large) >= inset_area_fraction(FLIGHT_HELMET, small)
            assert degraded_area_fraction(FLIGHT_HELMET, large) <= degraded_area_fraction(FLIGHT_HELMET, small)


class TestPixelBudget:
    """Tests for composite frame pixel budgets."""

    @pytest.mark.unit
    def test_forty_degree_inset(self) -> None:
        budget = pixel_budget(FLIGHT_HELMET, inset(40, 40))
        assert budget.full_hi_px == 208 * 139
        assert budget.inset_hi_px == 110 * 95
        assert budget.periphery_lo_px == 1176
        assert budget.composite_px == budget.inset_hi_px + budget.periphery_lo_px
        assert budget.savings_fraction == pytest.approx(0.598, abs=0.001)

    @pytest.mark.unit
    def test_ten_degree_inset(self) -> None:
        budget = pixel_budget(FLIGHT_HELMET, inset(10, 10))
        assert budget.inset_hi_px == 28 * 24 == 672
        assert budget.composite_px == 1848
        assert budget.savings_fraction == pytest.approx(0.936, abs=0.001)

    @pytest.mark.unit
    def test_full_display_savings_clamped_to_zero(self) -> None:
        budget = pixel_budget(FLIGHT_HELMET, inset(75.3, 58.4, periphery=(1, 1)))
        assert budget.composite_px == budget.full_hi_px + 1
        assert budget.savings_fraction == 0.0

    @pytest.mark.unit
    def test_zero_periphery_disallowed(self) -> None:
        with pytest.raises(ValidationError):
            inset(30, 30, periphery=(0, 0))

    @pytest.mark.unit
    def test_savings_monotone_in_extent(self) -> None:
        savings = [pixel_budget(FLIGHT_HELMET, inset(e, min(e, 58.4))).savings_fraction for e in range(5, 76, 5)]
        assert all(a >= b for a, b in zip(savings, savings[1:], strict=False))


class TestResolvable:
    """Tests for the two-pixel resolvability rule."""

    @pytest.mark.unit
    def test_feature_in_inset(self) -> None:
        assert resolvable(3.0, 21.72) is True

    @pytest.mark.unit
    def test_feature_in_periphery(self) -> None:
        assert resolvable(3.0, 107.57) is False

    @pytest.mark.unit
    def test_boundary_inclusive(self) -> None:
        assert resolvable(1.0, 30.0) is True

    @pytest.mark.unit
    @pytest.mark.parametrize(("feature", "resolution"), [(0.0, 20.0), (3.0, 0.0), (-1.0, 20.0)])
    def test_non_positive_rejected(self, feature: float, resolution: float) -> None:
        with pytest.raises(ConfigurationError):
            resolvable(feature, resolution)

    @pytest.mark.unit
    def test_monotone(self) -> None:
        rng = np.random.default_rng(5)
        for _ in range(1000):
            feature, resolution = rng.uniform(0.1, 10), rng.uniform(1, 200)
            if resolvable(feature, resolution):
                assert resolvable(feature * 1.5, resolution)
                assert resolvable(feature, resolution / 1.5)


class TestInsetConstraints:
    """Tests for blend-band trimming."""

    @pytest.mark.unit
    def test_effective_extent(self) -> None:
        assert effective_extent(inset(20, 10)) == (16.0, 6.0)
        assert effective_extent(inset(3, 3)) == (0.0, 0.0)

    @pytest.mark.unit
    def test_eye_only_constraint(self) -> None:
        assert eye_only_constraint(inset(20, 20), Axis.HORIZONTAL) == 8.0
        assert eye_only_constraint(None, Axis.VERTICAL) == math.inf
        assert eye_only_constraint(inset(75.3, 20), Axis.HORIZONTAL, FLIGHT_HELMET) == math.inf
        assert eye_only_constraint(inset(75.3, 20), Axis.VERTICAL, FLIGHT_HELMET) == 8.0
