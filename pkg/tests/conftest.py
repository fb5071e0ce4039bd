"""Shared fixtures."""

import pytest

from shared.types import GazeParams, ProtocolSpec


@pytest.fixture
def params() -> GazeParams:
    """Kinematics with round numbers so expected times are easy to work out by hand."""
    return GazeParams(eye_latency_s=0.2, eye_velocity_dps=400.0, head_velocity_dps=40.0, dwell_s=0.65)


@pytest.fixture
def protocol() -> ProtocolSpec:
    """Default protocol without slips, so every trial is correct."""
    return ProtocolSpec(slip_probability=0.0)
