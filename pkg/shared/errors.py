"""Exception hierarchy.

The CLI maps configuration problems to exit code 2 and every other
``PerilodError`` to exit code 3.
"""

from typing import Any


class PerilodError(Exception):
    """Base class for all library errors."""


class ConfigurationError(PerilodError, ValueError):
    """Inputs that cannot describe a valid display, inset, task or experiment."""


class TrialGenerationError(PerilodError, RuntimeError):
    """Rejection sampling could not place every object."""


class SimulationError(PerilodError, RuntimeError):
    """A simulation could not be carried out."""


class CalibrationError(PerilodError, RuntimeError):
    """Calibration finished with a residual above the acceptance threshold."""

    def __init__(self, message: str, diagnostics: dict[str, Any] | None = None) -> None:
        super().__init__(message)
        self.diagnostics = diagnostics or {}
