"""Gaze parameter files.

Kinematics are calibration outputs, so they live in a JSON file next to this
module rather than in code. The file carries a ``provenance`` block describing
how the values were obtained.
"""

import json
import logging
from pathlib import Path
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from shared.errors import ConfigurationError
from shared.types import GazeParams

logger = logging.getLogger(__name__)

# Directory containing the shipped calibrated parameter file
CALIBRATED_DIR = Path(__file__).parent / "calibrated"
DEFAULT_PARAMS_FILE = CALIBRATED_DIR / "gaze_params.json"


class GazeParamsFile(BaseModel):
    """On-disk layout of a parameter file."""

    model_config = ConfigDict(extra="forbid")

    provenance: dict[str, Any] = Field(default_factory=dict, description="How the parameters were obtained")
    params: GazeParams


def load_gaze_params(path: Path | None = None) -> GazeParams:
    """Load gaze parameters from ``path`` or the shipped calibrated file.

    Raises:
        ConfigurationError: If the file is missing, not JSON, or fails validation
    """
    path = path or DEFAULT_PARAMS_FILE
    try:
        document = GazeParamsFile.model_validate_json(path.read_text(encoding="utf-8"))
    except FileNotFoundError as e:
        raise ConfigurationError(f"parameter file not found: {path}") from e
    except ValidationError as e:
        raise ConfigurationError(f"invalid parameter file {path}: {e}") from e

    logger.debug("Loaded gaze parameters", extra={"path": str(path), "provenance": document.provenance})
    return document.params


def save_gaze_params(params: GazeParams, path: Path, provenance: dict[str, Any] | None = None) -> None:
    """Write a parameter file with its provenance block."""
    document = GazeParamsFile(provenance=provenance or {}, params=params)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(document.model_dump(mode="json"), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    logger.info("Wrote gaze parameters", extra={"path": str(path)})
