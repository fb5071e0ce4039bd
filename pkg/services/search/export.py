"""Serialization of trials, results and fixation logs."""

import csv
from collections.abc import Iterable
from typing import TextIO

from pydantic import TypeAdapter

from shared.types import Trial, TrialResult

FIXATION_COLUMNS = ("trial_id", "fixation_index", "object_index", "kind", "duration_s")

_trials_adapter = TypeAdapter(list[Trial])
_results_adapter = TypeAdapter(list[TrialResult])


def write_fixations_csv(results: Iterable[tuple[int, TrialResult]], stream: TextIO) -> None:
    """Write one row per fixation for ``(trial_id, result)`` pairs."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(FIXATION_COLUMNS)
    for trial_id, result in results:
        for fixation_index, fixation in enumerate(result.fixations):
            writer.writerow(
                (
                    trial_id,
                    fixation_index,
                    fixation.object_index,
                    fixation.shift.kind.value,
                    f"{fixation.shift.duration_s:.6f}",
                )
            )


def trials_to_json(trials: list[Trial]) -> str:
    return _trials_adapter.dump_json(trials, indent=2).decode()


def trials_from_json(text: str) -> list[Trial]:
    return _trials_adapter.validate_json(text)


def results_to_json(results: list[TrialResult]) -> str:
    return _results_adapter.dump_json(results, indent=2).decode()
