"""Results CSV: one row per condition, undegraded extents left blank."""

import csv
import io
from collections.abc import Iterable
from typing import TextIO

from shared.types import ConditionStats

RESULT_COLUMNS = ("h_extent_deg", "v_extent_deg", "n", "mean_time_present_s", "sd_time_s", "accuracy_present")


def _fixed(value: float | None) -> str:
    return "" if value is None else f"{value:.6f}"


def write_results_csv(stats: Iterable[ConditionStats], stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(RESULT_COLUMNS)
    for row in stats:
        writer.writerow(
            (
                _fixed(row.h_extent_deg),
                _fixed(row.v_extent_deg),
                row.n,
                _fixed(row.mean_time_present_s),
                _fixed(row.sd_time_s),
                _fixed(row.accuracy_present),
            )
        )


def results_csv_text(stats: Iterable[ConditionStats]) -> str:
    buffer = io.StringIO()
    write_results_csv(stats, buffer)
    return buffer.getvalue()
