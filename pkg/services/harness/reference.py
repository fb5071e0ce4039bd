"""Reference search times and accuracies from the human-subjects inset study.

Target-present means in seconds and percentage correct, rows by horizontal
inset extent and columns by vertical extent. The undegraded 75 x 58 degree
display is the baseline.
"""

from collections.abc import Mapping
from dataclasses import dataclass, field
from types import MappingProxyType

from shared.types import ConditionStats

EXTENTS_DEG = (10, 20, 30, 40)

# (h_extent, v_extent) -> (mean seconds, percent correct)
_TABLE: dict[tuple[int, int], tuple[float, float]] = {
    (10, 10): (4.147, 92.1),
    (10, 20): (4.150, 97.6),
    (10, 30): (4.058, 96.5),
    (10, 40): (3.538, 95.4),
    (20, 10): (3.721, 97.3),
    (20, 20): (3.552, 93.3),
    (20, 30): (3.398, 98.2),
    (20, 40): (3.448, 99.1),
    (30, 10): (3.601, 97.3),
    (30, 20): (3.451, 95.9),
    (30, 30): (2.876, 94.6),
    (30, 40): (3.147, 94.1),
    (40, 10): (3.808, 99.1),
    (40, 20): (3.105, 95.8),
    (40, 30): (3.281, 92.6),
    (40, 40): (3.061, 95.8),
}


@dataclass(frozen=True)
class ReferenceTable:
    """Immutable reference grid plus the undegraded baseline.

    Attributes:
        mean_time_s: (h, v) -> mean target-present search time in seconds
        accuracy_pct: (h, v) -> percentage of target-present trials correct
        undegraded_time_s: Baseline mean search time
        undegraded_accuracy_pct: Baseline accuracy
    """

    mean_time_s: Mapping[tuple[int, int], float] = field(
        default_factory=lambda: MappingProxyType({key: value[0] for key, value in _TABLE.items()})
    )
    accuracy_pct: Mapping[tuple[int, int], float] = field(
        default_factory=lambda: MappingProxyType({key: value[1] for key, value in _TABLE.items()})
    )
    undegraded_time_s: float = 2.85
    undegraded_accuracy_pct: float = 94.9

    def as_condition_stats(self) -> list[ConditionStats]:
        """Grid cells followed by the baseline, in the shape the harness produces."""
        rows = [
            ConditionStats(
                h_extent_deg=float(h),
                v_extent_deg=float(v),
                mean_time_present_s=self.mean_time_s[(h, v)],
                sd_time_s=0.0,
                accuracy_present=self.accuracy_pct[(h, v)] / 100.0,
                n=1,
            )
            for h, v in sorted(self.mean_time_s)
        ]
        rows.append(
            ConditionStats(
                mean_time_present_s=self.undegraded_time_s,
                sd_time_s=0.0,
                accuracy_present=self.undegraded_accuracy_pct / 100.0,
                n=1,
            )
        )
        return rows


REFERENCE = ReferenceTable()
