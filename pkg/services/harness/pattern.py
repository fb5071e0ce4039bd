"""Checks that a grid of condition means shows the expected inset-size pattern.

Only the contrasts that were reliable in the human data are tested: 10 degree
insets are slower than 30 and 40 degree insets along each axis, and a 40x40
inset performs like the undegraded display. Individual cells are not compared.
"""

import logging
import math
import warnings
from collections import defaultdict
from statistics import fmean
from typing import Any

from scipy.stats import spearmanr

from services.harness.reference import EXTENTS_DEG, ReferenceTable
from shared.errors import ConfigurationError
from shared.types import ConditionStats, PatternReport

logger = logging.getLogger(__name__)

DEFAULT_MARGIN_S = 0.1
DEFAULT_TOLERANCE = 0.1


def _grid(stats: list[ConditionStats]) -> tuple[dict[tuple[int, int], float], float]:
    cells: dict[tuple[int, int], float] = {}
    undegraded: float | None = None
    for row in stats:
        if row.h_extent_deg is None or row.v_extent_deg is None:
            undegraded = row.mean_time_present_s
        else:
            cells[(round(row.h_extent_deg), round(row.v_extent_deg))] = row.mean_time_present_s

    missing = [key for key in ((h, v) for h in EXTENTS_DEG for v in EXTENTS_DEG) if key not in cells]
    if missing or undegraded is None:
        raise ConfigurationError(
            f"pattern check needs the full {len(EXTENTS_DEG)}x{len(EXTENTS_DEG)} grid and the undegraded row; "
            f"missing cells {missing}, undegraded {'present' if undegraded is not None else 'missing'}"
        )
    return cells, undegraded


def _rank_correlation(simulated: list[float], reference: list[float]) -> float | None:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        rho = float(spearmanr(simulated, reference)[0])
    return None if math.isnan(rho) else rho


def shape_effect(stats: list[ConditionStats]) -> dict[str, Any]:
    """Compare spread between same-area shapes with spread between areas.

    Returns:
        ``within_area_spread_s`` (mean max-min gap among insets sharing an
        area), ``between_area_spread_s`` (max-min gap of per-area means) and
        ``area_dominates``.
    """
    by_area: dict[float, list[float]] = defaultdict(list)
    for row in stats:
        if row.h_extent_deg is not None and row.v_extent_deg is not None:
            by_area[row.h_extent_deg * row.v_extent_deg].append(row.mean_time_present_s)

    shared = [times for times in by_area.values() if len(times) > 1]
    within = fmean(max(times) - min(times) for times in shared) if shared else 0.0
    area_means = [fmean(times) for times in by_area.values()]
    between = max(area_means) - min(area_means) if area_means else 0.0
    return {
        "within_area_spread_s": within,
        "between_area_spread_s": between,
        "area_dominates": between > within,
    }


def check_pattern(
    stats: list[ConditionStats],
    reference: ReferenceTable,
    margin_s: float = DEFAULT_MARGIN_S,
    tolerance: float = DEFAULT_TOLERANCE,
) -> PatternReport:
    """Evaluate the inset-size pattern on a full grid of condition means.

    Raises:
        ConfigurationError: If any grid cell or the undegraded row is missing
    """
    cells, undegraded = _grid(stats)

    horizontal = {h: fmean(cells[(h, v)] for v in EXTENTS_DEG) for h in EXTENTS_DEG}
    vertical = {v: fmean(cells[(h, v)] for h in EXTENTS_DEG) for v in EXTENTS_DEG}

    def slower_at_10(marginals: dict[int, float]) -> bool:
        return all(marginals[10] - marginals[extent] >= margin_s for extent in (30, 40))

    keys = sorted(cells)
    report = PatternReport(
        horizontal_10_slower=slower_at_10(horizontal),
        vertical_10_slower=slower_at_10(vertical),
        large_inset_matches_undegraded=abs(cells[(40, 40)] - undegraded) <= tolerance * undegraded,
        rank_correlation=_rank_correlation([cells[key] for key in keys], [reference.mean_time_s[key] for key in keys]),
        horizontal_marginals={str(extent): value for extent, value in horizontal.items()},
        vertical_marginals={str(extent): value for extent, value in vertical.items()},
        margin_s=margin_s,
        tolerance=tolerance,
        details={
            "undegraded_s": undegraded,
            "inset_40x40_s": cells[(40, 40)],
            "min_accuracy": min(row.accuracy_present for row in stats),
            "shape": shape_effect(stats),
        },
    )
    logger.info("Pattern check", extra={"passed": report.passed, "rank_correlation": report.rank_correlation})
    return report
