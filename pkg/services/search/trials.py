"""Trial generation for the clustered visual-search task.

Every trial is drawn from its own ``numpy`` generator seeded with the trial
seed, so a trial can be regenerated from ``(protocol, target_present, seed)``
alone. Trial seeds for a sweep derive from ``(master_seed, trial_index)``.
"""

import logging
import math

import numpy as np

from shared.errors import TrialGenerationError
from shared.types import Direction, HomeAnchor, ProtocolSpec, SceneObject, Trial

logger = logging.getLogger(__name__)


def derive_trial_seed(master_seed: int, trial_index: int) -> int:
    """64-bit seed for one trial, independent of how many trials are generated."""
    sequence = np.random.SeedSequence(master_seed, spawn_key=(trial_index,))
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def is_target_present(trial_index: int, present_absent_ratio: tuple[int, int]) -> bool:
    """Interleave present and absent trials in the configured ratio."""
    present, absent = present_absent_ratio
    return trial_index % (present + absent) < present


def _home_direction(protocol: ProtocolSpec, center: Direction) -> Direction:
    if protocol.home_anchor is HomeAnchor.CENTER:
        return center
    return (center[0] - protocol.cluster_extent[0] / 2.0, center[1])


def generate_trial(protocol: ProtocolSpec, target_present: bool, seed: int) -> Trial:
    """Place a cluster in the search space and scatter non-overlapping objects inside it.

    Args:
        protocol: Protocol to follow
        target_present: Whether one object is the target
        seed: 64-bit trial seed

    Returns:
        The generated trial

    Raises:
        TrialGenerationError: If an object cannot be placed within the attempt budget
    """
    rng = np.random.default_rng(seed)
    cluster_w, cluster_h = protocol.cluster_extent
    space_w, space_h = protocol.search_space

    center = (
        float(rng.uniform(-(space_w - cluster_w) / 2.0, (space_w - cluster_w) / 2.0)),
        float(rng.uniform(-(space_h - cluster_h) / 2.0, (space_h - cluster_h) / 2.0)),
    )

    placed: list[Direction] = []
    for index in range(protocol.n_objects):
        for _ in range(protocol.max_placement_attempts):
            candidate = (
                center[0] + float(rng.uniform(-cluster_w / 2.0, cluster_w / 2.0)),
                center[1] + float(rng.uniform(-cluster_h / 2.0, cluster_h / 2.0)),
            )
            if all(math.dist(candidate, other) >= protocol.object_size_deg for other in placed):
                placed.append(candidate)
                break
        else:
            logger.warning("Object placement exhausted", extra={"seed": seed, "object_index": index})
            raise TrialGenerationError(
                f"could not place object {index} of {protocol.n_objects} after "
                f"{protocol.max_placement_attempts} attempts (seed {seed})"
            )

    target_index = int(rng.integers(protocol.n_objects)) if target_present else -1
    low, high = protocol.onset_delay_range_s
    onset_delay = float(rng.uniform(low, high))

    return Trial(
        objects=[SceneObject(dir=direction, is_target=i == target_index) for i, direction in enumerate(placed)],
        target_present=target_present,
        onset_delay_s=onset_delay,
        seed=seed,
        home_dir=_home_direction(protocol, center),
    )
