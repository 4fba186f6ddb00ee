"""Associates the detections of a frame with instances of the table."""
from dataclasses import dataclass, field
from typing import Dict, List

import numpy as np
from scipy.optimize import linear_sum_assignment
from toolz import groupby

from delib_agent import config, logger


@dataclass
class MatchResult:
    assignments: Dict[int, str] = field(default_factory=dict)
    created: List[str] = field(default_factory=list)
    removed: List[str] = field(default_factory=list)
    released: List[int] = field(default_factory=list)


def assign_pairs(cost, exact_limit=None):
    """Minimum total-cost pairing of rows and columns.

    Exact for small matrices, greedy nearest pair first otherwise. Pairs
    are returned sorted by row.
    """
    exact_limit = config["world"]["exact_assignment_limit"] if exact_limit is None else exact_limit
    n_rows, n_cols = cost.shape
    if n_rows == 0 or n_cols == 0:
        return []
    if max(n_rows, n_cols) <= exact_limit:
        rows, cols = linear_sum_assignment(cost)
        return sorted(zip(rows.tolist(), cols.tolist()))
    order = sorted(
        ((float(cost[i, j]), i, j) for i in range(n_rows) for j in range(n_cols))
    )
    used_rows, used_cols, pairs = set(), set(), []
    for _, i, j in order:
        if i in used_rows or j in used_cols:
            continue
        pairs.append((i, j))
        used_rows.add(i)
        used_cols.add(j)
    return sorted(pairs)


def _visible_now(record, visible):
    shape = visible.shape
    return any(visible[v] for v in record.voxels if all(0 <= c < s for c, s in zip(v, shape)))


def match_instances(detections, table, visible, step=-1, excluded=(), exact_limit=None):
    """Updates the table with one frame of detections.

    Per category, detections are paired with the instances visible now by
    minimum centroid distance. Surplus detections become new instances and
    surplus visible instances are deleted. Matched voxel masks are merged by
    union, or replaced when the instance's mask is a stale estimate. Stale
    instances take part in the pairing even when not visible and are never
    deleted.

    Args:
        detections (list): ProjectedDetection of the current frame.
        table (InstanceTable): Updated in place.
        visible (`np.ndarray`): Visibility mask of the frame.
        step (int): Step index stored as last-seen.
        excluded (iterable): Instance ids exempt from matching (held, or
            inside a closed container).
        exact_limit (int): Largest count solved with exact assignment.

    Returns:
        (MatchResult)

    """
    excluded = set(excluded)
    result = MatchResult()
    by_category = groupby(lambda d: d.category, detections)
    categories = set(by_category)
    candidates = {}
    for record in table:
        if record.id in excluded:
            continue
        if record.stale or _visible_now(record, visible):
            candidates.setdefault(record.category, []).append(record)
            categories.add(record.category)

    for category in sorted(categories):
        frame = sorted(by_category.get(category, []), key=lambda d: d.key)
        known = candidates.get(category, [])
        cost = np.zeros((len(frame), len(known)))
        for i, detection in enumerate(frame):
            for j, record in enumerate(known):
                cost[i, j] = np.linalg.norm(detection.centroid - record.centroid)
        pairs = assign_pairs(cost, exact_limit)
        matched_rows = {i for i, _ in pairs}
        matched_cols = {j for _, j in pairs}
        for i, j in pairs:
            record, detection = known[j], frame[i]
            if record.stale:
                record.voxels = set(detection.voxels)
                record.stale = False
            else:
                record.voxels |= detection.voxels
            record.last_seen = step
            result.assignments[detection.key] = record.id
        for i, detection in enumerate(frame):
            if i not in matched_rows:
                record = table.register(category, detection.voxels, step)
                result.assignments[detection.key] = record.id
                result.created.append(record.id)
        for j, record in enumerate(known):
            if j not in matched_cols and not record.stale:
                table.remove(record.id)
                result.removed.append(record.id)
                result.released.append(record.handle)
    if result.created or result.removed:
        logger.debug(f"Matching: new {result.created}, removed {result.removed}")
    return result
