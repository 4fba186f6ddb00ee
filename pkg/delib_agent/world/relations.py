"""Support relations predicted from 2D boxes."""


def predict_on_relation(bbox_a, bbox_b, category_a, category_b, affordances):
    """True iff A is predicted to rest on B.

    Boxes are pixel rectangles (x1, y1, x2, y2) with the origin top-left
    and y growing downwards. A rests on B when the pair is allowed, A's
    horizontal center lies within B, A's bottom reaches B's top and A's
    vertical center is not below B's bottom.
    """
    if not affordances.can_hold(category_b, category_a):
        return False
    xa1, ya1, xa2, ya2 = bbox_a
    xb1, yb1, xb2, yb2 = bbox_b
    return (
        xb1 <= (xa1 + xa2) / 2 <= xb2
        and ya2 >= yb1
        and (ya1 + ya2) / 2 <= yb2
    )


def _bottom(voxels):
    """Lowest level of a voxel set and the cells it covers there."""
    low = min(v[2] for v in voxels)
    return low, {(x, y) for x, y, z in voxels if z == low}


def rests_on(child_voxels, parent_voxels):
    """True iff the child's lowest layer sits on or inside the parent.

    Every cell of that layer must lie in the parent's footprint, and the
    layer must be between the parent's lowest level and one above its top.

    Returns:
        (bool)

    """
    if not child_voxels or not parent_voxels:
        return False
    low, cells = _bottom(child_voxels)
    footprint = {(x, y) for x, y, _ in parent_voxels}
    levels = [v[2] for v in parent_voxels]
    return cells <= footprint and min(levels) <= low <= max(levels) + 1


def infer_parents(detections, assignments, table, affordances):
    """Updates believed supports from one frame.

    A candidate support of a pickupable detection must be an allowed
    receptacle, pass `predict_on_relation` on the two boxes and hold the
    detection's lowest voxels per `rests_on`. The candidate with the
    highest top wins, then the one with the smallest box. Relations
    written by the agent's own actions are kept.

    Args:
        detections (list): ProjectedDetection of the frame.
        assignments (dict): Frame key to instance id.
        table (InstanceTable): Updated in place.
        affordances (AffordanceTable): Receptibility of category pairs.

    Returns:
        (dict): Instance id to the parent id that was written.

    """
    written = {}
    by_key = {d.key: d for d in detections if d.key in assignments and d.voxels}
    for key in sorted(by_key):
        detection = by_key[key]
        record = table.get(assignments[key])
        if record.relation_authoritative or not affordances[record.category].pickupable:
            continue
        supports = []
        for other_key in sorted(by_key):
            other = by_key[other_key]
            if other_key == key or assignments[other_key] == record.id:
                continue
            if not predict_on_relation(
                detection.bbox, other.bbox, detection.category, other.category, affordances
            ):
                continue
            voxels = set(other.voxels) | set(table.get(assignments[other_key]).voxels)
            if not rests_on(detection.voxels, voxels):
                continue
            x1, y1, x2, y2 = other.bbox
            top = max(v[2] for v in voxels)
            supports.append((-top, (x2 - x1) * (y2 - y1), other_key))
        if supports:
            parent = assignments[min(supports)[2]]
            if parent != record.id and record.id not in table.ancestors(parent):
                record.parent = parent
                written[record.id] = parent
    return written
