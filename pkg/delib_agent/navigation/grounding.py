"""Where to stand and where to click to act on an instance."""
import math
from dataclasses import dataclass, field
from typing import FrozenSet, Tuple

import numpy as np

from delib_agent import config
from delib_agent.navigation.errors import NotVisible
from delib_agent.navigation.primitives import pitch_steps, turns
from delib_agent.world.geometry import (
    Camera,
    Pose,
    heading_towards,
    pitch_towards,
    reach_distance,
)


@dataclass(frozen=True)
class NavGoalRegion:
    """Cells the target is interactable from, with the view to take there.

    Each entry is (cell, heading, pitch). An entry with heading None accepts
    any view (exploration goals).
    """

    entries: FrozenSet[Tuple[tuple, object, object]] = field(default_factory=frozenset)

    def __bool__(self):
        return bool(self.entries)

    @property
    def cells(self):
        return sorted({cell for cell, _, _ in self.entries})

    def view(self, cell):
        """The (heading, pitch) to take at a cell of the region."""
        return min(
            ((h, p) for c, h, p in self.entries if c == tuple(cell)),
            key=lambda v: (v[0] is None, v),
        )

    @classmethod
    def at(cls, cell):
        return cls(frozenset({(tuple(cell), None, None)}))


def view_towards(pose, point):
    """Heading and pitch that bring a world point closest to the image center."""
    dx, dy = point[0] - pose.x, point[1] - pose.y
    return heading_towards(dx, dy), pitch_towards(math.hypot(dx, dy), point[2] - pose.z)


def face_primitives(pose, point):
    """Turns and pitch steps that face a point from where the agent stands."""
    heading, pitch = view_towards(pose, point)
    return turns(pose.heading, heading) + pitch_steps(pose.pitch, pitch)


def goal_region(
    grid, centroid, footprint=(), camera=None, reach=None, voxel_size=None, optimistic=False
):
    """Free cells within reach of a target that can also see it.

    Args:
        grid (OccupancyGrid): Traversability.
        centroid (tuple): Target centroid in meters.
        footprint (iterable): Cells the target covers; never goals. Reach is
            measured to the nearest of them, or to the centroid without one.
        camera (Camera): Used to check the target projects into the frame.
        reach (float): Interaction distance in meters.
        voxel_size (float): Cell size in meters.
        optimistic (bool): Accept cells never seen.

    Returns:
        (NavGoalRegion) Possibly empty.

    """
    camera = camera or Camera()
    reach = config["navigation"]["interaction_distance"] if reach is None else reach
    voxel_size = voxel_size or config["world"]["voxel_size"]
    footprint = {tuple(c) for c in footprint}
    span = int(math.ceil(reach / voxel_size)) + 1
    cells = footprint or {(int(centroid[0] // voxel_size), int(centroid[1] // voxel_size))}
    xs, ys = [c[0] for c in cells], [c[1] for c in cells]
    entries = set()
    for x in range(min(xs) - span, max(xs) + span + 1):
        for y in range(min(ys) - span, max(ys) + span + 1):
            if (x, y) in footprint or not grid.passable((x, y), optimistic):
                continue
            pose = Pose(0.0, 0.0).moved_to_cell((x, y), voxel_size)
            if footprint:
                distance = reach_distance(pose.x, pose.y, footprint, voxel_size)
            else:
                distance = math.hypot(centroid[0] - pose.x, centroid[1] - pose.y)
            if distance > reach + 1e-9:
                continue
            heading, pitch = view_towards(pose, centroid)
            seen = Pose(pose.x, pose.y, heading, pitch, pose.z)
            if camera.project(seen, centroid) is not None:
                entries.add(((x, y), heading, pitch))
    return NavGoalRegion(frozenset(entries))


def interaction_point(mask, instance_id=None):
    """The pixel to act on for an instance's visible mask.

    The centroid pixel when it lies on the mask, otherwise the mask pixel
    nearest to it (lowest row, then column, on ties).

    Args:
        mask (`np.ndarray`): Boolean (height, width) mask.
        instance_id (str): Named in the error.

    Returns:
        (tuple) Pixel (column, row).

    Raises:
        NotVisible: The mask is empty.

    """
    rows, cols = np.nonzero(mask)
    if rows.size == 0:
        raise NotVisible(instance_id)
    row, col = int(round(rows.mean())), int(round(cols.mean()))
    if mask[row, col]:
        return col, row
    d = (rows - row) ** 2 + (cols - col) ** 2
    order = np.lexsort((cols, rows, d))
    return int(cols[order[0]]), int(rows[order[0]])
