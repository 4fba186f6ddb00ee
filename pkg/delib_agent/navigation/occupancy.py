"""2D traversability grid derived from the voxel map."""
import math
from dataclasses import dataclass

import numpy as np

from delib_agent import config

FREE = 0
BLOCKED = 1
UNKNOWN = 2


def band_levels(voxel_size=None, band=None):
    """Voxel z indices whose occupancy blocks the agent."""
    voxel_size = voxel_size or config["world"]["voxel_size"]
    low, high = band or config["navigation"]["obstacle_band"]
    return int(math.floor(low / voxel_size + 1e-9)), int(math.ceil(high / voxel_size - 1e-9))


@dataclass
class OccupancyGrid:
    """Cells of the map footprint, indexed [x, y]."""

    cells: np.ndarray

    @property
    def shape(self):
        return self.cells.shape

    def in_bounds(self, cell):
        return 0 <= cell[0] < self.cells.shape[0] and 0 <= cell[1] < self.cells.shape[1]

    def state(self, cell):
        return int(self.cells[cell])

    def is_free(self, cell):
        return self.in_bounds(cell) and self.cells[cell] == FREE

    def passable(self, cell, optimistic=False):
        """Free cells, plus unknown ones when exploring optimistically."""
        if not self.in_bounds(cell):
            return False
        value = self.cells[cell]
        return value == FREE or (optimistic and value == UNKNOWN)

    def frontier(self):
        """Free cells with a 4-neighbour that was never seen, sorted."""
        cells = []
        xs, ys = np.nonzero(self.cells == FREE)
        for x, y in sorted(zip(xs.tolist(), ys.tolist())):
            for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                neighbour = (x + dx, y + dy)
                if self.in_bounds(neighbour) and self.cells[neighbour] == UNKNOWN:
                    cells.append((x, y))
                    break
        return cells

    def to_text(self):
        chars = {FREE: ".", BLOCKED: "#", UNKNOWN: " "}
        return "\n".join(
            "".join(chars[int(self.cells[x, y])] for x in range(self.shape[0]))
            for y in range(self.shape[1])
        )

    @classmethod
    def from_blocked(cls, shape, blocked):
        """Fully known grid with the given blocked cells."""
        cells = np.full(shape, FREE, dtype=np.int8)
        for cell in blocked:
            if 0 <= cell[0] < shape[0] and 0 <= cell[1] < shape[1]:
                cells[cell] = BLOCKED
        return cls(cells)


def build_occupancy(voxel_map, exempt_handles=(), band=None):
    """Projects the obstacle band of a voxel map to 2D.

    A cell is free once its floor was seen, and blocked when a band voxel
    is occupied by something other than the exempt instances or when the
    agent bumped into it. Everything else is unknown.

    Args:
        voxel_map (VoxelMap): Source map.
        exempt_handles (iterable): Owner handles that never block (targets).
        band (tuple): Obstacle heights in meters.

    Returns:
        (OccupancyGrid)

    """
    low, high = band_levels(voxel_map.voxel_size, band)
    occupied = voxel_map.occupied[:, :, low:high].copy()
    exempt = list(exempt_handles)
    if exempt:
        occupied &= ~np.isin(voxel_map.owner[:, :, low:high], exempt)
    blocked = occupied.any(axis=2) | voxel_map.collisions
    cells = np.full(voxel_map.dims[:2], UNKNOWN, dtype=np.int8)
    cells[voxel_map.floor_seen] = FREE
    cells[blocked] = BLOCKED
    return OccupancyGrid(cells)
