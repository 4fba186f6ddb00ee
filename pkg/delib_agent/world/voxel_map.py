"""Dense semantic voxel grid built from projected observations."""
import json

import numpy as np

from delib_agent import config

NO_OWNER = -1


class VoxelMap:
    """Occupancy, owning instance and last-seen step per voxel.

    The map origin is the scene corner; voxel (i, j, k) spans
    [i, i + 1) * voxel_size along each axis.

    Args:
        dims (tuple): Voxel counts along x, y and z.
        voxel_size (float): Edge length in meters.

    """

    def __init__(self, dims, voxel_size=None):
        self.dims = tuple(int(d) for d in dims)
        self.voxel_size = voxel_size or config["world"]["voxel_size"]
        self.occupied = np.zeros(self.dims, dtype=bool)
        self.owner = np.full(self.dims, NO_OWNER, dtype=np.int32)
        self.last_seen = np.full(self.dims, -1, dtype=np.int32)
        self.visible = np.zeros(self.dims, dtype=bool)
        self.floor_seen = np.zeros(self.dims[:2], dtype=bool)
        self.collisions = np.zeros(self.dims[:2], dtype=bool)

    def in_bounds(self, voxel):
        return all(0 <= v < d for v, d in zip(voxel, self.dims))

    def voxel_of(self, point):
        return tuple(int(np.floor(c / self.voxel_size)) for c in point)

    def center(self, voxel):
        return (np.asarray(voxel, dtype=float) + 0.5) * self.voxel_size

    def integrate(self, frame, step):
        """Folds one projected frame into the map.

        Voxels crossed by a ray are free, voxels where a ray ended are
        occupied, and both count as seen at `step`.
        """
        self.visible = frame.visible
        self.last_seen[frame.visible] = step
        crossed = frame.visible.copy()
        for voxel in frame.hits:
            crossed[voxel] = False
        self.occupied[crossed] = False
        self.owner[crossed] = NO_OWNER
        for voxel in frame.hits:
            self.occupied[voxel] = True
            self.last_seen[voxel] = step
        for cell in frame.floor_cells:
            self.floor_seen[cell] = True

    def set_owner(self, voxels, handle):
        for voxel in voxels:
            self.owner[voxel] = handle

    def release(self, handle):
        self.owner[self.owner == handle] = NO_OWNER

    def mark_collision(self, cell):
        if 0 <= cell[0] < self.dims[0] and 0 <= cell[1] < self.dims[1]:
            self.collisions[cell] = True

    def seen(self):
        return self.last_seen >= 0

    def to_dict(self):
        """JSON header plus one ASCII occupancy grid per z slice.

        Grid characters: '#' occupied, '.' seen free, ' ' never seen.
        Rows run along y, columns along x.
        """
        seen = self.seen()
        slices = []
        for k in range(self.dims[2]):
            rows = []
            for j in range(self.dims[1]):
                row = ""
                for i in range(self.dims[0]):
                    if self.occupied[i, j, k]:
                        row += "#"
                    elif seen[i, j, k]:
                        row += "."
                    else:
                        row += " "
                rows.append(row)
            slices.append(rows)
        return {"dims": list(self.dims), "voxel_size": self.voxel_size, "slices": slices}

    def dump(self, path):
        with open(path, "w") as f:
            json.dump(self.to_dict(), f, indent=1)
