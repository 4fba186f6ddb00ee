"""Voxel ray marching kernels shared by the renderer and free-space carving."""
import numpy as np
from numba import njit

EMPTY = -1
WALL = -2
FLOOR = -3


@njit(cache=True)
def _setup_axis(origin, direction, index, voxel):
    if direction > 0:
        return 1, ((index + 1) * voxel - origin) / direction, voxel / direction
    if direction < 0:
        return -1, (index * voxel - origin) / direction, -voxel / direction
    return 0, np.inf, np.inf


@njit(cache=True)
def _first_hit(ox, oy, oz, dx, dy, dz, owners, voxel):
    nx, ny, nz = owners.shape
    ix = int(np.floor(ox / voxel))
    iy = int(np.floor(oy / voxel))
    iz = int(np.floor(oz / voxel))
    sx, tx, ddx = _setup_axis(ox, dx, ix, voxel)
    sy, ty, ddy = _setup_axis(oy, dy, iy, voxel)
    sz, tz, ddz = _setup_axis(oz, dz, iz, voxel)
    t = 0.0
    for _ in range(4 * (nx + ny + nz) + 8):
        if ix < 0 or ix >= nx or iy < 0 or iy >= ny:
            return -1.0, EMPTY
        if iz < 0:
            return t, FLOOR
        if iz < nz:
            owner = owners[ix, iy, iz]
            if owner != EMPTY and t > 0.0:
                return t, owner
        elif dz >= 0:
            return -1.0, EMPTY
        if tx < ty and tx < tz:
            ix += sx
            t = tx
            tx += ddx
        elif ty < tz:
            iy += sy
            t = ty
            ty += ddy
        else:
            iz += sz
            t = tz
            tz += ddz
    return -1.0, EMPTY


@njit(cache=True)
def cast_rays(origin, directions, owners, voxel):
    """Planar depth and hit owner of every ray.

    Args:
        origin (`np.ndarray`): Eye position, shape (3,).
        directions (`np.ndarray`): Shape (n, 3), unit component along the
            optical axis.
        owners (`np.ndarray`): int32 grid; EMPTY voxels let rays through.
        voxel (float): Edge length of a voxel.

    Returns:
        depth (`np.ndarray`): 0 where nothing was hit.
        hit (`np.ndarray`): Owner code of the hit voxel.

    """
    n = directions.shape[0]
    depth = np.zeros(n)
    hit = np.full(n, EMPTY, dtype=np.int32)
    for i in range(n):
        t, owner = _first_hit(
            origin[0], origin[1], origin[2],
            directions[i, 0], directions[i, 1], directions[i, 2],
            owners, voxel,
        )
        if t > 0.0:
            depth[i] = t
            hit[i] = owner
    return depth, hit


@njit(cache=True)
def carve_visible(origin, directions, depths, voxel, visible):
    """Marks every voxel a ray crosses up to its measured depth."""
    nx, ny, nz = visible.shape
    for i in range(directions.shape[0]):
        d = depths[i]
        if not d > 0.0:
            continue
        dx, dy, dz = directions[i, 0], directions[i, 1], directions[i, 2]
        ix = int(np.floor(origin[0] / voxel))
        iy = int(np.floor(origin[1] / voxel))
        iz = int(np.floor(origin[2] / voxel))
        sx, tx, ddx = _setup_axis(origin[0], dx, ix, voxel)
        sy, ty, ddy = _setup_axis(origin[1], dy, iy, voxel)
        sz, tz, ddz = _setup_axis(origin[2], dz, iz, voxel)
        for _ in range(4 * (nx + ny + nz) + 8):
            if ix < 0 or ix >= nx or iy < 0 or iy >= ny or iz < 0:
                break
            if iz < nz:
                visible[ix, iy, iz] = True
            t_next = min(tx, ty, tz)
            if t_next > d + 1e-6:
                break
            if tx < ty and tx < tz:
                ix += sx
                tx += ddx
            elif ty < tz:
                iy += sy
                ty += ddy
            else:
                iz += sz
                tz += ddz
