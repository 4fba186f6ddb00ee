"""Depth and instance rendering by voxel ray marching, plus frame dumps."""
from pathlib import Path

import numpy as np

from delib_agent.utils.raycast import cast_rays


def render(house, pose, camera):
    """Planar depth and the render handle of every pixel.

    Returns:
        depth (`np.ndarray`): (height, width) meters, 0 where no hit.
        handles (`np.ndarray`): (height, width) owner codes; negative codes
            are walls, floor or nothing.

    """
    grid = house.owner_grid()
    origin, directions = camera.rays(pose)
    depth, hit = cast_rays(origin, directions, grid, float(house.voxel_size))
    shape = (camera.height, camera.width)
    return depth.reshape(shape), hit.reshape(shape)


def id_colour(key):
    """Stable RGB triple for a frame key; background is black."""
    if key < 0:
        return (0, 0, 0)
    return ((key * 97 + 53) % 256, (key * 57 + 101) % 256, (key * 193 + 29) % 256)


def write_pgm(path, depth, max_depth=None):
    """Writes depth as an 8-bit binary PGM scaled to the deepest pixel."""
    max_depth = max_depth or float(depth.max()) or 1.0
    scaled = np.clip(depth / max_depth * 255.0, 0, 255).astype(np.uint8)
    header = f"P5\n{depth.shape[1]} {depth.shape[0]}\n255\n".encode()
    Path(path).write_bytes(header + scaled.tobytes())


def write_ppm(path, segmentation):
    """Writes instance keys as an id-coloured binary PPM."""
    height, width = segmentation.shape
    rgb = np.zeros((height, width, 3), dtype=np.uint8)
    for key in np.unique(segmentation):
        rgb[segmentation == key] = id_colour(int(key))
    header = f"P6\n{width} {height}\n255\n".encode()
    Path(path).write_bytes(header + rgb.tobytes())
