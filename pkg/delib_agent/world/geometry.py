"""Agent pose and pinhole camera.

Axes: x to the right of heading 0, y forward at heading 0, z up. Headings
are compass degrees, so 90 faces +x. A negative pitch looks down.
"""
import math
from dataclasses import dataclass, replace

import numpy as np

from delib_agent import config

HEADINGS = (0, 90, 180, 270)
PITCHES = tuple(config["navigation"]["pitches"])
PITCH_STEP = 30


def heading_vector(heading):
    rad = math.radians(heading)
    return (round(math.sin(rad), 12), round(math.cos(rad), 12))


def heading_towards(dx, dy):
    """The compass heading closest to the direction (dx, dy)."""
    angle = math.degrees(math.atan2(dx, dy)) % 360
    return min(HEADINGS, key=lambda h: (min(abs(angle - h), 360 - abs(angle - h)), h))


def reach_distance(x, y, cells, voxel_size=config["world"]["voxel_size"]):
    """Floor distance from (x, y) to the nearest cell center of a footprint.

    This is the distance the interaction reach is checked against.
    """
    return min(
        math.hypot((cx + 0.5) * voxel_size - x, (cy + 0.5) * voxel_size - y) for cx, cy in cells
    )


def pitch_towards(horizontal, vertical):
    """The allowed pitch closest to the elevation of a target."""
    elevation = math.degrees(math.atan2(vertical, max(horizontal, 1e-9)))
    return min(PITCHES, key=lambda p: (abs(elevation - p), abs(p)))


@dataclass(frozen=True)
class Pose:
    x: float
    y: float
    heading: int = 0
    pitch: int = 0
    z: float = config["world"]["eye_height"]

    def cell(self, voxel_size=config["world"]["voxel_size"]):
        return (int(math.floor(self.x / voxel_size)), int(math.floor(self.y / voxel_size)))

    def turned(self, degrees):
        return replace(self, heading=(self.heading + degrees) % 360)

    def tilted(self, degrees):
        return replace(self, pitch=self.pitch + degrees)

    def moved_to_cell(self, cell, voxel_size=config["world"]["voxel_size"]):
        return replace(
            self, x=(cell[0] + 0.5) * voxel_size, y=(cell[1] + 0.5) * voxel_size
        )

    def to_dict(self):
        return {"x": self.x, "y": self.y, "heading": self.heading, "pitch": self.pitch}


@dataclass(frozen=True)
class Camera:
    width: int = config["world"]["image_width"]
    height: int = config["world"]["image_height"]
    hfov: float = config["world"]["hfov"]

    @property
    def focal(self):
        return (self.width / 2.0) / math.tan(math.radians(self.hfov) / 2.0)

    def frame(self, pose):
        """Forward, right and up unit vectors of the camera."""
        sh, ch = heading_vector(pose.heading)
        rad = math.radians(pose.pitch)
        flat = np.array([sh, ch, 0.0])
        up = np.array([0.0, 0.0, 1.0])
        forward = flat * math.cos(rad) + up * math.sin(rad)
        right = np.array([ch, -sh, 0.0])
        camera_up = -flat * math.sin(rad) + up * math.cos(rad)
        return forward, right, camera_up

    def rays(self, pose):
        """Ray origin and one direction per pixel, row-major.

        Pixel (width // 2, height // 2) looks along the optical axis.
        Directions have unit component along that axis, so the ray
        parameter at a hit equals its planar depth.

        Returns:
            origin (`np.ndarray`): Shape (3,).
            directions (`np.ndarray`): Shape (height * width, 3).

        """
        forward, right, camera_up = self.frame(pose)
        u = (np.arange(self.width) - self.width // 2) / self.focal
        v = (np.arange(self.height) - self.height // 2) / self.focal
        uu, vv = np.meshgrid(u, v)
        directions = (
            forward[None, None, :]
            + uu[..., None] * right[None, None, :]
            - vv[..., None] * camera_up[None, None, :]
        )
        origin = np.array([pose.x, pose.y, pose.z])
        return origin, directions.reshape(-1, 3).astype(np.float64)

    def unproject(self, pose, depth):
        """World points of every pixel; invalid depths give NaN rows."""
        origin, directions = self.rays(pose)
        flat = depth.reshape(-1).astype(np.float64)
        points = origin[None, :] + directions * flat[:, None]
        points[~(flat > 0)] = np.nan
        return points

    def project(self, pose, point):
        """Pixel (column, row) of a world point, or None when behind or outside."""
        forward, right, camera_up = self.frame(pose)
        rel = np.asarray(point, dtype=float) - np.array([pose.x, pose.y, pose.z])
        depth = float(rel @ forward)
        if depth <= 1e-9:
            return None
        col = int(round(float(rel @ right) / depth * self.focal)) + self.width // 2
        row = int(round(-float(rel @ camera_up) / depth * self.focal)) + self.height // 2
        if 0 <= col < self.width and 0 <= row < self.height:
            return col, row
        return None
