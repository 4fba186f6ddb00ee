"""Back-projection of a segmented depth frame into the voxel grid."""
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Tuple

import numpy as np

from delib_agent import config
from delib_agent.utils.raycast import carve_visible

# Pushes a hit point just past the surface it landed on.
SURFACE_EPSILON = 1e-6


@dataclass
class ProjectedDetection:
    key: int
    category: str
    voxels: FrozenSet[Tuple[int, int, int]]
    bbox: Tuple[int, int, int, int]
    labels: Dict[str, bool] = field(default_factory=dict)

    @property
    def centroid(self):
        return voxel_centroid(self.voxels)


@dataclass
class ProjectedFrame:
    detections: List[ProjectedDetection]
    visible: np.ndarray
    hits: FrozenSet[Tuple[int, int, int]]
    floor_cells: FrozenSet[Tuple[int, int]]


def voxel_centroid(voxels, voxel_size=None):
    """Mean of voxel centers in meters."""
    voxel_size = voxel_size or config["world"]["voxel_size"]
    array = np.array(sorted(voxels), dtype=float)
    return (array.mean(axis=0) + 0.5) * voxel_size


def _unique_cells(array):
    if not len(array):
        return frozenset()
    return frozenset(map(tuple, np.unique(array, axis=0).tolist()))


def project_observation(observation, camera, dims, voxel_size=None, floor_tolerance=None):
    """Bins every pixel of a frame into voxels.

    Args:
        observation (Observation): Pose, depth and segmentation.
        camera (Camera): Intrinsics matching the frame.
        dims (tuple): Map size in voxels.
        voxel_size (float): Edge length in meters.
        floor_tolerance (float): Points below this height are floor.

    Returns:
        (ProjectedFrame): Voxel sets grouped by frame key, the voxels crossed
            by rays (visibility mask), voxels holding a surface point and
            the floor cells seen.

    """
    voxel_size = voxel_size or config["world"]["voxel_size"]
    if floor_tolerance is None:
        floor_tolerance = config["world"]["floor_tolerance"]
    depth = np.asarray(observation.depth, dtype=np.float64)
    if depth.shape != observation.segmentation.shape:
        raise ValueError("Depth and segmentation differ in resolution")
    origin, directions = camera.rays(observation.pose)
    flat_depth = depth.reshape(-1)
    valid = flat_depth > 0
    points = origin[None, :] + directions * (flat_depth + SURFACE_EPSILON)[:, None]

    visible = np.zeros(dims, dtype=bool)
    carve_visible(origin, directions, np.where(valid, flat_depth, 0.0), float(voxel_size), visible)

    cells = np.floor(points[:, :2] / voxel_size).astype(np.int64)
    inside = (
        valid
        & (cells[:, 0] >= 0) & (cells[:, 0] < dims[0])
        & (cells[:, 1] >= 0) & (cells[:, 1] < dims[1])
    )
    floor = inside & (points[:, 2] < floor_tolerance)
    levels = np.floor(points[:, 2] / voxel_size).astype(np.int64)
    solid = inside & ~floor & (levels >= 0) & (levels < dims[2])
    voxels = np.column_stack([cells, levels])

    floor_cells = _unique_cells(cells[floor])
    hits = _unique_cells(voxels[solid])

    keys = observation.segmentation.reshape(-1)
    detections = []
    for detection in observation.detections:
        mask = solid & (keys == detection.key)
        if not mask.any():
            continue
        detections.append(
            ProjectedDetection(
                key=detection.key,
                category=detection.category,
                voxels=frozenset(map(tuple, np.unique(voxels[mask], axis=0).tolist())),
                bbox=detection.bbox,
                labels=dict(detection.labels),
            )
        )
    return ProjectedFrame(detections, visible, hits, floor_cells)
