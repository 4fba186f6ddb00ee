"""What the agent receives after every step."""
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from delib_agent.world.geometry import Pose

BACKGROUND = -1


@dataclass(frozen=True)
class FrameDetection:
    """One segmented instance of a frame.

    `key` is only meaningful within its frame; `bbox` is (x1, y1, x2, y2)
    with exclusive upper bounds.
    """

    key: int
    category: str
    bbox: Tuple[int, int, int, int]
    pixels: int
    labels: Dict[str, bool] = field(default_factory=dict)


@dataclass
class Observation:
    pose: Pose
    depth: np.ndarray
    segmentation: np.ndarray
    detections: List[FrameDetection]
    held_category: Optional[str] = None
    step: int = 0

    def detection(self, key):
        for detection in self.detections:
            if detection.key == key:
                return detection
        return None

    def mask(self, key):
        return self.segmentation == key
