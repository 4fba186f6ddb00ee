"""Actions accepted by the household environment and their results."""
from dataclasses import dataclass
from typing import Optional, Tuple

FORWARD = "Forward"
TURN_LEFT = "TurnLeft"
TURN_RIGHT = "TurnRight"
LOOK_UP = "LookUp"
LOOK_DOWN = "LookDown"
STOP = "Stop"

PICK_UP = "PickUp"
PLACE = "Place"
SLICE = "Slice"
TOGGLE_ON = "ToggleOn"
TOGGLE_OFF = "ToggleOff"
OPEN = "Open"
CLOSE = "Close"
POUR = "Pour"

NAVIGATION = (FORWARD, TURN_LEFT, TURN_RIGHT, LOOK_UP, LOOK_DOWN)
MANIPULATION = (PICK_UP, PLACE, SLICE, TOGGLE_ON, TOGGLE_OFF, OPEN, CLOSE, POUR)

# Failure reasons reported by the environment.
BLOCKED = "blocked"
HAND_OCCUPIED = "hand-occupied"
RECEPTACLE_FULL = "receptacle-full"
NOT_NEAR = "not-near"
NOT_VISIBLE = "not-visible"
WRONG_AFFORDANCE = "wrong-affordance"
NOTHING_AT_PIXEL = "nothing-at-pixel"
EPISODE_OVER = "episode-over"


@dataclass(frozen=True)
class EnvAction:
    """A primitive step; manipulations name a pixel (column, row)."""

    name: str
    pixel: Optional[Tuple[int, int]] = None

    def __post_init__(self):
        if self.name not in NAVIGATION + MANIPULATION + (STOP,):
            raise ValueError(f"Unknown environment action {self.name}")
        if self.name in MANIPULATION and self.pixel is None:
            raise ValueError(f"{self.name} needs a pixel")

    @property
    def is_manipulation(self):
        return self.name in MANIPULATION

    def __str__(self):
        if self.pixel is None:
            return self.name
        return f"{self.name}@{self.pixel[0]},{self.pixel[1]}"


@dataclass(frozen=True)
class ActionResult:
    action: EnvAction
    success: bool
    reason: Optional[str] = None

    def to_dict(self):
        return {"action": str(self.action), "success": self.success, "reason": self.reason}
