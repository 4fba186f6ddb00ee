"""What went wrong, and what an unsuccessful episode is blamed on."""
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from delib_agent.navigation.errors import NotVisible, Unreachable
from delib_agent.planner.plans import PlanStatus
from delib_agent.sim import actions as act

PRE_EXECUTION = "pre-execution"
POST_EXECUTION = "post-execution"


class ExceptionKind(Enum):
    NO_PLAN_FOUND = "NoPlanFound"
    TARGET_UNREACHABLE = "TargetUnreachable"
    TARGET_NOT_VISIBLE = "TargetNotVisible"
    PATH_BLOCKED = "PathBlocked"
    OBJECT_NOT_FOUND = "ObjectNotFoundAfterSearch"
    RECEPTACLE_FULL = "ReceptacleFull"
    HAND_OCCUPIED = "HandOccupied"
    NO_EFFECT_OBSERVED = "NoEffectObserved"
    SIMULATOR_REJECTION = "SimulatorRejection"

    @property
    def phase(self):
        if self in _POST:
            return POST_EXECUTION
        return PRE_EXECUTION


_POST = {
    ExceptionKind.RECEPTACLE_FULL,
    ExceptionKind.HAND_OCCUPIED,
    ExceptionKind.NO_EFFECT_OBSERVED,
    ExceptionKind.SIMULATOR_REJECTION,
}


@dataclass(frozen=True)
class ExceptionRecord:
    kind: ExceptionKind
    step: int
    action: Optional[str] = None
    target: Optional[str] = None
    detail: str = ""

    @property
    def phase(self):
        return self.kind.phase

    def to_dict(self):
        return {
            "kind": self.kind.value,
            "phase": self.phase,
            "action": self.action,
            "target": self.target,
            "detail": self.detail,
        }


class FailureCategory(Enum):
    SUBGOAL_PREDICTION = "SubgoalPrediction"
    PLAN_NOT_FOUND = "PlanNotFound"
    OBJECT_NOT_FOUND = "ObjectNotFound"
    GROUNDING = "GroundingFailure"
    INTERACTION = "InteractionFailure"
    OTHER = "Other"


# Most specific first; an unsuccessful episode takes the first that occurred.
FAILURE_PRIORITY = tuple(FailureCategory)

_CATEGORY = {
    ExceptionKind.NO_PLAN_FOUND: FailureCategory.PLAN_NOT_FOUND,
    ExceptionKind.OBJECT_NOT_FOUND: FailureCategory.OBJECT_NOT_FOUND,
    ExceptionKind.TARGET_UNREACHABLE: FailureCategory.GROUNDING,
    ExceptionKind.TARGET_NOT_VISIBLE: FailureCategory.GROUNDING,
    ExceptionKind.PATH_BLOCKED: FailureCategory.GROUNDING,
    ExceptionKind.RECEPTACLE_FULL: FailureCategory.INTERACTION,
    ExceptionKind.HAND_OCCUPIED: FailureCategory.INTERACTION,
    ExceptionKind.NO_EFFECT_OBSERVED: FailureCategory.INTERACTION,
    ExceptionKind.SIMULATOR_REJECTION: FailureCategory.INTERACTION,
}


def failure_category(kind):
    return _CATEGORY.get(kind, FailureCategory.OTHER)


def blame(categories):
    """The single category an unsuccessful episode is logged under."""
    present = set(categories)
    for category in FAILURE_PRIORITY:
        if category in present:
            return category
    return FailureCategory.OTHER


_REASONS = {
    act.RECEPTACLE_FULL: ExceptionKind.RECEPTACLE_FULL,
    act.HAND_OCCUPIED: ExceptionKind.HAND_OCCUPIED,
    act.BLOCKED: ExceptionKind.PATH_BLOCKED,
}


def classify_exception(step, action=None, target=None, result=None, error=None, outcome=None):
    """Maps a failed attempt to an exception record.

    Exactly one of `result` (an unsuccessful ActionResult), `error` (a
    navigation error raised while grounding) or `outcome` (an unsolved
    PlanOutcome) describes the failure.

    Returns:
        (ExceptionRecord)

    """
    if outcome is not None:
        kind = ExceptionKind.NO_PLAN_FOUND
        detail = outcome.status.value
        if outcome.status == PlanStatus.TIMEOUT:
            detail = f"timeout after {outcome.elapsed:.1f}s"
    elif isinstance(error, NotVisible):
        kind, detail = ExceptionKind.TARGET_NOT_VISIBLE, str(error)
    elif isinstance(error, Unreachable):
        kind, detail = ExceptionKind.PATH_BLOCKED, str(error)
    elif error is not None:
        kind, detail = ExceptionKind.TARGET_UNREACHABLE, str(error)
    else:
        kind = _REASONS.get(result.reason, ExceptionKind.SIMULATOR_REJECTION)
        detail = result.reason or ""
    return ExceptionRecord(kind, step, action, target, detail)


def no_effect(action_name, target_category, pixel, observation):
    """True when the frame after a successful manipulation contradicts it.

    Only checks what the frame can show: the hand after PickUp and Place,
    the clicked object's state label after toggling or opening, and the
    clicked object's category after Slice.
    """
    if action_name == act.PICK_UP:
        return observation.held_category != target_category
    if action_name == act.PLACE:
        return observation.held_category is not None
    col, row = pixel
    key = int(observation.segmentation[row, col])
    detection = observation.detection(key)
    if detection is None or detection.category != target_category:
        return False
    expected = {
        act.TOGGLE_ON: ("isToggled", True),
        act.TOGGLE_OFF: ("isToggled", False),
        act.OPEN: ("isClosed", False),
        act.CLOSE: ("isClosed", True),
    }
    if action_name == act.SLICE:
        return True
    if action_name in expected:
        label, value = expected[action_name]
        return label in detection.labels and detection.labels[label] != value
    return False
