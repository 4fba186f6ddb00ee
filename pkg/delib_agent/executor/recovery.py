"""Exception handling decision trees."""
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from delib_agent import config, logger
from delib_agent.executor.exceptions import ExceptionKind
from delib_agent.monitor.subgoals import Subgoal
from delib_agent.sim.affordances import AffordanceTable


class Decision(Enum):
    REPLAN = "Replan"
    RETRY = "Retry"
    REGROUND = "Reground"
    PUSH_SUBGOAL = "PushSubgoal"
    RETRY_UNPRUNED = "RetryUnpruned"
    ABANDON = "Abandon"


@dataclass(frozen=True)
class RecoveryDecision:
    decision: Decision
    subgoal: Optional[Subgoal] = None
    reason: str = ""

    def to_dict(self):
        record = {"decision": self.decision.value, "reason": self.reason}
        if self.subgoal is not None:
            record["subgoal"] = str(self.subgoal)
        return record


@dataclass
class RecoveryContext:
    """What the decision trees look at besides the exception itself."""

    subgoal: Subgoal
    belief: object
    affordances: AffordanceTable
    replans: int = 0
    max_replans: int = 5
    retried: bool = False
    regrounded: bool = False
    pruned: bool = True
    unpruned_tried: bool = False
    replanning: bool = True
    clear_target: Optional[str] = None


def clear_destination(belief, occupant, affordances, avoid=(), preferred=None):
    """Where to put an object that is in the way.

    The nearest receptacle of the preferred category that has room,
    otherwise the nearest receptacle of any category that has room and
    accepts the object.

    Returns:
        (BeliefInstance) Or None when nothing known has room.

    """
    preferred = preferred or config["executor"]["clear_target"]
    pose = belief.pose
    avoid = set(avoid) | {occupant.id} | set(belief.ancestors(occupant.id))

    def has_room(instance):
        capacity = affordances[instance.category].capacity
        return not instance.reported_full and len(belief.children(instance.id)) < capacity

    def distance(instance):
        return math.hypot(instance.centroid[0] - pose.x, instance.centroid[1] - pose.y)

    candidates = [
        i for i in belief.instances
        if i.id not in avoid
        and not i.held
        and not i.inside_closed
        and not i.state("isClosed")
        and affordances.can_hold(i.category, occupant.category)
        and has_room(i)
    ]
    candidates.sort(key=lambda i: (i.category != preferred, distance(i), i.id))
    return candidates[0] if candidates else None


def _move_aside(instance, context, avoid=()):
    """A pinned subgoal putting `instance` somewhere out of the way."""
    destination = clear_destination(
        context.belief, instance, context.affordances, avoid, context.clear_target
    )
    if destination is None:
        return None
    return Subgoal(
        instance.category,
        "isPlacedTo",
        destination.category,
        patient_id=instance.id,
        destination_id=destination.id,
    )


def _replan(context, reason):
    if context.replans >= context.max_replans:
        return RecoveryDecision(Decision.ABANDON, reason=f"replanning cap after {reason}")
    return RecoveryDecision(Decision.REPLAN, reason=reason)


def recover(exception, context):
    """Chooses how to continue after an exception.

    Args:
        exception (ExceptionRecord): What went wrong.
        context (RecoveryContext): Subgoal, belief and counters.

    Returns:
        (RecoveryDecision)

    """
    kind = exception.kind
    belief = context.belief
    if kind == ExceptionKind.NO_PLAN_FOUND:
        if context.pruned and not context.unpruned_tried:
            decision = RecoveryDecision(Decision.RETRY_UNPRUNED, reason="plan on the full scene")
        else:
            decision = RecoveryDecision(Decision.ABANDON, reason="no plan")
    elif kind == ExceptionKind.OBJECT_NOT_FOUND:
        decision = RecoveryDecision(Decision.ABANDON, reason="search gave up")
    elif not context.replanning:
        decision = RecoveryDecision(Decision.ABANDON, reason="replanning disabled")
    elif kind == ExceptionKind.RECEPTACLE_FULL:
        occupants = [
            c for c in belief.children(exception.target) if not c.held
        ] if exception.target in belief else []
        subgoal = None
        for occupant in sorted(occupants, key=lambda c: (c.ordinal, c.id)):
            subgoal = _move_aside(occupant, context, avoid={exception.target})
            if subgoal is not None:
                break
        if subgoal is not None:
            decision = RecoveryDecision(
                Decision.PUSH_SUBGOAL, subgoal, reason="clear out the receptacle first"
            )
        else:
            decision = _replan(context, "receptacle full")
    elif kind == ExceptionKind.HAND_OCCUPIED:
        subgoal = None
        if belief.held is not None and belief.held in belief:
            subgoal = _move_aside(belief.get(belief.held), context)
        if subgoal is not None:
            decision = RecoveryDecision(Decision.PUSH_SUBGOAL, subgoal, reason="free the hand")
        else:
            decision = _replan(context, "hand occupied")
    elif kind == ExceptionKind.NO_EFFECT_OBSERVED and not context.retried:
        decision = RecoveryDecision(Decision.RETRY, reason="retry once")
    elif kind in (ExceptionKind.TARGET_NOT_VISIBLE, ExceptionKind.PATH_BLOCKED):
        if context.regrounded:
            decision = _replan(context, kind.value)
        else:
            decision = RecoveryDecision(Decision.REGROUND, reason=kind.value)
    else:
        decision = _replan(context, kind.value)
    logger.info(f"{exception.kind.value} on {context.subgoal}: {decision.decision.value}")
    return decision
