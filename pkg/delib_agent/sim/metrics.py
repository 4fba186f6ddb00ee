"""Goal-condition checks and path-length-weighted scores."""
from dataclasses import asdict, dataclass
from fractions import Fraction

PROGRESS = ("isCooked", "isClean", "isFilledWithLiquid", "simbotIsFilledWithCoffee", "isSliced")


def _satisfies(obj, condition, house):
    predicate = condition.predicate
    if predicate == "isPlacedTo":
        parent = obj.parent
        return parent is not None and house.objects[parent].category == condition.destination
    if predicate == "isPickedUp":
        return house.is_held(obj.id)
    if predicate == "isEmptied":
        return not obj.children
    if predicate == "isSliced" and obj.affordance.sliced:
        return True
    return bool(obj.states.get(predicate))


def condition_count(condition, house):
    """How many objects meet one condition, capped at its required count."""
    matching = [
        o for o in house.objects.values()
        if o.category == condition.category and _satisfies(o, condition, house)
    ]
    if condition.same_destination and condition.predicate == "isPlacedTo":
        per_destination = {}
        for obj in matching:
            per_destination[obj.parent] = per_destination.get(obj.parent, 0) + 1
        satisfied = max(per_destination.values(), default=0)
    else:
        satisfied = len(matching)
    return min(satisfied, condition.count)


def check_goal_conditions(task, house):
    """Satisfied and required goal-condition counts of a task.

    Args:
        task (TaskSpec): Goal conditions with required counts.
        house (Household): Ground truth.

    Returns:
        (tuple): satisfied, total.

    """
    satisfied = sum(condition_count(c, house) for c in task.conditions)
    total = sum(c.count for c in task.conditions)
    return satisfied, total


def satisfaction_vector(task, house):
    return [condition_count(c, house) >= c.count for c in task.conditions]


def plw(metric, length, reference):
    """Path-length-weighted version of a metric.

    A trajectory longer than the reference is penalised by the ratio of the
    two lengths; shorter ones keep the metric unchanged.

    Args:
        metric (float or Fraction): Score in [0, 1].
        length (int): Steps taken by the agent.
        reference (int): Steps of the reference solution, positive.

    Returns:
        Same numeric type as `metric` (Fraction stays exact).

    """
    if reference <= 0:
        raise ValueError("Reference length must be positive")
    if length < 0:
        raise ValueError("Trajectory length must be nonnegative")
    if isinstance(metric, Fraction):
        return metric * Fraction(reference, max(length, reference))
    return metric * reference / max(length, reference)


@dataclass
class MetricsReport:
    success: bool
    goal_condition_rate: float
    length: int
    reference_length: int
    plw_success: float
    plw_goal_condition_rate: float

    @classmethod
    def compute(cls, task, house, length, reference=None):
        satisfied, total = check_goal_conditions(task, house)
        rate = Fraction(satisfied, total) if total else Fraction(1)
        success = satisfied == total
        reference = reference or task.reference_length or max(length, 1)
        return cls(
            success=success,
            goal_condition_rate=float(rate),
            length=length,
            reference_length=reference,
            plw_success=float(plw(Fraction(int(success)), length, reference)),
            plw_goal_condition_rate=float(plw(rate, length, reference)),
        )

    def to_dict(self):
        return asdict(self)
