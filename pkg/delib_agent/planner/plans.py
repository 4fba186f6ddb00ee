"""Mid-level plans and planning outcomes."""
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Optional, Tuple


@dataclass(frozen=True)
class MidLevelAction:
    name: str
    args: Tuple[str, ...] = ()

    @classmethod
    def from_grounded(cls, action):
        return cls(action.name, tuple(action.args))

    def __str__(self):
        return f"{self.name}({', '.join(self.args)})"

    def to_line(self):
        return " ".join((self.name,) + self.args).lower()


@dataclass(frozen=True)
class MidLevelPlan:
    actions: Tuple[MidLevelAction, ...] = ()
    cost: int = 0

    def __len__(self):
        return len(self.actions)

    def __iter__(self):
        return iter(self.actions)

    def to_lines(self):
        return [a.to_line() for a in self.actions]


class PlanStatus(Enum):
    SOLVED = "Solved"
    GOAL_ALREADY_SATISFIED = "GoalAlreadySatisfied"
    NO_SOLUTION = "NoSolution"
    TIMEOUT = "Timeout"
    NEEDS_SUBGOAL = "NeedsSubgoal"


@dataclass
class PlanOutcome:
    """Result of one planning request.

    `prerequisite` is set with NEEDS_SUBGOAL: a subgoal that has to hold
    before this one can be bound (slices exist only after slicing).
    """

    status: PlanStatus
    plan: MidLevelPlan = field(default_factory=MidLevelPlan)
    elapsed: float = 0.0
    expanded: int = 0
    bindings: Dict[str, str] = field(default_factory=dict)
    prerequisite: Optional[object] = None
    problem: Optional[object] = None

    @property
    def solved(self):
        return self.status in (PlanStatus.SOLVED, PlanStatus.GOAL_ALREADY_SATISFIED)

    def to_dict(self):
        return {
            "status": self.status.value,
            "plan": [str(a) for a in self.plan],
            "cost": self.plan.cost,
            "elapsed": round(self.elapsed, 4),
            "expanded": self.expanded,
            "bindings": dict(self.bindings),
        }
