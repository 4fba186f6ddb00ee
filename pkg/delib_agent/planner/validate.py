"""Replays a plan against a grounded task."""
from dataclasses import dataclass
from typing import Optional

from delib_agent.pddl.semantics import is_applicable, successor_atoms
from delib_agent.planner.errors import UnknownPlanAction


@dataclass(frozen=True)
class Verdict:
    valid: bool
    failed_step: Optional[int] = None
    reason: str = ""

    def __bool__(self):
        return self.valid


def _grounded(task, action):
    for candidate in task.actions:
        if candidate.name == action.name and candidate.args == tuple(action.args):
            return candidate
    raise UnknownPlanAction(action)


def validate_plan(plan, task):
    """Simulates the plan step by step from the initial state.

    Args:
        plan (iterable): MidLevelActions or GroundedActions.
        task (GroundedTask): The task the plan was made for.

    Returns:
        (Verdict) Invalid with the index of the first step whose
        precondition fails, or with the plan length when the goal is
        not reached at the end.

    """
    atoms = task.init.atoms
    steps = list(plan)
    for index, step in enumerate(steps):
        try:
            action = _grounded(task, step)
        except UnknownPlanAction as e:
            return Verdict(False, index, str(e))
        if not is_applicable(action, atoms):
            return Verdict(False, index, f"precondition of {action} does not hold")
        atoms = frozenset(successor_atoms(action, atoms))
    if not task.goal_reached(atoms):
        return Verdict(False, len(steps), "goal not reached")
    return Verdict(True)
