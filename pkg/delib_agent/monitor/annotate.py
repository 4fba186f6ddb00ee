"""Subgoal labels from recorded trajectories."""
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import FrozenSet, List, Optional, Tuple

from delib_agent.monitor.errors import InconsistentTrajectory
from delib_agent.monitor.subgoals import Subgoal


@dataclass(frozen=True)
class TrajectoryStep:
    """One step: the action taken, the world atoms it changed, and which goal
    conditions hold afterwards. The first step of a record has no action and
    describes the initial state."""

    action: Optional[str]
    added: FrozenSet[tuple] = frozenset()
    removed: FrozenSet[tuple] = frozenset()
    satisfied: Tuple[bool, ...] = ()

    def to_dict(self):
        return {
            "action": self.action,
            "added": sorted(list(a) for a in self.added),
            "removed": sorted(list(a) for a in self.removed),
            "satisfied": list(self.satisfied),
        }

    @classmethod
    def from_dict(cls, record):
        return cls(
            action=record.get("action"),
            added=frozenset(tuple(a) for a in record.get("added", ())),
            removed=frozenset(tuple(a) for a in record.get("removed", ())),
            satisfied=tuple(bool(s) for s in record["satisfied"]),
        )


@dataclass
class TrajectoryRecord:
    conditions: List[Subgoal]
    initial: FrozenSet[tuple] = frozenset()
    steps: List[TrajectoryStep] = field(default_factory=list)

    def append(self, action, before, after, satisfied):
        added, removed = frozenset(after - before), frozenset(before - after)
        self.steps.append(TrajectoryStep(action, added, removed, tuple(satisfied)))

    def to_dict(self):
        return {
            "conditions": [c.to_dict() for c in self.conditions],
            "initial": sorted(list(a) for a in self.initial),
            "steps": [s.to_dict() for s in self.steps],
        }

    @classmethod
    def from_dict(cls, record):
        return cls(
            conditions=[Subgoal.from_dict(c) for c in record["conditions"]],
            initial=frozenset(tuple(a) for a in record.get("initial", ())),
            steps=[TrajectoryStep.from_dict(s) for s in record["steps"]],
        )

    @classmethod
    def load(cls, path):
        return cls.from_dict(json.loads(Path(path).read_text()))

    def save(self, path):
        Path(path).write_text(json.dumps(self.to_dict()))


def _replay(trajectory):
    if not trajectory.initial:
        return
    atoms = set(trajectory.initial)
    for index, step in enumerate(trajectory.steps):
        missing = step.removed - atoms
        if missing:
            raise InconsistentTrajectory(index, f"removes absent atom {sorted(missing)[0]}")
        present = step.added & atoms
        if present:
            raise InconsistentTrajectory(index, f"adds present atom {sorted(present)[0]}")
        atoms = (atoms - step.removed) | step.added


def annotate_subgoals(trajectory, conditions=None):
    """Labels each goal condition with the step it first holds at.

    Args:
        trajectory (TrajectoryRecord): Recorded steps.
        conditions (list): Subgoals matching the satisfaction vectors;
            defaults to the record's own.

    Returns:
        (list) (step index, Subgoal) pairs in step order.

    Raises:
        InconsistentTrajectory: A condition stops holding once met, a
            vector has the wrong length, or the diffs do not replay.

    """
    conditions = trajectory.conditions if conditions is None else conditions
    _replay(trajectory)
    first = {}
    for index, step in enumerate(trajectory.steps):
        if len(step.satisfied) != len(conditions):
            raise InconsistentTrajectory(
                index, f"{len(step.satisfied)} flags for {len(conditions)} conditions"
            )
        for position, met in enumerate(step.satisfied):
            if met and position not in first:
                first[position] = index
            elif not met and position in first:
                raise InconsistentTrajectory(index, f"{conditions[position]} no longer holds")
    order = sorted((step, position) for position, step in first.items())
    return [(step, conditions[position]) for step, position in order]
