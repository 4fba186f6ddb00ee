"""Read-only view of the agent's belief, handed to the planner and monitor."""
import hashlib
import json
from dataclasses import dataclass, field
from typing import Optional, Tuple


@dataclass(frozen=True)
class BeliefInstance:
    id: str
    category: str
    ordinal: int
    centroid: Tuple[float, float, float]
    states: Tuple[Tuple[str, bool], ...] = ()
    parent: Optional[str] = None
    visible: bool = False
    near: bool = False
    held: bool = False
    inside_closed: bool = False
    reported_full: bool = False

    def state(self, predicate):
        return dict(self.states).get(predicate, False)

    def true_states(self):
        return sorted(p for p, v in self.states if v)

    def to_dict(self):
        return {
            "id": self.id,
            "category": self.category,
            "centroid": [round(c, 4) for c in self.centroid],
            "states": dict(self.states),
            "parent": self.parent,
            "visible": self.visible,
            "near": self.near,
            "held": self.held,
            "inside_closed": self.inside_closed,
            "reported_full": self.reported_full,
        }


@dataclass(frozen=True)
class BeliefSnapshot:
    """Instances sorted by id, plus the agent pose and the held instance."""

    step: int
    pose: object
    instances: Tuple[BeliefInstance, ...] = field(default_factory=tuple)
    held: Optional[str] = None

    def __contains__(self, instance_id):
        return any(i.id == instance_id for i in self.instances)

    def __len__(self):
        return len(self.instances)

    def get(self, instance_id):
        for instance in self.instances:
            if instance.id == instance_id:
                return instance
        raise KeyError(instance_id)

    def of_category(self, category):
        return [i for i in self.instances if i.category == category]

    def children(self, instance_id):
        return [i for i in self.instances if i.parent == instance_id]

    def ancestors(self, instance_id):
        chain = []
        parent = self.get(instance_id).parent
        while parent is not None and parent in self and parent not in chain:
            chain.append(parent)
            parent = self.get(parent).parent
        return chain

    def categories(self):
        return sorted({i.category for i in self.instances})

    def to_dict(self):
        return {
            "step": self.step,
            "pose": self.pose.to_dict() if self.pose is not None else None,
            "held": self.held,
            "instances": [i.to_dict() for i in self.instances],
        }

    def digest(self):
        """Short sha1 of the canonical JSON form."""
        return _sha1(self.to_dict())

    def state_digest(self):
        """Like `digest`, without the step counter."""
        record = self.to_dict()
        del record["step"]
        return _sha1(record)


def _sha1(record):
    text = json.dumps(record, sort_keys=True)
    return hashlib.sha1(text.encode("utf-8")).hexdigest()[:12]
