"""Scene and task descriptions, stored as JSON files."""
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from delib_agent import config

VOXEL_SIZE = config["world"]["voxel_size"]


def _to_m(voxels):
    return [round(v * VOXEL_SIZE, 4) for v in voxels]


def _to_voxels(meters):
    return tuple(int(round(m / VOXEL_SIZE)) for m in meters)


@dataclass
class InstanceSpec:
    """An object of the scene.

    `voxel` is the minimum corner of the object's box. Objects with a parent
    are laid out by the environment, so their voxel is only a hint.
    """

    id: str
    category: str
    voxel: Tuple[int, int, int] = (0, 0, 0)
    states: Dict[str, bool] = field(default_factory=dict)
    parent: Optional[str] = None
    capacity: Optional[int] = None

    def to_dict(self, size=None):
        record = {
            "id": self.id,
            "category": self.category,
            "position": _to_m(self.voxel),
            "states": dict(sorted(self.states.items())),
            "parent": self.parent,
        }
        if size is not None:
            record["size"] = _to_m(size)
        if self.capacity is not None:
            record["capacity"] = self.capacity
        return record

    @classmethod
    def from_dict(cls, record):
        return cls(
            id=record["id"],
            category=record["category"],
            voxel=_to_voxels(record.get("position", (0, 0, 0))),
            states=dict(record.get("states", {})),
            parent=record.get("parent"),
            capacity=record.get("capacity"),
        )


@dataclass
class SceneSpec:
    name: str
    dims: Tuple[int, int, int]
    walls: List[Tuple[int, int]]
    instances: List[InstanceSpec]
    agent: Dict[str, int]
    voxel_size: float = VOXEL_SIZE

    def instance(self, instance_id):
        for spec in self.instances:
            if spec.id == instance_id:
                return spec
        raise KeyError(instance_id)

    def to_dict(self, affordances=None):
        def size(spec):
            if affordances is None:
                return None
            return affordances[spec.category].size

        return {
            "name": self.name,
            "dims": list(self.dims),
            "voxel_size": self.voxel_size,
            "walls": [list(c) for c in sorted(self.walls)],
            "agent": dict(self.agent),
            "instances": [s.to_dict(size(s)) for s in self.instances],
        }

    @classmethod
    def from_dict(cls, record):
        return cls(
            name=record["name"],
            dims=tuple(record["dims"]),
            walls=[tuple(c) for c in record["walls"]],
            instances=[InstanceSpec.from_dict(r) for r in record["instances"]],
            agent=dict(record["agent"]),
            voxel_size=record.get("voxel_size", VOXEL_SIZE),
        )

    def to_json(self, affordances=None):
        return json.dumps(self.to_dict(affordances), indent=1, sort_keys=True)

    @classmethod
    def load(cls, path):
        return cls.from_dict(json.loads(Path(path).read_text()))

    def save(self, path, affordances=None):
        Path(path).write_text(self.to_json(affordances))


@dataclass(frozen=True)
class GoalCondition:
    """At least `count` objects of `category` satisfy `predicate`.

    With `same_destination`, every counted object must share one
    destination instance.
    """

    category: str
    predicate: str
    destination: Optional[str] = None
    count: int = 1
    same_destination: bool = False

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("Goal conditions need a count of at least 1")

    @property
    def subgoal_key(self):
        return (self.category, self.predicate, self.destination)


@dataclass
class TaskSpec:
    name: str
    conditions: List[GoalCondition]
    subgoals: List[dict] = field(default_factory=list)
    dialog: List[str] = field(default_factory=list)
    reference_length: Optional[int] = None

    def to_dict(self):
        return {
            "name": self.name,
            "conditions": [asdict(c) for c in self.conditions],
            "subgoals": self.subgoals,
            "dialog": self.dialog,
            "reference_length": self.reference_length,
        }

    @classmethod
    def from_dict(cls, record):
        return cls(
            name=record["name"],
            conditions=[GoalCondition(**c) for c in record["conditions"]],
            subgoals=list(record.get("subgoals", [])),
            dialog=list(record.get("dialog", [])),
            reference_length=record.get("reference_length"),
        )

    def to_json(self):
        return json.dumps(self.to_dict(), indent=1, sort_keys=True)

    @classmethod
    def load(cls, path):
        return cls.from_dict(json.loads(Path(path).read_text()))

    def save(self, path):
        Path(path).write_text(self.to_json())
