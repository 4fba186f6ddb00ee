"""Symbolic lookup table of observed object instances."""
import json
import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Set

import numpy as np

from delib_agent import config
from delib_agent.world.errors import UnknownInstance
from delib_agent.world.perception import voxel_centroid


@dataclass
class InstanceRecord:
    """One object the agent believes in.

    States map predicates to booleans; predicates never observed are
    unknown and read as false by the planner. Predicates in
    `authoritative` were written by the agent's own actions.
    """

    id: str
    category: str
    ordinal: int
    handle: int
    voxels: Set[tuple]
    states: Dict[str, bool] = field(default_factory=dict)
    authoritative: Set[str] = field(default_factory=set)
    parent: Optional[str] = None
    relation_authoritative: bool = False
    stale: bool = False
    reported_full: bool = False
    last_seen: int = -1

    @property
    def centroid(self):
        return voxel_centroid(self.voxels)

    @property
    def size(self):
        array = np.array(sorted(self.voxels))
        return (array.max(axis=0) - array.min(axis=0) + 1) * config["world"]["voxel_size"]

    @property
    def min_level(self):
        return min(v[2] for v in self.voxels)

    def state(self, predicate):
        """True, False or None when never observed."""
        return self.states.get(predicate)

    def perceive(self, predicate, value):
        """Stores a perceived label unless an action wrote it."""
        if predicate in self.authoritative:
            return False
        self.states[predicate] = bool(value)
        return True

    def assert_state(self, predicate, value):
        self.states[predicate] = bool(value)
        self.authoritative.add(predicate)

    def to_dict(self):
        return {
            "id": self.id,
            "category": self.category,
            "centroid": [round(float(c), 4) for c in self.centroid],
            "voxels": sorted(list(v) for v in self.voxels),
            "states": dict(sorted(self.states.items())),
            "authoritative": sorted(self.authoritative),
            "parent": self.parent,
            "stale": self.stale,
        }


class InstanceTable:
    """Records keyed by id; ordinals are never reused within a category."""

    def __init__(self):
        self.records = {}
        self.held = None
        self._ordinals = {}
        self._handles = 0

    def __contains__(self, instance_id):
        return instance_id in self.records

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(sorted(self.records.values(), key=lambda r: (r.category, r.ordinal)))

    def get(self, instance_id):
        try:
            return self.records[instance_id]
        except KeyError:
            raise UnknownInstance(instance_id)

    def register(self, category, voxels, step=-1, states=None):
        ordinal = self._ordinals.get(category, 0)
        self._ordinals[category] = ordinal + 1
        record = InstanceRecord(
            id=f"{category}_{ordinal}",
            category=category,
            ordinal=ordinal,
            handle=self._handles,
            voxels=set(voxels),
            states=dict(states or {}),
            last_seen=step,
        )
        self._handles += 1
        self.records[record.id] = record
        return record

    def remove(self, instance_id):
        record = self.records.pop(instance_id)
        if self.held == instance_id:
            self.held = None
        for other in self.records.values():
            if other.parent == instance_id:
                other.parent = None
                other.relation_authoritative = False
        return record

    def of_category(self, category):
        return [r for r in self if r.category == category]

    def children(self, instance_id):
        return [r for r in self if r.parent == instance_id]

    def ancestors(self, instance_id):
        chain, seen = [], {instance_id}
        parent = self.records[instance_id].parent
        while parent is not None and parent in self.records and parent not in seen:
            chain.append(parent)
            seen.add(parent)
            parent = self.records[parent].parent
        return chain

    def subtree(self, instance_id):
        nodes = [instance_id]
        for child in self.children(instance_id):
            nodes += self.subtree(child.id)
        return nodes

    def held_subtree(self):
        return set(self.subtree(self.held)) if self.held in self.records else set()

    def to_dict(self):
        return {"held": self.held, "instances": [r.to_dict() for r in self]}

    def dump(self, path):
        with open(path, "w") as f:
            json.dump(self.to_dict(), f, indent=1)


def farthest_instances(records, pose, k=None):
    """The `k` instances farthest from the agent, farthest first.

    Args:
        records (iterable): Anything with `centroid`, `category` and `ordinal`.
        pose (Pose): Agent pose; distances are taken from the camera at `pose.z`.
        k (int): How many to return.

    Returns:
        (list)

    """
    k = config["navigation"]["farthest_k"] if k is None else k

    def distance(record):
        c = record.centroid
        return math.dist(tuple(c), (pose.x, pose.y, pose.z))

    ranked = sorted(records, key=lambda r: (-distance(r), r.ordinal, r.category))
    return ranked[:k]
