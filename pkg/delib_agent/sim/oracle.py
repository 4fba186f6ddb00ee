"""Ground-truth belief, used to compute reference path lengths."""
import json
from pathlib import Path

import numpy as np

from delib_agent.navigation.occupancy import OccupancyGrid
from delib_agent.world.belief import BeliefInstance, BeliefSnapshot


class OracleWorldModel:
    """Same interface as `WorldModel`, read straight from the environment.

    Args:
        env (HouseholdEnv): The environment whose truth is exposed.

    """

    def __init__(self, env):
        self.env = env
        self.affordances = env.affordances
        self.camera = env.camera
        self.reach = env.reach
        self.pose = env.pose
        self.step = 0
        self.observation = None
        self.assignments = {}
        self.far = set()

    def __contains__(self, instance_id):
        return instance_id in self.env.house.objects

    @property
    def held(self):
        return self.env.house.held

    def update(self, observation):
        size = self.env.scene.voxel_size
        if observation.pose.cell(size) != self.pose.cell(size):
            self.far.clear()
        self.observation = observation
        self.pose = observation.pose
        self.step = observation.step
        keys = {d.key for d in observation.detections}
        self.assignments = {k: i for k, i in self.env.frame_ids.items() if k in keys}
        return None

    def apply_action(self, name, args, success=True):
        pass

    def mark_full(self, instance_id):
        pass

    def mark_far(self, instance_id):
        self.far.add(instance_id)

    def mark_blocked(self, cell):
        pass

    def visible_ids(self):
        return set(self.assignments.values())

    def pixel_mask(self, instance_id):
        if self.observation is None:
            return np.zeros((self.camera.height, self.camera.width), dtype=bool)
        keys = [k for k, i in self.assignments.items() if i == instance_id]
        return np.isin(self.observation.segmentation, keys)

    def centroid(self, instance_id):
        obj = self.env.house.objects[instance_id]
        return tuple(float(c) for c in obj.centroid(self.env.house.voxel_size))

    def footprint(self, instance_id):
        return sorted(self.env.house.objects[instance_id].footprint())

    def occupancy(self, targets=()):
        house = self.env.house
        return OccupancyGrid.from_blocked(house.dims[:2], house.blocked_cells())

    def snapshot(self):
        house = self.env.house
        visible = self.visible_ids()
        held = set(house.subtree(house.held)) if house.held else set()
        instances = []
        for obj_id in sorted(house.objects):
            obj = house.objects[obj_id]
            centroid = obj.centroid(house.voxel_size)
            prefix, _, ordinal = obj_id.rpartition("_")
            instances.append(
                BeliefInstance(
                    id=obj_id,
                    category=obj.category,
                    ordinal=int(ordinal) if ordinal.isdigit() else 0,
                    centroid=tuple(round(float(c), 6) for c in centroid),
                    states=tuple(sorted((p, bool(v)) for p, v in obj.states.items())),
                    parent=obj.parent,
                    visible=obj_id in visible,
                    near=obj_id not in self.far
                    and self.env.distance_to(obj_id) <= self.reach + 1e-9,
                    held=obj_id in held,
                    inside_closed=house.hidden(obj_id),
                    reported_full=obj.affordance.receptacle is not None
                    and len(obj.children) >= obj.capacity,
                )
            )
        return BeliefSnapshot(self.step, self.env.pose, tuple(instances), house.held)

    def dump(self, directory, tag=None):
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        tag = f"{self.step:04d}" if tag is None else tag
        with open(directory / f"oracle_{tag}.json", "w") as f:
            json.dump(self.snapshot().to_dict(), f, indent=1)
