"""The agent's internal representation: voxel map plus instance table."""
from pathlib import Path

import numpy as np

from delib_agent import config, logger
from delib_agent.navigation.occupancy import build_occupancy
from delib_agent.sim.affordances import AffordanceTable
from delib_agent.world.belief import BeliefInstance, BeliefSnapshot
from delib_agent.world.effects import apply_action_effect
from delib_agent.world.geometry import Camera, reach_distance
from delib_agent.world.instances import InstanceTable
from delib_agent.world.matching import match_instances
from delib_agent.world.perception import project_observation
from delib_agent.world.relations import infer_parents
from delib_agent.world.voxel_map import VoxelMap


class WorldModel:
    """Belief built from observations and the agent's own actions.

    Every observation is projected into the voxel map, matched against the
    instance table, and its state labels and support relations are fused
    into the matched records.

    Args:
        dims (tuple): Map size in voxels.
        affordances (AffordanceTable): Category semantics.
        camera (Camera): Intrinsics of the observations.
        voxel_size (float): Edge length in meters.
        interaction_distance (float): Reach used for the near flag.
        exact_limit (int): Largest per-category count matched exactly.

    """

    def __init__(
        self,
        dims,
        affordances=None,
        camera=None,
        voxel_size=None,
        interaction_distance=None,
        exact_limit=None,
    ):
        self.map = VoxelMap(dims, voxel_size)
        self.table = InstanceTable()
        self.affordances = affordances or AffordanceTable.from_config()
        self.camera = camera or Camera()
        self.reach = (
            config["navigation"]["interaction_distance"]
            if interaction_distance is None
            else interaction_distance
        )
        self.exact_limit = exact_limit
        self.pose = None
        self.step = 0
        self.observation = None
        self.assignments = {}
        self.far = set()

    def __contains__(self, instance_id):
        return instance_id in self.table

    @property
    def held(self):
        return self.table.held

    def inside_closed(self, instance_id):
        return any(
            self.affordances[self.table.get(a).category].openable
            and self.table.get(a).state("isClosed")
            for a in self.table.ancestors(instance_id)
        )

    def excluded(self):
        """Instances that cannot be in view: held, or shut away."""
        ids = self.table.held_subtree()
        ids.update(r.id for r in self.table if self.inside_closed(r.id))
        return ids

    def update(self, observation):
        """Folds one observation into the belief.

        Returns:
            (MatchResult)

        """
        frame = project_observation(observation, self.camera, self.map.dims, self.map.voxel_size)
        self.map.integrate(frame, observation.step)
        result = match_instances(
            frame.detections,
            self.table,
            frame.visible,
            observation.step,
            self.excluded(),
            self.exact_limit,
        )
        for handle in result.released:
            self.map.release(handle)
        for detection in frame.detections:
            record = self.table.get(result.assignments[detection.key])
            self.map.set_owner(detection.voxels, record.handle)
            for predicate, value in sorted(detection.labels.items()):
                record.perceive(predicate, value)
        infer_parents(frame.detections, result.assignments, self.table, self.affordances)
        self.assignments = dict(result.assignments)
        if self.pose is not None and observation.pose.cell(self.map.voxel_size) != self.pose.cell(
            self.map.voxel_size
        ):
            self.far.clear()
        self.pose = observation.pose
        self.step = observation.step
        self.observation = observation
        return result

    def apply_action(self, name, args, success=True):
        apply_action_effect(self.table, name, args, success, self.affordances, self.step)

    def mark_full(self, instance_id):
        if instance_id in self.table:
            self.table.get(instance_id).reported_full = True

    def mark_far(self, instance_id):
        """Holds the near flag of an instance false until the agent changes cell."""
        self.far.add(instance_id)

    def mark_blocked(self, cell):
        self.map.mark_collision(cell)

    def visible_ids(self):
        return set(self.assignments.values())

    def pixel_mask(self, instance_id):
        """Pixels of an instance in the last observation."""
        if self.observation is None:
            return np.zeros((self.camera.height, self.camera.width), dtype=bool)
        keys = [k for k, i in self.assignments.items() if i == instance_id]
        return np.isin(self.observation.segmentation, keys)

    def occupancy(self, targets=()):
        handles = [self.table.get(t).handle for t in targets if t in self.table]
        return build_occupancy(self.map, handles)

    def centroid(self, instance_id):
        return tuple(float(c) for c in self.table.get(instance_id).centroid)

    def footprint(self, instance_id):
        return sorted({(x, y) for x, y, _ in self.table.get(instance_id).voxels})

    def distance(self, instance_id):
        """Floor distance to the nearest cell the instance is seen to cover."""
        cells = self.footprint(instance_id)
        return reach_distance(self.pose.x, self.pose.y, cells, self.map.voxel_size)

    def _near(self, instance_id):
        if self.pose is None or instance_id in self.far:
            return False
        return self.distance(instance_id) <= self.reach + 1e-9

    def snapshot(self):
        visible = self.visible_ids()
        held = self.table.held_subtree()
        instances = []
        for record in sorted(self.table, key=lambda r: r.id):
            centroid = tuple(round(float(c), 6) for c in record.centroid)
            instances.append(
                BeliefInstance(
                    id=record.id,
                    category=record.category,
                    ordinal=record.ordinal,
                    centroid=centroid,
                    states=tuple(sorted(record.states.items())),
                    parent=record.parent,
                    visible=record.id in visible,
                    near=self._near(record.id),
                    held=record.id in held,
                    inside_closed=self.inside_closed(record.id),
                    reported_full=record.reported_full,
                )
            )
        return BeliefSnapshot(self.step, self.pose, tuple(instances), self.table.held)

    def dump(self, directory, tag=None):
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        tag = f"{self.step:04d}" if tag is None else tag
        self.map.dump(directory / f"map_{tag}.json")
        self.table.dump(directory / f"instances_{tag}.json")
        logger.debug(f"Dumped world model to {directory} ({tag})")
