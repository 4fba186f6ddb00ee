"""The simulated household the agent acts in."""

import numpy as np

from delib_agent import config, logger
from delib_agent.sim import actions as act
from delib_agent.sim.actions import ActionResult
from delib_agent.sim.affordances import AffordanceTable
from delib_agent.sim.errors import LayoutOverflow
from delib_agent.sim.household import Household
from delib_agent.sim.noise import inject_noise
from delib_agent.sim.observation import BACKGROUND, FrameDetection, Observation
from delib_agent.sim.render import render, write_pgm, write_ppm
from delib_agent.sim.rules import fire_appliance_rules
from delib_agent.world.geometry import (
    PITCH_STEP,
    PITCHES,
    Camera,
    Pose,
    heading_vector,
    reach_distance,
)


class HouseholdEnv:
    """Deterministic household with pixel-grounded manipulation.

    Args:
        scene (SceneSpec): Initial scene.
        affordances (AffordanceTable): Category semantics.
        noise (NoiseConfig or dict): Perturbations; silent by default.
        seed (int): Seed of the noise generator.
        camera (Camera): Agent camera.
        interaction_distance (float): Reach of manipulations in meters.
        frame_dir (Path): Writes a PGM/PPM pair per step when set.

    """

    def __init__(
        self,
        scene,
        affordances=None,
        noise=None,
        seed=0,
        camera=None,
        interaction_distance=None,
        frame_dir=None,
    ):
        self.scene = scene
        self.affordances = affordances or AffordanceTable.from_config()
        self.house = Household(scene, self.affordances)
        self.noise = inject_noise(noise, seed)
        self.camera = camera or Camera()
        self.reach = (
            config["navigation"]["interaction_distance"]
            if interaction_distance is None
            else interaction_distance
        )
        self.frame_dir = frame_dir
        agent = scene.agent
        self.pose = Pose(
            x=(agent["x"] + 0.5) * scene.voxel_size,
            y=(agent["y"] + 0.5) * scene.voxel_size,
            heading=agent.get("heading", 0),
            pitch=agent.get("pitch", 0),
        )
        self.steps = 0
        self.failed_actions = 0
        self.done = False
        self.frame_ids = {}
        self._pixel_ids = None
        self._last = None

    def reset(self):
        self._last = self._observe()
        return self._last

    @property
    def held(self):
        return self.house.held

    def atoms(self):
        return self.house.atoms()

    def step(self, action):
        """Executes one primitive.

        Args:
            action (EnvAction): Navigation, manipulation or Stop.

        Returns:
            (ActionResult, Observation)

        """
        if self._last is None:
            self.reset()
        if self.done:
            return ActionResult(action, False, act.EPISODE_OVER), self._last
        if action.name == act.STOP:
            self.done = True
            return ActionResult(action, True), self._last
        self.steps += 1
        if action.is_manipulation:
            result = self._manipulate(action)
        else:
            result = self._navigate(action)
        if not result.success:
            self.failed_actions += 1
            logger.debug(f"Step {self.steps}: {action} failed ({result.reason})")
        fire_appliance_rules(self.house)
        self._last = self._observe()
        return result, self._last

    def _navigate(self, action):
        pose = self.pose
        if action.name == act.FORWARD:
            dx, dy = heading_vector(pose.heading)
            cell = pose.cell(self.scene.voxel_size)
            target = (cell[0] + int(round(dx)), cell[1] + int(round(dy)))
            if not self.house.walkable(target):
                return ActionResult(action, False, act.BLOCKED)
            self.pose = pose.moved_to_cell(target, self.scene.voxel_size)
        elif action.name == act.TURN_LEFT:
            self.pose = pose.turned(-90)
        elif action.name == act.TURN_RIGHT:
            self.pose = pose.turned(90)
        else:
            delta = PITCH_STEP if action.name == act.LOOK_UP else -PITCH_STEP
            if pose.pitch + delta not in PITCHES:
                return ActionResult(action, False, act.BLOCKED)
            self.pose = pose.tilted(delta)
        return ActionResult(action, True)

    def distance_to(self, obj_id):
        """Floor distance to the nearest cell the object covers."""
        footprint = {v[:2] for v in self.house.objects[obj_id].voxels()}
        return reach_distance(self.pose.x, self.pose.y, footprint, self.scene.voxel_size)

    def _manipulate(self, action):
        col, row = action.pixel
        if not (0 <= col < self.camera.width and 0 <= row < self.camera.height):
            return ActionResult(action, False, act.NOT_VISIBLE)
        target = self._pixel_ids[row][col]
        if target is None:
            return ActionResult(action, False, act.NOTHING_AT_PIXEL)
        if self.distance_to(target) > self.reach + 1e-9:
            return ActionResult(action, False, act.NOT_NEAR)
        if self.noise.swallow_action():
            logger.debug(f"Step {self.steps}: {action} swallowed by noise")
            return ActionResult(action, True)
        handler = getattr(self, "_" + action.name.lower())
        reason = handler(self.house.objects[target])
        return ActionResult(action, reason is None, reason)

    def _pickup(self, obj):
        house = self.house
        if not obj.affordance.pickupable:
            return act.WRONG_AFFORDANCE
        if house.held is not None:
            return act.HAND_OCCUPIED
        house.detach(obj.id)
        house.held = obj.id
        house.layout()
        return None

    def _place(self, receptacle):
        house = self.house
        held = house.held
        if held is None:
            return act.WRONG_AFFORDANCE
        if not self.affordances.can_hold(receptacle.category, house.objects[held].category):
            return act.WRONG_AFFORDANCE
        if receptacle.states.get("isClosed") or receptacle.id in house.subtree(held):
            return act.WRONG_AFFORDANCE
        if len(receptacle.children) >= receptacle.capacity:
            return act.RECEPTACLE_FULL
        house.attach(held, receptacle.id)
        house.held = None
        try:
            house.layout()
        except LayoutOverflow:
            house.detach(held)
            house.held = held
            house.layout()
            return act.RECEPTACLE_FULL
        return None

    def _slice(self, obj):
        house = self.house
        knife = house.objects.get(house.held) if house.held else None
        if knife is None or not knife.affordance.slicer:
            return act.WRONG_AFFORDANCE
        if not obj.affordance.sliceable or house.is_held(obj.id):
            return act.WRONG_AFFORDANCE
        parent, voxel = obj.parent, obj.voxel
        states = {"isSliced": True}
        house.retire(obj.id)
        for _ in range(obj.affordance.slice_count):
            piece = house.new_object(obj.affordance.slice_into, voxel, states)
            if parent is not None:
                house.attach(piece.id, parent)
            else:
                voxel = (voxel[0], voxel[1], voxel[2] + 1)
        house.layout()
        return None

    def _toggle(self, obj, value):
        if not obj.affordance.toggleable or bool(obj.states.get("isToggled")) == value:
            return act.WRONG_AFFORDANCE
        obj.states["isToggled"] = value
        return None

    def _toggleon(self, obj):
        return self._toggle(obj, True)

    def _toggleoff(self, obj):
        return self._toggle(obj, False)

    def _set_closed(self, obj, value):
        if not obj.affordance.openable or bool(obj.states.get("isClosed")) == value:
            return act.WRONG_AFFORDANCE
        obj.states["isClosed"] = value
        return None

    def _open(self, obj):
        return self._set_closed(obj, False)

    def _close(self, obj):
        return self._set_closed(obj, True)

    def _pour(self, target):
        house = self.house
        held = house.objects.get(house.held) if house.held else None
        if held is None or not held.states.get("isFilledWithLiquid"):
            return act.WRONG_AFFORDANCE
        if not target.affordance.fillable or target.id == held.id:
            return act.WRONG_AFFORDANCE
        held.states["isFilledWithLiquid"] = False
        held.states["simbotIsFilledWithCoffee"] = False
        target.states["isFilledWithLiquid"] = True
        return None

    def _observe(self):
        depth, handles = render(self.house, self.pose, self.camera)
        by_handle = self.house.by_handle()
        flat = handles.reshape(-1)
        present, first = np.unique(flat[flat >= 0], return_index=True)
        # Keys follow raster order of first appearance.
        order = [int(h) for _, h in sorted(zip(first, present))] if len(present) else []
        segmentation = np.full(handles.shape, BACKGROUND, dtype=np.int32)
        pixel_ids = [[None] * handles.shape[1] for _ in range(handles.shape[0])]
        detections, frame_ids = [], {}
        for key, handle in enumerate(order):
            obj = self.house.objects[by_handle[handle]]
            mask = handles == handle
            segmentation[mask] = key
            rows, cols = np.nonzero(mask)
            for r, c in zip(rows.tolist(), cols.tolist()):
                pixel_ids[r][c] = obj.id
            frame_ids[key] = obj.id
            labels = {
                name: bool(obj.states.get(name, False))
                for name in obj.affordance.state_labels
            }
            detections.append(
                FrameDetection(
                    key=key,
                    category=obj.category,
                    bbox=(
                        int(cols.min()), int(rows.min()), int(cols.max()) + 1, int(rows.max()) + 1
                    ),
                    pixels=int(mask.sum()),
                    labels=self.noise.flip_labels(labels),
                )
            )
        self._pixel_ids = pixel_ids
        self.frame_ids = dict(frame_ids)
        dropped = set(self.noise.dropped([d.key for d in detections]))
        if dropped:
            for key in sorted(dropped):
                segmentation[segmentation == key] = BACKGROUND
            detections = [d for d in detections if d.key not in dropped]
        held = self.house.objects[self.house.held].category if self.house.held else None
        observation = Observation(
            pose=self.pose,
            depth=self.noise.perturb_depth(depth),
            segmentation=segmentation,
            detections=detections,
            held_category=held,
            step=self.steps,
        )
        if self.frame_dir is not None:
            stem = f"{self.frame_dir}/frame_{self.steps:04d}"
            write_pgm(stem + ".pgm", observation.depth)
            write_ppm(stem + ".ppm", observation.segmentation)
        return observation

    def truth_mask(self, obj_id):
        """Pixels of an object in the last rendered frame."""
        keys = [k for k, i in self.frame_ids.items() if i == obj_id]
        if not keys or self._last is None:
            return np.zeros((self.camera.height, self.camera.width), dtype=bool)
        return self._last.segmentation == keys[0]
