import math
from dataclasses import replace

import numpy as np
import pytest

from delib_agent.navigation.exploration import scan_primitives
from delib_agent.sim.actions import EnvAction
from delib_agent.sim.affordances import AffordanceTable
from delib_agent.sim.env import HouseholdEnv
from delib_agent.sim.templates import receptacle_full_scene
from delib_agent.world.effects import apply_action_effect
from delib_agent.world.errors import UnknownAction, UnknownInstance
from delib_agent.world.geometry import (
    Camera,
    Pose,
    heading_towards,
    heading_vector,
    reach_distance,
)
from delib_agent.world.instances import InstanceTable, farthest_instances
from delib_agent.world.matching import assign_pairs, match_instances
from delib_agent.world.model import WorldModel
from delib_agent.world.perception import ProjectedDetection
from delib_agent.world.relations import infer_parents, predict_on_relation, rests_on
from delib_agent.world.voxel_map import VoxelMap

AFFORDANCES = AffordanceTable.from_config()
VISIBLE = np.ones((6, 6, 6), dtype=bool)


def _detection(key, category, voxels, bbox=(0, 0, 1, 1)):
    return ProjectedDetection(key, category, frozenset(voxels), bbox)


def _scanned_world():
    scene, _ = receptacle_full_scene()
    env = HouseholdEnv(scene, AFFORDANCES)
    world = WorldModel(scene.dims, AFFORDANCES, camera=env.camera, voxel_size=scene.voxel_size)
    world.update(env.reset())
    for name in scan_primitives():
        _, observation = env.step(EnvAction(name))
        world.update(observation)
    return env, world


class TestGeometry:
    def test_heading_ninety_faces_plus_x(self):
        assert heading_vector(90) == (1.0, 0.0)
        assert heading_vector(0) == (0.0, 1.0)

    def test_heading_towards_rounds_to_compass(self):
        assert heading_towards(1.0, 0.1) == 90
        assert heading_towards(0.0, -2.0) == 180
        assert heading_towards(-1.0, 0.0) == 270

    def test_point_on_optical_axis_projects_to_image_center(self):
        camera = Camera()
        pose = Pose(1.0, 1.0, heading=0, pitch=0)
        assert camera.project(pose, (1.0, 3.0, pose.z)) == (30, 30)

    def test_point_behind_camera_does_not_project(self):
        pose = Pose(1.0, 1.0, heading=0, pitch=0)
        assert Camera().project(pose, (1.0, 0.0, pose.z)) is None

    def test_unproject_inverts_depth_along_axis(self):
        camera = Camera()
        pose = Pose(1.0, 1.0, heading=90, pitch=0)
        depth = np.zeros((camera.height, camera.width))
        depth[30, 30] = 2.0
        points = camera.unproject(pose, depth)
        assert np.allclose(points[30 * camera.width + 30], [3.0, 1.0, pose.z])
        assert np.isnan(points[0]).all()

    def test_reach_is_measured_to_the_nearest_cell(self):
        cells = {(2, 0), (0, 3)}
        expected = math.hypot(2.5, 0.5)
        assert reach_distance(0.0, 0.0, cells, voxel_size=1.0) == pytest.approx(expected)
        assert reach_distance(0.5, 3.5, cells, voxel_size=1.0) == 0.0



class TestMatching:
    def test_assign_pairs_exact_minimises_total_cost(self):
        cost = np.array([[1.0, 2.0], [1.5, 10.0]])
        assert assign_pairs(cost, exact_limit=6) == [(0, 1), (1, 0)]

    def test_assign_pairs_greedy_takes_nearest_pair_first(self):
        cost = np.array([[1.0, 2.0], [1.5, 10.0]])
        assert assign_pairs(cost, exact_limit=1) == [(0, 0), (1, 1)]

    def test_assign_pairs_empty(self):
        assert assign_pairs(np.zeros((0, 3))) == []

    def test_new_detection_registers_instance(self):
        table = InstanceTable()
        result = match_instances([_detection(0, "Mug", {(1, 1, 1)})], table, VISIBLE, step=3)
        assert result.created == ["Mug_0"]
        assert result.assignments == {0: "Mug_0"}
        assert table.get("Mug_0").last_seen == 3

    def test_equal_counts_merge_masks_by_union(self):
        table = InstanceTable()
        table.register("Mug", {(1, 1, 1)})
        result = match_instances([_detection(0, "Mug", {(1, 1, 2)})], table, VISIBLE)
        assert result.created == [] and result.removed == []
        assert table.get("Mug_0").voxels == {(1, 1, 1), (1, 1, 2)}

    def test_surplus_visible_instance_is_removed(self):
        table = InstanceTable()
        table.register("Mug", {(0, 0, 1)})
        table.register("Mug", {(4, 4, 1)})
        result = match_instances([_detection(0, "Mug", {(4, 4, 2)})], table, VISIBLE)
        assert result.removed == ["Mug_0"]
        assert result.assignments == {0: "Mug_1"}
        assert "Mug_0" not in table

    def test_out_of_view_instances_survive(self):
        table = InstanceTable()
        table.register("Mug", {(0, 0, 1)})
        visible = np.zeros_like(VISIBLE)
        match_instances([], table, visible)
        assert "Mug_0" in table

    def test_stale_estimate_is_replaced_not_merged(self):
        table = InstanceTable()
        record = table.register("Mug", {(0, 0, 1)})
        record.stale = True
        match_instances([_detection(0, "Mug", {(3, 3, 2)})], table, np.zeros_like(VISIBLE))
        assert record.voxels == {(3, 3, 2)}
        assert not record.stale

    def test_excluded_instances_are_not_matched(self):
        table = InstanceTable()
        table.register("Mug", {(1, 1, 1)})
        result = match_instances(
            [_detection(0, "Mug", {(1, 1, 1)})], table, VISIBLE, excluded={"Mug_0"}
        )
        assert result.created == ["Mug_1"]

    def test_ordinals_are_never_reused(self):
        table = InstanceTable()
        table.register("Mug", {(1, 1, 1)})
        table.remove("Mug_0")
        assert table.register("Mug", {(1, 1, 1)}).id == "Mug_1"

    def test_unknown_instance(self):
        with pytest.raises(UnknownInstance):
            InstanceTable().get("Mug_7")


class TestRelations:
    def test_mug_rests_on_counter(self):
        mug, counter = (10, 10, 20, 20), (0, 19, 40, 40)
        assert predict_on_relation(mug, counter, "Mug", "CounterTop", AFFORDANCES)

    def test_counter_never_rests_on_mug(self):
        mug, counter = (10, 10, 20, 20), (0, 19, 40, 40)
        assert not predict_on_relation(counter, mug, "CounterTop", "Mug", AFFORDANCES)

    def test_horizontally_offset_box_is_not_on(self):
        assert not predict_on_relation(
            (50, 10, 60, 20), (0, 19, 40, 40), "Mug", "CounterTop", AFFORDANCES
        )

    def _kitchen_table(self, bowl_voxel, apple_voxel):
        table = InstanceTable()
        table.register("Apple", {apple_voxel})
        table.register("Bowl", {bowl_voxel})
        table.register("CounterTop", {(x, 2, z) for x in range(3) for z in range(4)})
        return table, {0: "Apple_0", 1: "Bowl_0", 2: "CounterTop_0"}

    def test_box_overlap_alone_does_not_make_a_parent(self):
        # The bowl stands farther back on a lower surface but its box touches the apple's.
        table, assignments = self._kitchen_table((5, 5, 3), (1, 2, 4))
        detections = [
            _detection(0, "Apple", {(1, 2, 4)}, (10, 10, 14, 14)),
            _detection(1, "Bowl", {(5, 5, 3)}, (9, 14, 16, 18)),
            _detection(2, "CounterTop", table.get("CounterTop_0").voxels, (0, 12, 40, 30)),
        ]
        written = infer_parents(detections, assignments, table, AFFORDANCES)
        assert written == {"Apple_0": "CounterTop_0"}

    def test_apple_in_a_bowl_on_the_counter(self):
        table, assignments = self._kitchen_table((1, 2, 4), (1, 2, 5))
        detections = [
            _detection(0, "Apple", {(1, 2, 5)}, (10, 8, 14, 12)),
            _detection(1, "Bowl", {(1, 2, 4)}, (9, 11, 16, 15)),
            _detection(2, "CounterTop", table.get("CounterTop_0").voxels, (0, 10, 40, 30)),
        ]
        written = infer_parents(detections, assignments, table, AFFORDANCES)
        assert written == {"Apple_0": "Bowl_0", "Bowl_0": "CounterTop_0"}

    def test_rests_on_needs_the_footprint_and_the_height(self):
        counter = {(x, 2, z) for x in range(3) for z in range(4)}
        assert rests_on({(1, 2, 4)}, counter)
        assert not rests_on({(1, 3, 4)}, counter)
        assert not rests_on({(1, 2, 6)}, counter)
        assert not rests_on(set(), counter)


class TestEffects:
    def _table(self):
        table = InstanceTable()
        table.register("CounterTop", {(1, 1, z) for z in range(4)})
        table.register("Bread", {(1, 1, 4)}).parent = "CounterTop_0"
        table.register("Toaster", {(4, 1, z) for z in range(4)})
        return table

    def test_pickup_then_place(self):
        table = self._table()
        apply_action_effect(table, "PickUp", ("Bread_0",), True, AFFORDANCES)
        assert table.held == "Bread_0"
        assert table.get("Bread_0").parent is None
        apply_action_effect(table, "Place", ("Bread_0", "CounterTop_0"), True, AFFORDANCES)
        bread = table.get("Bread_0")
        assert table.held is None
        assert bread.parent == "CounterTop_0" and bread.relation_authoritative
        assert bread.stale

    def test_failed_action_changes_nothing(self):
        table = self._table()
        apply_action_effect(table, "PickUp", ("Bread_0",), False, AFFORDANCES)
        assert table.held is None

    def test_slice_replaces_whole_with_pieces(self):
        table = self._table()
        apply_action_effect(table, "Slice", ("Bread_0",), True, AFFORDANCES)
        pieces = table.of_category("BreadSlice")
        assert [p.id for p in pieces] == ["BreadSlice_0", "BreadSlice_1", "BreadSlice_2"]
        assert all(p.state("isSliced") and p.parent == "CounterTop_0" for p in pieces)
        assert "Bread_0" not in table

    def test_placing_into_running_toaster_cooks(self):
        table = self._table()
        apply_action_effect(table, "Slice", ("Bread_0",), True, AFFORDANCES)
        apply_action_effect(table, "ToggleOn", ("Toaster_0",), True, AFFORDANCES)
        apply_action_effect(table, "PickUp", ("BreadSlice_0",), True, AFFORDANCES)
        apply_action_effect(table, "Place", ("BreadSlice_0", "Toaster_0"), True, AFFORDANCES)
        assert table.get("BreadSlice_0").state("isCooked") is True
        assert "isCooked" in table.get("BreadSlice_0").authoritative

    def test_authoritative_states_ignore_perception(self):
        table = self._table()
        apply_action_effect(table, "ToggleOn", ("Toaster_0",), True, AFFORDANCES)
        assert not table.get("Toaster_0").perceive("isToggled", False)
        assert table.get("Toaster_0").state("isToggled") is True

    def test_navigation_actions_have_no_effect(self):
        table = self._table()
        apply_action_effect(table, "GoTo", ("Bread_0",), True, AFFORDANCES)
        assert table.held is None

    def test_unknown_action(self):
        with pytest.raises(UnknownAction):
            apply_action_effect(self._table(), "Juggle", ("Bread_0",), True, AFFORDANCES)


def test_farthest_instances_ranks_by_distance():
    table = InstanceTable()
    table.register("Mug", {(1, 1, 1)})
    table.register("Mug", {(9, 9, 1)})
    table.register("Cup", {(5, 5, 1)})
    pose = Pose(0.0, 0.0)
    assert [r.id for r in farthest_instances(table, pose, k=2)] == ["Mug_1", "Cup_0"]


def test_farthest_instances_measures_from_the_camera_height():
    table = InstanceTable()
    table.register("Mug", {(4, 0, 0)})
    table.register("Cup", {(5, 0, 5)})
    # The cup is farther in the floor plane, the mug is farther from the eye.
    assert [r.id for r in farthest_instances(table, Pose(0.0, 0.0), k=1)] == ["Mug_0"]


def test_voxel_map_dump_marks_seen_and_occupied(tmp_path):
    voxel_map = VoxelMap((3, 2, 1))
    voxel_map.occupied[1, 0, 0] = True
    voxel_map.last_seen[0, 0, 0] = 0
    voxel_map.dump(tmp_path / "map.json")
    assert voxel_map.to_dict()["slices"] == [[".# ", "   "]]
    assert (tmp_path / "map.json").exists()


class TestWorldModel:
    def test_scan_finds_the_furniture(self):
        _, world = _scanned_world()
        categories = world.snapshot().categories()
        assert "CounterTop" in categories
        assert "Shelf" in categories

    def test_belief_categories_exist_in_the_scene(self):
        env, world = _scanned_world()
        truth = {spec.category for spec in env.scene.instances}
        assert set(world.snapshot().categories()) <= truth

    def test_reobserving_a_frame_never_adds_instances(self):
        env, world = _scanned_world()
        before = len(world.table)
        world.update(env._last)
        assert len(world.table) <= before

    def test_snapshot_digest_is_deterministic(self):
        _, first = _scanned_world()
        _, second = _scanned_world()
        assert first.snapshot().digest() == second.snapshot().digest()

    def test_dump_writes_map_and_table(self, tmp_path):
        _, world = _scanned_world()
        world.dump(tmp_path, tag="scan")
        assert (tmp_path / "map_scan.json").exists()
        assert (tmp_path / "instances_scan.json").exists()

    def test_far_mark_holds_until_the_agent_changes_cell(self):
        env, world = _scanned_world()
        target = sorted(world.visible_ids())[0]
        world.mark_far(target)
        world.update(env._last)
        assert not world.snapshot().get(target).near
        moved = replace(env._last, pose=env._last.pose.moved_to_cell((1, 1)))
        world.update(moved)
        assert world.far == set()
