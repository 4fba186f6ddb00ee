import json
from dataclasses import replace
from unittest import mock

import numpy as np
import pytest

from delib_agent.executor.budget import Budget, BudgetTracker
from delib_agent.executor.episode import (
    Episode,
    EpisodeSettings,
    canonical_subgoals,
    oracle_length,
    run_episode,
)
from delib_agent.executor.errors import BudgetExhausted, InvalidRunConfig
from delib_agent.executor.exceptions import (
    POST_EXECUTION,
    PRE_EXECUTION,
    ExceptionKind,
    ExceptionRecord,
    FailureCategory,
    blame,
    classify_exception,
    failure_category,
    no_effect,
)
from delib_agent.executor.recovery import (
    Decision,
    RecoveryContext,
    clear_destination,
    recover,
)
from delib_agent.executor.run import RunConfig, execute, read_dialog
from delib_agent.executor.trace import EpisodeTrace, read_trace
from delib_agent.monitor.annotate import TrajectoryRecord
from delib_agent.monitor.subgoals import Subgoal, save_subgoals
from delib_agent.navigation.errors import NotVisible, Unreachable
from delib_agent.planner.plans import PlanOutcome, PlanStatus
from delib_agent.sim import actions as act
from delib_agent.sim.actions import ActionResult, EnvAction
from delib_agent.sim.affordances import AffordanceTable
from delib_agent.sim.env import HouseholdEnv
from delib_agent.sim.observation import FrameDetection, Observation
from delib_agent.sim.templates import receptacle_full_scene
from delib_agent.world.belief import BeliefInstance, BeliefSnapshot
from delib_agent.world.geometry import Pose

AFFORDANCES = AffordanceTable.from_config()
KEYCHAIN_TO_SHELF = Subgoal("KeyChain", "isPlacedTo", "Shelf")


def _instance(instance_id, centroid=(1.0, 1.0, 0.5), parent=None, held=False, **states):
    category, _, ordinal = instance_id.rpartition("_")
    return BeliefInstance(
        id=instance_id,
        category=category,
        ordinal=int(ordinal),
        centroid=centroid,
        states=tuple(sorted(states.items())),
        parent=parent,
        held=held,
    )


def _belief(*instances, held=None):
    return BeliefSnapshot(
        0, Pose(0.5, 0.5), tuple(sorted(instances, key=lambda i: i.id)), held
    )


def _full_shelf(held_keychain=True):
    return _belief(
        _instance("CounterTop_0", (3.0, 0.5, 0.5)),
        _instance("Shelf_0", (1.5, 2.0, 0.5)),
        _instance("Book_0", (1.5, 2.0, 1.1), parent="Shelf_0"),
        _instance("KeyChain_0", (0.5, 0.5, 1.5), held=held_keychain),
        held="KeyChain_0" if held_keychain else None,
    )


def _context(belief, **kwargs):
    return RecoveryContext(KEYCHAIN_TO_SHELF, belief, AFFORDANCES, **kwargs)


def _exception(kind, target=None):
    return ExceptionRecord(kind, 10, "Place", target)


def _observation(held_category=None, detections=(), key=-1):
    segmentation = np.full((4, 4), key, dtype=np.int32)
    return Observation(
        Pose(0.0, 0.0), np.zeros((4, 4)), segmentation, list(detections), held_category
    )


def _small_settings(**kwargs):
    return EpisodeSettings(budget=Budget(max_steps=40, max_subgoal_steps=40), **kwargs)


class TestBudget:
    def test_caps_must_be_positive(self):
        with pytest.raises(InvalidRunConfig):
            Budget(max_steps=0)
        with pytest.raises(InvalidRunConfig):
            Budget(max_replans=-1)

    def test_from_config_takes_overrides(self):
        budget = Budget.from_config({"max_steps": 50, "max_replans": None})
        assert budget.max_steps == 50
        assert budget.max_replans == 5
        assert budget.max_failed_actions == 30

    def test_step_cap(self):
        tracker = BudgetTracker(Budget(max_steps=2))
        tracker.record(True)
        tracker.check()
        tracker.record(True)
        with pytest.raises(BudgetExhausted) as e:
            tracker.check()
        assert (e.value.cap, e.value.scope, e.value.value) == ("max_steps", "episode", 2)

    def test_failed_action_cap(self):
        tracker = BudgetTracker(Budget(max_failed_actions=1))
        tracker.record(False)
        with pytest.raises(BudgetExhausted) as e:
            tracker.check()
        assert e.value.cap == "max_failed_actions"

    def test_subgoal_cap_resets_per_subgoal(self):
        tracker = BudgetTracker(Budget(max_subgoal_steps=1))
        tracker.record(True)
        with pytest.raises(BudgetExhausted) as e:
            tracker.check()
        assert e.value.scope == "subgoal"
        tracker.start_subgoal()
        tracker.check()
        assert tracker.to_dict() == {"steps": 1, "failed_actions": 0}

    def test_accepted_step_without_effect_counts_as_failed(self):
        tracker = BudgetTracker(Budget(max_failed_actions=1))
        tracker.record(True)
        tracker.check()
        tracker.fail()
        with pytest.raises(BudgetExhausted) as e:
            tracker.check()
        assert e.value.cap == "max_failed_actions"
        assert tracker.to_dict() == {"steps": 1, "failed_actions": 1}


class TestExceptions:
    def test_phases(self):
        assert ExceptionKind.NO_PLAN_FOUND.phase == PRE_EXECUTION
        assert ExceptionKind.TARGET_NOT_VISIBLE.phase == PRE_EXECUTION
        assert ExceptionKind.RECEPTACLE_FULL.phase == POST_EXECUTION
        assert ExceptionKind.NO_EFFECT_OBSERVED.phase == POST_EXECUTION

    def test_classify_simulator_results(self):
        place = EnvAction(act.PLACE, (30, 30))
        full = classify_exception(
            4, "Place", "Shelf_0", result=ActionResult(place, False, "receptacle-full")
        )
        assert full.kind == ExceptionKind.RECEPTACLE_FULL
        assert (full.step, full.target) == (4, "Shelf_0")
        other = classify_exception(
            4, "Place", "Shelf_0", result=ActionResult(place, False, "not-near")
        )
        assert other.kind == ExceptionKind.SIMULATOR_REJECTION
        assert other.detail == "not-near"

    def test_classify_grounding_errors(self):
        lost = classify_exception(1, error=NotVisible("Mug_0"))
        blocked = classify_exception(1, error=Unreachable((0, 0)))
        assert lost.kind == ExceptionKind.TARGET_NOT_VISIBLE
        assert blocked.kind == ExceptionKind.PATH_BLOCKED

    def test_classify_planner_timeout(self):
        outcome = PlanOutcome(PlanStatus.TIMEOUT, elapsed=2.5)
        record = classify_exception(7, outcome=outcome)
        assert record.kind == ExceptionKind.NO_PLAN_FOUND
        assert record.detail == "timeout after 2.5s"

    def test_categories(self):
        assert failure_category(ExceptionKind.PATH_BLOCKED) == FailureCategory.GROUNDING
        assert failure_category(ExceptionKind.HAND_OCCUPIED) == FailureCategory.INTERACTION
        assert failure_category(ExceptionKind.OBJECT_NOT_FOUND) == FailureCategory.OBJECT_NOT_FOUND

    def test_blame_takes_the_most_specific_category(self):
        categories = [FailureCategory.INTERACTION, FailureCategory.PLAN_NOT_FOUND]
        assert blame(categories) == FailureCategory.PLAN_NOT_FOUND
        assert blame([FailureCategory.GROUNDING, FailureCategory.SUBGOAL_PREDICTION]) == (
            FailureCategory.SUBGOAL_PREDICTION
        )
        assert blame([]) == FailureCategory.OTHER

    def test_record_to_dict(self):
        record = _exception(ExceptionKind.RECEPTACLE_FULL, "Shelf_0")
        assert record.to_dict() == {
            "kind": "ReceptacleFull",
            "phase": "post-execution",
            "action": "Place",
            "target": "Shelf_0",
            "detail": "",
        }


class TestNoEffect:
    def test_pickup_needs_the_object_in_hand(self):
        assert no_effect(act.PICK_UP, "Mug", (0, 0), _observation(held_category=None))
        assert not no_effect(act.PICK_UP, "Mug", (0, 0), _observation(held_category="Mug"))

    def test_place_needs_an_empty_hand(self):
        assert no_effect(act.PLACE, "Sink", (0, 0), _observation(held_category="Mug"))
        assert not no_effect(act.PLACE, "Sink", (0, 0), _observation())

    def test_toggle_checks_the_state_label(self):
        still_off = FrameDetection(3, "Toaster", (0, 0, 4, 4), 16, {"isToggled": False})
        turned_on = FrameDetection(3, "Toaster", (0, 0, 4, 4), 16, {"isToggled": True})
        off_frame = _observation(detections=[still_off], key=3)
        assert no_effect(act.TOGGLE_ON, "Toaster", (1, 1), off_frame)
        assert not no_effect(
            act.TOGGLE_ON, "Toaster", (1, 1), _observation(detections=[turned_on], key=3)
        )

    def test_whole_object_still_there_after_slicing(self):
        bread = FrameDetection(2, "Bread", (0, 0, 4, 4), 16)
        assert no_effect(act.SLICE, "Bread", (1, 1), _observation(detections=[bread], key=2))
        assert not no_effect(act.SLICE, "Bread", (1, 1), _observation())


class TestRecovery:
    def test_full_receptacle_is_cleared_first(self):
        belief = _full_shelf()
        decision = recover(_exception(ExceptionKind.RECEPTACLE_FULL, "Shelf_0"), _context(belief))
        assert decision.decision == Decision.PUSH_SUBGOAL
        assert str(decision.subgoal) == "(Book_0, isPlacedTo, CounterTop_0)"
        assert decision.to_dict()["subgoal"] == "(Book_0, isPlacedTo, CounterTop_0)"

    def test_full_receptacle_without_replanning(self):
        belief = _full_shelf()
        context = _context(belief, replanning=False)
        decision = recover(_exception(ExceptionKind.RECEPTACLE_FULL, "Shelf_0"), context)
        assert decision.decision == Decision.ABANDON

    def test_full_receptacle_with_nowhere_to_clear_to(self):
        belief = _belief(
            _instance("Shelf_0"),
            _instance("Book_0", parent="Shelf_0"),
        )
        decision = recover(_exception(ExceptionKind.RECEPTACLE_FULL, "Shelf_0"), _context(belief))
        assert decision.decision == Decision.REPLAN

    def test_replanning_cap(self):
        belief = _belief(_instance("Shelf_0"))
        context = _context(belief, replans=5, max_replans=5)
        decision = recover(_exception(ExceptionKind.SIMULATOR_REJECTION, "Shelf_0"), context)
        assert decision.decision == Decision.ABANDON

    def test_occupied_hand_is_freed(self):
        belief = _belief(
            _instance("CounterTop_0", (3.0, 0.5, 0.5)),
            _instance("Mug_0", (0.5, 0.5, 1.5), held=True),
            held="Mug_0",
        )
        decision = recover(_exception(ExceptionKind.HAND_OCCUPIED, "Apple_0"), _context(belief))
        assert decision.decision == Decision.PUSH_SUBGOAL
        assert decision.subgoal.patient_id == "Mug_0"
        assert decision.subgoal.destination_id == "CounterTop_0"

    def test_planning_failure_retries_without_pruning_once(self):
        context = _context(_belief())
        exception = _exception(ExceptionKind.NO_PLAN_FOUND)
        assert recover(exception, context).decision == Decision.RETRY_UNPRUNED
        context.unpruned_tried = True
        assert recover(exception, context).decision == Decision.ABANDON

    def test_failed_search_is_final(self):
        decision = recover(_exception(ExceptionKind.OBJECT_NOT_FOUND), _context(_belief()))
        assert decision.decision == Decision.ABANDON

    def test_no_effect_is_retried_once(self):
        context = _context(_belief())
        exception = _exception(ExceptionKind.NO_EFFECT_OBSERVED, "Mug_0")
        assert recover(exception, context).decision == Decision.RETRY
        context.retried = True
        assert recover(exception, context).decision == Decision.REPLAN

    def test_lost_target_is_regrounded_once(self):
        context = _context(_belief())
        exception = _exception(ExceptionKind.TARGET_NOT_VISIBLE, "Mug_0")
        assert recover(exception, context).decision == Decision.REGROUND
        context.regrounded = True
        assert recover(exception, context).decision == Decision.REPLAN


class TestClearDestination:
    def test_preferred_category_beats_distance(self):
        belief = _belief(
            _instance("DiningTable_0", (0.6, 0.6, 0.4)),
            _instance("CounterTop_0", (3.0, 3.0, 0.5)),
            _instance("Mug_0", held=True),
            held="Mug_0",
        )
        mug = belief.get("Mug_0")
        assert clear_destination(belief, mug, AFFORDANCES).id == "CounterTop_0"
        assert clear_destination(belief, mug, AFFORDANCES, preferred="Sofa").id == "DiningTable_0"

    def test_full_and_closed_receptacles_are_skipped(self):
        belief = _belief(
            _instance("SideTable_0", (0.6, 0.6, 0.4)),
            _instance("Book_0", parent="SideTable_0"),
            _instance("Cabinet_0", (1.0, 1.0, 0.4), isClosed=True),
            _instance("Pillow_0", held=True),
            held="Pillow_0",
        )
        assert clear_destination(belief, belief.get("Pillow_0"), AFFORDANCES) is None


class TestTrace:
    def test_records_and_exceptions(self, tmp_path):
        trace = EpisodeTrace()
        pose = Pose(1.0, 1.0)
        place = EnvAction(act.PLACE, (30, 30))
        trace.record(1, pose, "Place@30,30", ActionResult(place, False, "receptacle-full"))
        exception = _exception(ExceptionKind.RECEPTACLE_FULL, "Shelf_0")
        trace.record(1, pose, "Place", exception=exception)
        trace.finish({"success": False})
        assert len(trace) == 3
        assert trace.exceptions() == [exception.to_dict()]
        trace.write(tmp_path / "run" / "trace.jsonl")
        records = read_trace(tmp_path / "run" / "trace.jsonl")
        assert records[0]["result"]["reason"] == "receptacle-full"
        assert records[-1] == {"metrics": {"success": False}}

    def test_timings_go_to_their_own_table(self, tmp_path):
        trace = EpisodeTrace()
        trace.time_plan(KEYCHAIN_TO_SHELF, PlanOutcome(PlanStatus.NO_SOLUTION, elapsed=0.5), True)
        trace.write_timings(tmp_path / "timings.csv")
        lines = (tmp_path / "timings.csv").read_text().splitlines()
        assert lines[0] == "subgoal,status,objects,plan_length,expanded,pruning,seconds"
        assert lines[1].startswith('"(KeyChain, isPlacedTo, Shelf)",NoSolution,0,0,0,True')


class TestEpisode:
    def test_no_subgoals_is_a_subgoal_prediction_failure(self):
        scene, task = receptacle_full_scene()
        result = run_episode(scene, task, [], settings=_small_settings(initial_scan=False))
        assert not result.success
        assert result.failure_category == "SubgoalPrediction"
        assert result.metrics["length"] == 0

    def test_step_cap_stops_the_episode(self):
        scene, task = receptacle_full_scene()
        settings = EpisodeSettings(budget=Budget(max_steps=3))
        result = run_episode(scene, task, canonical_subgoals(task), settings=settings)
        assert not result.success
        assert result.failure_category == "Other"
        assert result.metrics["length"] == 3
        assert len(result.trace) == 4

    def test_same_seed_same_trace(self):
        scene, task = receptacle_full_scene()
        first = run_episode(scene, task, canonical_subgoals(task), settings=_small_settings())
        second = run_episode(scene, task, canonical_subgoals(task), settings=_small_settings())
        assert first.trace.records == second.trace.records

    def test_last_subgoal_only(self):
        scene, task = receptacle_full_scene()
        subgoals = [Subgoal("Book", "isPickedUp"), KEYCHAIN_TO_SHELF]
        settings = _small_settings(initial_scan=False, last_subgoal_only=True)
        result = run_episode(scene, task, subgoals, settings=settings)
        assert [s["predicate"] for s in result.metrics["subgoals"]] == ["isPlacedTo"]

    def test_trajectory_starts_from_the_initial_state(self):
        scene, task = receptacle_full_scene()
        settings = _small_settings(initial_scan=False, record_trajectory=True)
        result = run_episode(scene, task, [], settings=settings)
        assert isinstance(result.trajectory, TrajectoryRecord)
        assert result.trajectory.steps[0].action is None
        assert result.trajectory.steps[0].satisfied == (False,)

    @mock.patch("delib_agent.executor.episode.plan_subgoal", autospec=True)
    def test_unsolvable_subgoal_is_retried_unpruned_then_abandoned(self, mocked_plan):
        mocked_plan.return_value = PlanOutcome(PlanStatus.NO_SOLUTION)
        scene, task = receptacle_full_scene()
        settings = _small_settings(initial_scan=False)
        result = run_episode(scene, task, [KEYCHAIN_TO_SHELF], settings=settings)
        assert result.failure_category == "PlanNotFound"
        assert [c.kwargs["pruning"] for c in mocked_plan.call_args_list] == [True, False]
        assert result.metrics["recoveries"] == {"Abandon": 1, "RetryUnpruned": 1}
        assert result.metrics["length"] == 0

    def test_rejected_manipulation_is_not_repeated_from_the_same_belief(self):
        scene, task = receptacle_full_scene()
        episode = Episode(scene, task, _small_settings())
        observation = episode.env.reset()
        episode.world.update(observation)
        target = sorted(episode.world.visible_ids())[0]
        rejection = ActionResult(EnvAction(act.PICK_UP, (0, 0)), False, act.HAND_OCCUPIED)
        with mock.patch.object(
            HouseholdEnv, "step", autospec=True, return_value=(rejection, observation)
        ) as step:
            first = episode.manipulate(act.PICK_UP, target, [target])
            second = episode.manipulate(act.PICK_UP, target, [target])
        assert first.kind == ExceptionKind.HAND_OCCUPIED
        assert second.kind == ExceptionKind.SIMULATOR_REJECTION
        assert second.detail == "repeated"
        assert step.call_count == 1

    def test_not_near_rejection_clears_the_near_flag(self):
        scene, task = receptacle_full_scene()
        episode = Episode(scene, task, _small_settings())
        observation = episode.env.reset()
        episode.world.update(observation)
        target = sorted(episode.world.visible_ids())[0]
        rejection = ActionResult(EnvAction(act.PICK_UP, (0, 0)), False, act.NOT_NEAR)
        with mock.patch.object(
            HouseholdEnv, "step", autospec=True, return_value=(rejection, observation)
        ):
            episode.manipulate(act.PICK_UP, target, [target])
        assert not episode.world.snapshot().get(target).near
        assert target in episode.world.far

    @pytest.mark.slow
    def test_swallowed_actions_end_the_episode_at_the_failure_cap(self):
        scene, task = receptacle_full_scene()
        settings = EpisodeSettings(
            noise={"p_action_fail": 1.0}, budget=Budget(max_replans=100)
        )
        result = run_episode(scene, task, canonical_subgoals(task), settings=settings)
        assert not result.success
        assert result.metrics["failed_actions"] == settings.budget.max_failed_actions
        assert result.metrics["exceptions"]["NoEffectObserved"] > 0
        assert result.metrics["length"] < settings.budget.max_steps

    @pytest.mark.slow
    def test_full_shelf_is_cleared_before_placing(self):
        scene, task = receptacle_full_scene()
        result = run_episode(scene, task, canonical_subgoals(task))
        assert result.success
        handled = [r for r in result.trace.records if "exception" in r]
        full = [r for r in handled if r["exception"]["kind"] == "ReceptacleFull"]
        assert full
        assert full[0]["recovery"]["decision"] == "PushSubgoal"
        assert full[0]["recovery"]["subgoal"].startswith("(Book_0, isPlacedTo, ")

    @pytest.mark.slow
    def test_full_shelf_without_replanning_fails(self):
        scene, task = receptacle_full_scene()
        settings = EpisodeSettings(replanning=False)
        result = run_episode(scene, task, canonical_subgoals(task), settings=settings)
        assert not result.success
        assert result.metrics["subgoals"][0]["status"] == "Abandoned"

    @pytest.mark.slow
    def test_oracle_length_on_an_uncapped_shelf(self):
        scene, task = receptacle_full_scene()
        instances = [replace(i, capacity=None) for i in scene.instances]
        length = oracle_length(replace(scene, instances=instances), task)
        assert length is not None and length > 0


class TestRunConfig:
    def _files(self, tmp_path):
        scene, task = receptacle_full_scene()
        scene.save(tmp_path / "scene.json")
        task.save(tmp_path / "task.json")
        save_subgoals(canonical_subgoals(task), tmp_path / "subgoals.json")
        (tmp_path / "dialog.txt").write_text("Put the key chain on the shelf.\n\n")

    def test_needs_exactly_one_scene_source(self):
        with pytest.raises(InvalidRunConfig):
            RunConfig(subgoals="s.json").validate()
        with pytest.raises(InvalidRunConfig):
            RunConfig(scene="a.json", task="t.json", generator={"template": "Toast"},
                      subgoals="s.json").validate()

    def test_needs_exactly_one_subgoal_source(self):
        with pytest.raises(InvalidRunConfig):
            RunConfig(scene="a.json", task="t.json").validate()
        with pytest.raises(InvalidRunConfig):
            RunConfig(scene="a.json", task="t.json", subgoals="s.json", dialog="d.txt").validate()

    def test_lexicon_needs_dialog(self):
        with pytest.raises(InvalidRunConfig):
            RunConfig(scene="a.json", task="t.json", subgoals="s.json", lexicon="l.yaml").validate()

    def test_bad_settings(self):
        base = dict(scene="a.json", task="t.json", subgoals="s.json")
        with pytest.raises(InvalidRunConfig):
            RunConfig(noise={"p_action_fail": 2.0}, **base).validate()
        with pytest.raises(InvalidRunConfig):
            RunConfig(budget={"max_steps": 0}, **base).validate()
        with pytest.raises(InvalidRunConfig):
            RunConfig(budget={"max_jumps": 3}, **base).validate()
        with pytest.raises(InvalidRunConfig):
            RunConfig(timeout=0, **base).validate()

    def test_unknown_keys(self):
        with pytest.raises(InvalidRunConfig):
            RunConfig.from_dict({"scene": "a.json", "colour": "red"})

    def test_paths_resolve_against_the_config_file(self, tmp_path):
        (tmp_path / "run.json").write_text(
            json.dumps(
                {"scene": "scene.json", "task": "task.json", "subgoals": "s.json", "seed": 4}
            )
        )
        run_config = RunConfig.load(tmp_path / "run.json")
        assert run_config.scene == str(tmp_path / "scene.json")
        assert run_config.seed == 4

    def test_unreadable_config(self, tmp_path):
        (tmp_path / "run.json").write_text("{not json")
        with pytest.raises(InvalidRunConfig):
            RunConfig.load(tmp_path / "run.json")

    def test_settings_carry_switches(self):
        run_config = RunConfig(budget={"max_steps": 9}, pruning=False, trajectory="t.json")
        settings = run_config.settings()
        assert settings.budget.max_steps == 9
        assert not settings.pruning
        assert settings.record_trajectory

    def test_read_dialog_formats(self, tmp_path):
        (tmp_path / "turns.json").write_text('["Make toast.", "Thanks!"]')
        (tmp_path / "turns.txt").write_text("Make toast.\n\nThanks!\n")
        assert read_dialog(tmp_path / "turns.json") == ["Make toast.", "Thanks!"]
        assert read_dialog(tmp_path / "turns.txt") == ["Make toast.", "Thanks!"]

    def test_execute_writes_outputs(self, tmp_path):
        self._files(tmp_path)
        run_config = RunConfig(
            scene=str(tmp_path / "scene.json"),
            task=str(tmp_path / "task.json"),
            subgoals=str(tmp_path / "subgoals.json"),
            budget={"max_steps": 20},
            out=str(tmp_path / "out"),
            trajectory=str(tmp_path / "out" / "trajectory.json"),
        )
        result = execute(run_config)
        metrics = json.loads((tmp_path / "out" / "metrics.json").read_text())
        assert metrics == json.loads(json.dumps(result.metrics))
        assert metrics["task"] == "ReceptacleFull"
        assert metrics["length"] <= 20
        assert read_trace(tmp_path / "out" / "trace.jsonl")[-1] == {"metrics": metrics}
        assert (tmp_path / "out" / "timings.csv").exists()
        trajectory = TrajectoryRecord.load(tmp_path / "out" / "trajectory.json")
        assert len(trajectory.steps) == metrics["length"] + 1

    def test_execute_from_dialog(self, tmp_path):
        self._files(tmp_path)
        run_config = RunConfig(
            scene=str(tmp_path / "scene.json"),
            task=str(tmp_path / "task.json"),
            dialog=str(tmp_path / "dialog.txt"),
            budget={"max_steps": 10},
        )
        result = execute(run_config)
        assert result.metrics["subgoals"][0]["destination"] == "Shelf"

    def test_missing_scene_file(self, tmp_path):
        run_config = RunConfig(
            scene=str(tmp_path / "nope.json"), task=str(tmp_path / "nope.json"), subgoals="s.json"
        )
        with pytest.raises(InvalidRunConfig):
            execute(run_config)
