from dataclasses import replace
from pathlib import Path

import pytest

from delib_agent.monitor.subgoals import Subgoal
from delib_agent.pddl import ground, parse_domain, parse_problem
from delib_agent.planner.errors import InvalidRequest
from delib_agent.planner.plans import MidLevelAction, PlanStatus
from delib_agent.planner.problem import (
    bind_subgoal,
    build_problem,
    dummy_id,
    inject_unobserved,
    prune_scene,
)
from delib_agent.planner.relevance import RelevanceTable
from delib_agent.planner.search import search_plan
from delib_agent.planner.service import check_config, load_household_domain, plan_subgoal
from delib_agent.planner.validate import validate_plan
from delib_agent.sim.affordances import AffordanceTable
from delib_agent.world.belief import BeliefInstance, BeliefSnapshot
from delib_agent.world.geometry import Pose

DATA = Path(__file__).resolve().parents[1] / "data" / "pddl"
KNIFE_DOMAIN = (DATA / "knife_domain.pddl").read_text()
KNIFE_PROBLEM = (DATA / "knife_problem.pddl").read_text()

AFFORDANCES = AffordanceTable.from_config()
RELEVANCE = RelevanceTable.from_config()
POSE = Pose(0.5, 0.5)


def _instance(instance_id, centroid, parent=None, reported_full=False, **states):
    category, _, ordinal = instance_id.rpartition("_")
    return BeliefInstance(
        id=instance_id,
        category=category,
        ordinal=int(ordinal),
        centroid=centroid,
        states=tuple(sorted(states.items())),
        parent=parent,
        reported_full=reported_full,
    )


def _belief(*instances):
    return BeliefSnapshot(step=0, pose=POSE, instances=tuple(sorted(instances, key=lambda i: i.id)))


def _kitchen(*extra, mug_clean=False):
    return _belief(
        _instance("CounterTop_0", (1.0, 2.0, 0.5)),
        _instance("Mug_0", (1.0, 2.0, 1.1), parent="CounterTop_0", isClean=mug_clean),
        _instance("Sink_0", (3.0, 2.0, 0.5)),
        _instance("Faucet_0", (3.5, 2.0, 0.9)),
        *extra,
    )


def _task(outcome):
    return ground(load_household_domain(), outcome.problem, simplify_static=True)


def _names(outcome):
    return [a.name for a in outcome.plan]


class TestSearch:
    def test_knife_plan_is_a_single_pickup(self):
        domain = parse_domain(KNIFE_DOMAIN)
        task = ground(domain, parse_problem(KNIFE_PROBLEM, domain))
        outcome = search_plan(task, timeout=10)
        assert outcome.status == PlanStatus.SOLVED
        assert outcome.plan.to_lines() == ["pickup knife_0"]
        assert outcome.plan.cost == 1

    def test_uniform_cost_finds_the_same_plan(self):
        domain = parse_domain(KNIFE_DOMAIN)
        task = ground(domain, parse_problem(KNIFE_PROBLEM, domain))
        assert search_plan(task, timeout=10, uniform_cost=True).plan.to_lines() == [
            "pickup knife_0"
        ]

    def test_unreachable_goal(self):
        domain = parse_domain(KNIFE_DOMAIN)
        problem = KNIFE_PROBLEM.replace("(isNear Knife_0)", "")
        task = ground(domain, parse_problem(problem, domain))
        assert search_plan(task, timeout=10).status == PlanStatus.NO_SOLUTION

    def test_goal_true_in_initial_state(self):
        domain = parse_domain(KNIFE_DOMAIN)
        problem = KNIFE_PROBLEM.replace("(isNear Knife_0)", "(isNear Knife_0) (isPickedUp Knife_0)")
        outcome = search_plan(ground(domain, parse_problem(problem, domain)), timeout=10)
        assert outcome.status == PlanStatus.GOAL_ALREADY_SATISFIED
        assert len(outcome.plan) == 0 and outcome.solved


class TestValidate:
    def _task(self):
        domain = parse_domain(KNIFE_DOMAIN)
        return ground(domain, parse_problem(KNIFE_PROBLEM, domain))

    def test_valid_plan(self):
        assert validate_plan([MidLevelAction("Pickup", ("Knife_0",))], self._task())

    def test_empty_plan_misses_the_goal(self):
        verdict = validate_plan([], self._task())
        assert not verdict
        assert verdict.failed_step == 0
        assert verdict.reason == "goal not reached"

    def test_unknown_action_is_reported(self):
        verdict = validate_plan([MidLevelAction("Juggle", ("Knife_0",))], self._task())
        assert not verdict.valid and verdict.failed_step == 0


class TestBinding:
    def test_satisfying_patient_is_preferred(self):
        belief = _belief(
            _instance("Mug_0", (0.5, 1.0, 1.0), isClean=False),
            _instance("Mug_1", (4.0, 4.0, 1.0), isClean=True),
        )
        binding = bind_subgoal(Subgoal("Mug", "isClean"), belief, AFFORDANCES)
        assert binding.patient == "Mug_1"

    def test_nearest_patient_breaks_ties(self):
        belief = _belief(
            _instance("Mug_0", (4.0, 4.0, 1.0)),
            _instance("Mug_1", (0.5, 1.0, 1.0)),
        )
        assert bind_subgoal(Subgoal("Mug", "isPickedUp"), belief, AFFORDANCES).patient == "Mug_1"

    def test_excluded_instances_are_skipped(self):
        belief = _belief(
            _instance("Mug_0", (4.0, 4.0, 1.0)),
            _instance("Mug_1", (0.5, 1.0, 1.0)),
        )
        binding = bind_subgoal(
            Subgoal("Mug", "isPickedUp"), belief, AFFORDANCES, exclusions={"Mug_1"}
        )
        assert binding.patient == "Mug_0"

    def test_pinned_patient_wins(self):
        belief = _belief(
            _instance("Mug_0", (4.0, 4.0, 1.0)),
            _instance("Mug_1", (0.5, 1.0, 1.0)),
        )
        subgoal = Subgoal("Mug", "isPickedUp", patient_id="Mug_0")
        assert bind_subgoal(subgoal, belief, AFFORDANCES).patient == "Mug_0"

    def test_full_destination_is_ranked_last(self):
        belief = _belief(
            _instance("KeyChain_0", (0.5, 1.0, 1.0)),
            _instance("Shelf_0", (1.0, 1.0, 0.5), reported_full=True),
            _instance("Shelf_1", (3.0, 3.0, 0.5)),
        )
        binding = bind_subgoal(Subgoal("KeyChain", "isPlacedTo", "Shelf"), belief, AFFORDANCES)
        assert binding.destination == "Shelf_1"

    def test_unseen_patient_gets_a_placeholder(self):
        binding = bind_subgoal(Subgoal("Knife", "isPickedUp"), _belief(), AFFORDANCES)
        assert binding.patient == dummy_id("Knife") == "Knife_u0"

    def test_unseen_slice_needs_slicing_first(self):
        binding = bind_subgoal(Subgoal("BreadSlice", "isCooked"), _belief(), AFFORDANCES)
        assert binding.patient is None
        assert binding.prerequisite == Subgoal("Bread", "isSliced")


class TestProblem:
    def test_pruning_keeps_relevant_instances_and_supports(self):
        belief = _kitchen(
            _instance("Shelf_0", (4.0, 4.0, 0.5)),
            _instance("Book_0", (4.0, 4.0, 1.1), parent="Shelf_0"),
        )
        kept = prune_scene(belief, Subgoal("Mug", "isClean"), RELEVANCE)
        assert kept == ["CounterTop_0", "Faucet_0", "Mug_0", "Sink_0"]

    def test_pruning_keeps_every_support_below_a_nested_instance(self):
        belief = _belief(
            _instance("DiningTable_0", (2.0, 2.0, 0.5)),
            _instance("Plate_0", (2.0, 2.0, 1.0), parent="DiningTable_0"),
            _instance("Apple_0", (2.0, 2.0, 1.2), parent="Plate_0"),
            _instance("Shelf_0", (4.0, 4.0, 0.5)),
        )
        kept = prune_scene(belief, Subgoal("Apple", "isPickedUp"), RELEVANCE)
        assert kept == ["Apple_0", "DiningTable_0", "Plate_0"]

    def test_problem_writes_states_and_relations(self):
        belief = _kitchen()
        subgoal = Subgoal("Mug", "isClean")
        binding = bind_subgoal(subgoal, belief, AFFORDANCES)
        problem = build_problem(
            belief, subgoal, [i.id for i in belief.instances], binding, AFFORDANCES
        )
        assert ("parentReceptacles", "Mug_0", "CounterTop_0") in problem.init
        assert ("waterSource", "Faucet_0", "Sink_0") in problem.init
        assert ("canContain", "Sink_0", "Mug_0") in problem.init
        assert ("isClean", "Mug_0") not in problem.init

    def test_missing_tool_gets_an_unobserved_placeholder(self):
        belief = _belief(
            _instance("CounterTop_0", (1.0, 2.0, 0.5)),
            _instance("Mug_0", (1.0, 2.0, 1.1), parent="CounterTop_0"),
            _instance("Sink_0", (3.0, 2.0, 0.5)),
        )
        subgoal = Subgoal("Mug", "isClean")
        binding = bind_subgoal(subgoal, belief, AFFORDANCES)
        problem = build_problem(
            belief, subgoal, prune_scene(belief, subgoal, RELEVANCE), binding, AFFORDANCES
        )
        problem = inject_unobserved(problem, subgoal, RELEVANCE, AFFORDANCES, binding)
        assert ("Faucet_u0", "Faucet") in problem.objects
        assert ("unobserved", "Faucet_u0") in problem.init
        assert ("waterSource", "Faucet_u0", "Sink_0") in problem.init

    def test_nothing_missing_leaves_problem_alone(self):
        belief = _kitchen()
        subgoal = Subgoal("Mug", "isClean")
        binding = bind_subgoal(subgoal, belief, AFFORDANCES)
        problem = build_problem(
            belief, subgoal, [i.id for i in belief.instances], binding, AFFORDANCES
        )
        assert inject_unobserved(problem, subgoal, RELEVANCE, AFFORDANCES, binding) is problem


class TestPlanSubgoal:
    def test_empty_belief_searches_then_picks_up(self):
        outcome = plan_subgoal(Subgoal("Knife", "isPickedUp"), _belief())
        assert outcome.status == PlanStatus.SOLVED
        assert outcome.plan.to_lines() == ["search knife_u0", "goto knife_u0", "pickup knife_u0"]
        assert outcome.plan.cost == 12
        assert outcome.bindings == {"patient": "Knife_u0"}

    def test_slices_need_a_prerequisite(self):
        outcome = plan_subgoal(Subgoal("BreadSlice", "isCooked"), _belief())
        assert outcome.status == PlanStatus.NEEDS_SUBGOAL
        assert outcome.prerequisite == Subgoal("Bread", "isSliced")
        assert not outcome.solved

    def test_clean_mug_plan_is_valid(self):
        outcome = plan_subgoal(Subgoal("Mug", "isClean"), _kitchen())
        assert outcome.status == PlanStatus.SOLVED
        assert "PickUp" in _names(outcome) and "ToggleOn" in _names(outcome)
        assert validate_plan(outcome.plan, _task(outcome))

    def test_pruning_does_not_change_solvability(self):
        belief = _kitchen(
            _instance("Shelf_0", (4.0, 4.0, 0.5)),
            _instance("Book_0", (4.0, 4.0, 1.1), parent="Shelf_0"),
        )
        pruned = plan_subgoal(Subgoal("Mug", "isClean"), belief, pruning=True)
        full = plan_subgoal(Subgoal("Mug", "isClean"), belief, pruning=False)
        assert pruned.solved and full.solved
        assert len(pruned.problem.objects) < len(full.problem.objects)
        assert validate_plan(full.plan, _task(full))

    def test_knife_carried_in_a_bowl_is_taken_out_before_slicing(self):
        belief = BeliefSnapshot(
            step=0,
            pose=POSE,
            instances=(
                replace(_instance("Bowl_0", (1.0, 1.0, 1.5)), held=True, near=True),
                _instance("CounterTop_0", (1.0, 2.0, 0.5)),
                replace(
                    _instance("Knife_0", (1.0, 1.0, 1.6), parent="Bowl_0"), held=True, near=True
                ),
                replace(_instance("Tomato_0", (1.0, 2.0, 1.1), parent="CounterTop_0"), near=True),
            ),
            held="Bowl_0",
        )
        outcome = plan_subgoal(Subgoal("Tomato", "isSliced"), belief)
        assert outcome.status == PlanStatus.SOLVED
        names = _names(outcome)
        assert names[0] != "Slice"
        assert names.index("PickUp") < names.index("Slice")
        assert outcome.plan.actions[names.index("PickUp")].args == ("Knife_0",)
        assert validate_plan(outcome.plan, _task(outcome))

    def test_satisfied_subgoal_needs_no_actions(self):
        outcome = plan_subgoal(Subgoal("Mug", "isClean"), _kitchen(mug_clean=True))
        assert outcome.status == PlanStatus.GOAL_ALREADY_SATISFIED

    def test_full_only_destination_has_no_solution(self):
        belief = _belief(
            _instance("KeyChain_0", (0.5, 1.0, 1.0)),
            _instance("Shelf_0", (1.0, 1.0, 0.5), reported_full=True),
            _instance("Book_0", (1.0, 1.0, 1.1), parent="Shelf_0"),
        )
        outcome = plan_subgoal(Subgoal("KeyChain", "isPlacedTo", "Shelf"), belief)
        assert outcome.status == PlanStatus.NO_SOLUTION

    def test_artifacts_are_dumped(self, tmp_path):
        plan_subgoal(Subgoal("Knife", "isPickedUp"), _belief(), dump_dir=tmp_path, tag="knife")
        assert (tmp_path / "knife.pddl").read_text().startswith("(define (problem")
        assert (tmp_path / "knife.plan").read_text().splitlines()[-1] == "pickup knife_u0"
        assert (tmp_path / "knife.json").exists()

    def test_timeout_must_be_positive(self):
        with pytest.raises(InvalidRequest):
            plan_subgoal(Subgoal("Knife", "isPickedUp"), _belief(), timeout=0)

    def test_category_outside_the_domain(self):
        with pytest.raises(InvalidRequest):
            plan_subgoal(Subgoal("Unicorn", "isPickedUp"), _belief())


def test_configured_categories_are_domain_types():
    check_config()
