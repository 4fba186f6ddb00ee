"""One episode: plan each subgoal, act it out, watch, recover."""
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Optional

from delib_agent import logger
from delib_agent.executor.budget import Budget, BudgetTracker
from delib_agent.executor.errors import BudgetExhausted
from delib_agent.executor.exceptions import (
    ExceptionKind,
    ExceptionRecord,
    FailureCategory,
    blame,
    classify_exception,
    failure_category,
    no_effect,
)
from delib_agent.executor.recovery import Decision, RecoveryContext, recover
from delib_agent.executor.trace import EpisodeTrace
from delib_agent.monitor.annotate import TrajectoryRecord
from delib_agent.monitor.dialog import parse_subgoals
from delib_agent.monitor.errors import EmptyResult
from delib_agent.monitor.progress import check_completed, satisfying_instances
from delib_agent.monitor.subgoals import StatusLedger, Subgoal, SubgoalStatus
from delib_agent.navigation.errors import NavigationError, NoFrontier, NoGoalRegion
from delib_agent.navigation.exploration import (
    FRONTIER,
    OPEN,
    make_rng,
    scan_primitives,
    select_search_target,
)
from delib_agent.navigation.grounding import (
    NavGoalRegion,
    face_primitives,
    goal_region,
    interaction_point,
)
from delib_agent.navigation.occupancy import FREE
from delib_agent.navigation.paths import plan_path
from delib_agent.navigation.primitives import path_to_primitives
from delib_agent.pddl.errors import PDDLError
from delib_agent.planner.errors import PlanningError
from delib_agent.planner.plans import PlanStatus
from delib_agent.planner.relevance import RelevanceTable
from delib_agent.planner.service import plan_subgoal
from delib_agent.sim import actions as act
from delib_agent.sim.actions import EnvAction
from delib_agent.sim.affordances import AffordanceTable
from delib_agent.sim.env import HouseholdEnv
from delib_agent.sim.metrics import MetricsReport, satisfaction_vector
from delib_agent.sim.oracle import OracleWorldModel
from delib_agent.world.geometry import heading_vector
from delib_agent.world.model import WorldModel

# Which argument of a mid-level manipulation names the object clicked on.
TARGET_ARGUMENT = {
    "PickUp": 0,
    "Place": 1,
    "Slice": 0,
    "ToggleOn": 0,
    "ToggleOff": 0,
    "Open": 0,
    "Close": 0,
    "Pour": 1,
}

# Prerequisite and recovery subgoals stacked on one subgoal.
MAX_STACK = 4
# Search attempts in a row that take no step before giving up.
MAX_IDLE_SEARCHES = 5


@dataclass
class EpisodeSettings:
    """Switches and seeds of one run.

    `pruning`, `replanning` and `last_subgoal_only` are the ablations.
    `oracle` reads the belief straight from the simulator.
    """

    seed: int = 0
    noise: dict = field(default_factory=dict)
    budget: Budget = field(default_factory=Budget.from_config)
    timeout: Optional[float] = None
    pruning: bool = True
    replanning: bool = True
    last_subgoal_only: bool = False
    allow_unobserved: bool = True
    initial_scan: bool = True
    oracle: bool = False
    dump_plans: Optional[str] = None
    dump_frames: Optional[str] = None
    record_trajectory: bool = False


@dataclass
class EpisodeResult:
    metrics: dict
    trace: EpisodeTrace
    ledger: StatusLedger
    trajectory: Optional[TrajectoryRecord] = None

    @property
    def success(self):
        return self.metrics["success"]

    @property
    def failure_category(self):
        return self.metrics["failure_category"]


class _Replan(Exception):
    """Leaves plan execution to plan again without counting a failure."""


class Episode:
    """Runs the plan, act and monitor loop against one environment.

    Args:
        scene (SceneSpec): Initial scene.
        task (TaskSpec): Goal conditions, for the final metrics.
        settings (EpisodeSettings): Seeds, budget and switches.
        affordances (AffordanceTable): Category semantics.
        relevance (RelevanceTable): Scene pruning table.

    """

    def __init__(self, scene, task, settings=None, affordances=None, relevance=None):
        self.scene = scene
        self.task = task
        self.settings = settings or EpisodeSettings()
        self.affordances = affordances or AffordanceTable.from_config()
        self.relevance = relevance or RelevanceTable.from_config()
        self.env = HouseholdEnv(
            scene,
            self.affordances,
            noise=self.settings.noise,
            seed=self.settings.seed,
            frame_dir=self.settings.dump_frames,
        )
        if self.settings.oracle:
            self.world = OracleWorldModel(self.env)
        else:
            self.world = WorldModel(
                scene.dims, self.affordances, camera=self.env.camera, voxel_size=scene.voxel_size
            )
        self.tracker = BudgetTracker(self.settings.budget)
        self.trace = EpisodeTrace()
        self.rng = make_rng(self.settings.seed)
        self.exceptions = []
        self.recoveries = []
        self.failures = []
        self.claimed = defaultdict(list)
        self.active = None
        self.plan_remaining = ()
        self.plan_calls = 0
        self.searching = False
        self.trajectory = None
        self.bound_patient = None
        # Manipulations the simulator rejected, keyed by the belief they were tried from.
        self.rejected = set()

    # Stepping

    def _log(self, action=None, result=None, exception=None, recovery=None):
        self.trace.record(
            self.env.steps,
            self.env.pose,
            action=str(action) if action is not None else None,
            result=result,
            subgoal=self.active,
            plan_remaining=self.plan_remaining,
            belief_digest=self.world.snapshot().digest(),
            exception=exception,
            recovery=recovery,
        )

    def _act(self, action):
        self.tracker.check()
        before = self.env.atoms() if self.trajectory is not None else None
        result, observation = self.env.step(action)
        if self.trajectory is not None:
            self._record_step(str(action), before)
        self.tracker.record(result.success)
        return result, observation

    def _start_trajectory(self):
        conditions = [
            Subgoal(c.category, c.predicate, c.destination) for c in self.task.conditions
        ]
        initial = frozenset(self.env.atoms())
        self.trajectory = TrajectoryRecord(conditions, initial)
        self._record_step(None, initial)

    def _record_step(self, action, before):
        after = frozenset(self.env.atoms())
        satisfied = satisfaction_vector(self.task, self.env.house)
        self.trajectory.append(action, frozenset(before), after, satisfied)

    def move(self, name):
        """One navigation primitive, folded into the belief."""
        pose = self.env.pose
        result, observation = self._act(EnvAction(name))
        if not result.success and name == act.FORWARD:
            dx, dy = heading_vector(pose.heading)
            cell = pose.cell(self.scene.voxel_size)
            self.world.mark_blocked((cell[0] + int(round(dx)), cell[1] + int(round(dy))))
        self.world.update(observation)
        self._log(name, result)
        return result

    def walk(self, names, stop=None):
        """Runs primitives until one fails or `stop` says the goal is met.

        Returns:
            (ActionResult) The failed result, or None.

        """
        for name in names:
            result = self.move(name)
            if not result.success:
                return result
            if stop is not None and stop():
                return None
        return None

    def scan(self, stop=None):
        return self.walk(scan_primitives(self.env.pose.pitch), stop)

    # Navigation

    def _grid(self, targets=()):
        grid = self.world.occupancy(targets)
        start = self.env.pose.cell(self.scene.voxel_size)
        if grid.in_bounds(start):
            grid.cells[start] = FREE
        return grid

    def navigate(self, region_for, targets=(), optimistic=False, stop=None):
        """Walks into a goal region.

        Known-free cells are tried first; unknown ones only when that fails
        or when `optimistic` is set.

        Args:
            region_for (callable): Grid and optimism flag to NavGoalRegion.
            targets (iterable): Instances whose voxels never block.
            optimistic (bool): Walk through unknown cells from the start.
            stop (callable): Ends the walk early when it returns true.

        Raises:
            NoGoalRegion: No region cell at all.
            Unreachable: No path into the region.

        """
        grid = self._grid(targets)
        pose = self.env.pose
        modes = [True] if optimistic else [False, True]
        error = None
        for mode in modes:
            region = region_for(grid, mode)
            if not region:
                error = error or NoGoalRegion(tuple(targets)[0] if targets else None)
                continue
            try:
                path = plan_path(grid, pose.cell(self.scene.voxel_size), region.cells, mode)
            except NavigationError as e:
                error = e
                continue
            end = path[-1] if path else pose.cell(self.scene.voxel_size)
            heading, pitch = region.view(end)
            return self.walk(path_to_primitives(path, pose, heading, pitch), stop)
        raise error

    def goto(self, target):
        """Walks within reach of a target, one cell closer after a not-near rejection."""
        if target not in self.world:
            raise NoGoalRegion(target)
        centroid = self.world.centroid(target)
        footprint = self.world.footprint(target)
        reach = self.env.reach
        if target in self.world.far:
            reach = max(reach - self.scene.voxel_size, self.scene.voxel_size)

        def region_for(grid, optimistic):
            return goal_region(
                grid,
                centroid,
                footprint,
                self.env.camera,
                reach,
                self.scene.voxel_size,
                optimistic,
            )

        return self.navigate(region_for, targets=[target])

    # Manipulation

    def manipulate(self, name, target, args):
        if target not in self.world:
            raise NoGoalRegion(target)
        attempt = (name, tuple(args), self.world.snapshot().state_digest())
        if attempt in self.rejected:
            logger.info(f"{name}{tuple(args)} was already rejected from this belief")
            return ExceptionRecord(
                ExceptionKind.SIMULATOR_REJECTION, self.env.steps, name, target, "repeated"
            )
        category = self.world.snapshot().get(target).category
        pixel = interaction_point(self.world.pixel_mask(target), target)
        result, observation = self._act(EnvAction(name, pixel))
        if result.success and no_effect(name, category, pixel, observation):
            self.tracker.fail()
            self.world.update(observation)
            self._log(f"{name}@{pixel[0]},{pixel[1]}", result)
            return ExceptionRecord(
                ExceptionKind.NO_EFFECT_OBSERVED, self.env.steps, name, target, "frame unchanged"
            )
        if result.success:
            self.world.apply_action(name, list(args), True)
        else:
            self.rejected.add(attempt)
            if result.reason == act.RECEPTACLE_FULL:
                self.world.mark_full(target)
            elif result.reason == act.NOT_NEAR:
                self.world.mark_far(target)
        self.world.update(observation)
        self._log(result.action, result)
        if not result.success:
            return classify_exception(self.env.steps, name, target, result=result)
        return None

    def reground(self, action, exception):
        """Turns to face a target that was out of view, walking up to it if needed."""
        if exception.kind != ExceptionKind.TARGET_NOT_VISIBLE or exception.target is None:
            return
        target = exception.target
        if target not in self.world:
            return
        self.walk(face_primitives(self.env.pose, self.world.centroid(target)))
        if not self.world.pixel_mask(target).any():
            try:
                self.goto(target)
            except NavigationError as e:
                logger.debug(f"Regrounding {action} failed: {e}")

    # Search

    def _found(self, category, exclusions):
        belief = self.world.snapshot()
        return any(i.id not in exclusions for i in belief.of_category(category))

    def search(self, category, exclusions=()):
        """Explores until an instance of `category` is in the belief.

        Returns:
            (ExceptionRecord) ObjectNotFoundAfterSearch, or None once found.

        """
        previous, opened, idle = None, set(), 0
        self.searching = True

        def stop():
            return self._found(category, exclusions)

        try:
            while not stop():
                belief = self.world.snapshot()
                try:
                    target = select_search_target(
                        belief, self._grid(), self.rng, previous,
                        affordances=self.affordances, opened=opened,
                    )
                except NoFrontier:
                    break
                previous = target
                steps = self.env.steps
                logger.debug(f"Searching {category}: {target}")
                try:
                    if target.kind == OPEN:
                        opened.add(target.instance_id)
                        if self.goto(target.instance_id) is None:
                            self.manipulate(act.OPEN, target.instance_id, [target.instance_id])
                    elif target.kind == FRONTIER:
                        region = NavGoalRegion.at(target.cell)
                        self.navigate(lambda grid, mode: region, optimistic=True, stop=stop)
                    else:
                        self.goto(target.instance_id)
                except NavigationError as e:
                    logger.debug(f"Search target {target} skipped: {e}")
                if not stop():
                    self.scan(stop)
                idle = idle + 1 if self.env.steps == steps else 0
                if idle >= MAX_IDLE_SEARCHES:
                    break
        finally:
            self.searching = False
        if stop():
            return None
        return ExceptionRecord(
            ExceptionKind.OBJECT_NOT_FOUND, self.env.steps, "Search", None, category
        )

    # Plans

    def plan(self, subgoal, belief, exclusions, pruning):
        self.plan_calls += 1
        outcome = plan_subgoal(
            subgoal,
            belief,
            affordances=self.affordances,
            relevance=self.relevance,
            timeout=self.settings.timeout,
            pruning=pruning,
            allow_unobserved=self.settings.allow_unobserved,
            exclusions=exclusions,
            dump_dir=self.settings.dump_plans,
            tag=f"plan_{self.plan_calls:03d}",
        )
        self.trace.time_plan(subgoal, outcome, pruning)
        return outcome

    def execute_action(self, action, outcome, subgoal, exclusions):
        """Carries out one mid-level action.

        Returns:
            (ExceptionRecord) Or None on success.

        Raises:
            _Replan: After a successful Search.

        """
        name, args = action.name, action.args
        target = args[0] if name in ("GoTo", "Search") else args[TARGET_ARGUMENT[name]]
        try:
            if name == "GoTo":
                result = self.goto(target)
                if result is not None:
                    return classify_exception(self.env.steps, name, target, result=result)
                return None
            if name == "Search":
                category = dict(outcome.problem.objects)[target]
                skip = exclusions if category == subgoal.patient else ()
                exception = self.search(category, skip)
                if exception is None:
                    raise _Replan()
                return exception
            return self.manipulate(name, target, args)
        except NavigationError as e:
            return classify_exception(self.env.steps, name, target, error=e)

    def _handle(self, exception, context):
        decision = recover(exception, context)
        self.exceptions.append(exception)
        self.recoveries.append(decision)
        self._log(exception.action, exception=exception, recovery=decision)
        return decision

    def execute_plan(self, outcome, subgoal, exclusions, context):
        """Runs a plan to its end or to the first exception it cannot absorb.

        Returns:
            (tuple) (ExceptionRecord, RecoveryDecision), or None when the
            plan ran through.

        """
        actions = list(outcome.plan)
        index, retried, regrounded = 0, False, False
        while index < len(actions):
            action = actions[index]
            self.plan_remaining = tuple(actions[index:])
            exception = self.execute_action(action, outcome, subgoal, exclusions)
            if exception is None:
                index, retried, regrounded = index + 1, False, False
                continue
            context.retried, context.regrounded = retried, regrounded
            context.belief = self.world.snapshot()
            decision = self._handle(exception, context)
            if decision.decision == Decision.RETRY:
                retried = True
            elif decision.decision == Decision.REGROUND:
                regrounded = True
                self.reground(action, exception)
            else:
                return exception, decision
        return None

    def achieve(self, subgoal, exclusions=()):
        """Works on one subgoal until it holds in the belief or is given up.

        Recovery and prerequisite subgoals are pushed on a stack above it
        and share its step budget.

        Returns:
            (bool) Whether the subgoal was completed.

        """
        stack = [subgoal]
        replans, unpruned = 0, False
        last = None
        self.tracker.start_subgoal()
        while stack:
            current = stack[-1]
            top = len(stack) == 1
            excluded = tuple(exclusions) if top else ()
            self.active = current
            self.plan_remaining = ()
            belief = self.world.snapshot()
            if check_completed(current, belief, self.affordances, excluded):
                stack.pop()
                continue
            pruning = self.settings.pruning and not unpruned
            context = RecoveryContext(
                current,
                belief,
                self.affordances,
                replans=replans,
                max_replans=self.settings.budget.max_replans,
                pruned=pruning,
                unpruned_tried=unpruned,
                replanning=self.settings.replanning,
            )
            try:
                self.tracker.check()
                outcome = self.plan(current, belief, excluded, pruning)
                if outcome.status == PlanStatus.NEEDS_SUBGOAL:
                    prerequisite = outcome.prerequisite
                    waiting = [s.key for s in stack]
                    if (
                        len(stack) < MAX_STACK
                        and prerequisite.key not in waiting
                        and not check_completed(prerequisite, belief, self.affordances)
                    ):
                        stack.append(prerequisite)
                        continue
                    outcome.status = PlanStatus.NO_SOLUTION
                if outcome.status == PlanStatus.GOAL_ALREADY_SATISFIED:
                    stack.pop()
                    continue
                if top:
                    self.bound_patient = outcome.bindings.get("patient")
                if not outcome.solved:
                    exception = classify_exception(self.env.steps, outcome=outcome)
                    failure = (exception, self._handle(exception, context))
                else:
                    failure = self.execute_plan(outcome, current, excluded, context)
                    if failure is None:
                        replans += 1
                        if replans > self.settings.budget.max_replans:
                            failure = (last, None)
                        else:
                            continue
            except _Replan:
                continue
            except (PlanningError, PDDLError) as e:
                logger.info(f"Cannot plan {current}: {e}")
                exception = ExceptionRecord(
                    ExceptionKind.NO_PLAN_FOUND, self.env.steps, None, None, str(e)
                )
                failure = (exception, None)
            except BudgetExhausted as e:
                if e.scope == "episode":
                    raise
                kind = ExceptionKind.OBJECT_NOT_FOUND if self.searching else None
                self.searching = False
                category = failure_category(kind) if kind else self._last_category(last)
                logger.info(f"Subgoal {subgoal} out of steps ({category.value})")
                self.failures.append(category)
                return False

            exception, decision = failure
            last = exception or last
            if decision is not None and decision.decision == Decision.RETRY_UNPRUNED:
                unpruned = True
                continue
            if decision is not None and decision.decision == Decision.PUSH_SUBGOAL:
                if len(stack) < MAX_STACK:
                    stack.append(decision.subgoal)
                    continue
            if decision is not None and decision.decision in (
                Decision.REPLAN,
                Decision.REGROUND,
                Decision.RETRY,
            ):
                replans += 1
                continue
            if not top:
                # A recovery subgoal failed; the one below it carries on.
                stack.pop()
                replans += 1
                if replans <= self.settings.budget.max_replans:
                    continue
            category = self._last_category(last)
            logger.info(f"Abandoning {subgoal} ({category.value})")
            self.failures.append(category)
            return False
        return True

    def _last_category(self, exception):
        if exception is None:
            return FailureCategory.OTHER
        return failure_category(exception.kind)

    # Episode

    def _claim(self, subgoal, exclusions):
        belief = self.world.snapshot()
        ids = satisfying_instances(subgoal, belief, self.affordances, exclusions)
        if not ids:
            return
        choice = self.bound_patient if self.bound_patient in ids else ids[0]
        self.claimed[subgoal.key].append(choice)

    def resolve_subgoals(self, subgoals=None, dialog=None, lexicon=None):
        if subgoals is None:
            subgoals = parse_subgoals(dialog or [], lexicon)
        subgoals = list(subgoals)
        if not subgoals:
            raise EmptyResult(dialog or [])
        if self.settings.last_subgoal_only:
            subgoals = subgoals[-1:]
        return subgoals

    def run(self, subgoals=None, dialog=None, lexicon=None):
        """Plays the episode out.

        Args:
            subgoals (list): Subgoals to work through, in order.
            dialog (list): Turns to parse subgoals from when `subgoals` is None.
            lexicon (Lexicon): Dialog patterns.

        Returns:
            (EpisodeResult)

        """
        self.world.update(self.env.reset())
        if self.settings.record_trajectory:
            self._start_trajectory()
        ledger = StatusLedger([])
        try:
            if self.settings.initial_scan:
                self.active = "InitializeRepr"
                self.scan()
                self.active = None
            subgoals = self.resolve_subgoals(subgoals, dialog, lexicon)
            ledger = StatusLedger(subgoals)
            for index, subgoal in enumerate(subgoals):
                ledger.start(index, self.env.steps)
                exclusions = tuple(self.claimed[subgoal.key])
                belief = self.world.snapshot()
                if subgoal.completed and check_completed(
                    subgoal, belief, self.affordances, exclusions
                ):
                    self._claim(subgoal, exclusions)
                    ledger.complete(index, self.env.steps)
                    continue
                self.bound_patient = None
                if self.achieve(subgoal, exclusions):
                    self._claim(subgoal, exclusions)
                    ledger.complete(index, self.env.steps)
                else:
                    ledger.abandon(index, self.env.steps)
        except EmptyResult:
            logger.info("No subgoals to work on")
            self.failures.append(FailureCategory.SUBGOAL_PREDICTION)
        except BudgetExhausted as e:
            logger.info(f"Episode stopped: {e}")
            self.failures.append(
                FailureCategory.OBJECT_NOT_FOUND if self.searching else FailureCategory.OTHER
            )
            for index in range(len(ledger)):
                if ledger.status(index) == SubgoalStatus.PENDING:
                    ledger.start(index, self.env.steps)
                if ledger.status(index) == SubgoalStatus.IN_PROGRESS:
                    ledger.abandon(index, self.env.steps)
        self.active = None
        self.plan_remaining = ()
        self.env.step(EnvAction(act.STOP))
        metrics = self.metrics(ledger)
        self.trace.finish(metrics)
        return EpisodeResult(metrics, self.trace, ledger, self.trajectory)

    def metrics(self, ledger):
        report = MetricsReport.compute(self.task, self.env.house, self.env.steps)
        record = report.to_dict()
        category = None
        if not report.success:
            category = blame(self.failures).value
            logger.warning(f"Episode {self.task.name} failed: {category}")
        record.update(
            task=self.task.name,
            failure_category=category,
            failed_actions=self.tracker.failed,
            plan_calls=self.plan_calls,
            exceptions=dict(sorted(Counter(e.kind.value for e in self.exceptions).items())),
            recoveries=dict(
                sorted(Counter(d.decision.value for d in self.recoveries).items())
            ),
            subgoals=ledger.to_list(),
        )
        return record


def run_episode(scene, task, subgoals=None, dialog=None, lexicon=None, settings=None, **kwargs):
    """Runs one episode and returns its EpisodeResult."""
    episode = Episode(scene, task, settings, **kwargs)
    return episode.run(subgoals, dialog, lexicon)


def canonical_subgoals(task):
    return [Subgoal.from_dict(s) for s in task.subgoals]


def oracle_length(scene, task, affordances=None):
    """Steps the agent needs with ground-truth belief, no noise and no scan.

    Returns:
        (int) Or None when the oracle run does not succeed.

    """
    settings = EpisodeSettings(oracle=True, initial_scan=False)
    result = run_episode(
        scene, task, canonical_subgoals(task), settings=settings, affordances=affordances
    )
    if not result.success:
        return None
    return result.metrics["length"]
