"""Forward state-space search over a grounded task."""
import heapq
import itertools
import math
import time
from collections import defaultdict

from delib_agent import config, logger
from delib_agent.pddl.semantics import is_applicable, successor_atoms
from delib_agent.planner.plans import MidLevelAction, MidLevelPlan, PlanOutcome, PlanStatus


class AdditiveHeuristic:
    """Additive cost of the goal under the delete relaxation.

    Each conditional effect becomes its own relaxed operator whose
    precondition is the action's plus the effect's positive condition.
    Negative conditions are ignored. Goal literals asking for an atom to be
    false cost one each while the atom holds.

    Args:
        task (GroundedTask): The task to estimate for.

    """

    def __init__(self, task):
        self.goal_pos = task.goal_pos
        self.goal_neg = task.goal_neg
        self.operators = []
        for action in task.actions:
            if action.add:
                self.operators.append((action.pre_pos, action.add, action.cost))
            for effect in action.conditional:
                if effect.add:
                    self.operators.append(
                        (action.pre_pos | effect.cond_pos, effect.add, action.cost)
                    )
        self.waiting = defaultdict(list)
        self.free = []
        for index, (pre, _, _) in enumerate(self.operators):
            if not pre:
                self.free.append(index)
            for atom in pre:
                self.waiting[atom].append(index)

    def __call__(self, atoms):
        negative = sum(1 for atom in self.goal_neg if atom in atoms)
        if not self.goal_pos:
            return negative
        cost = dict.fromkeys(atoms, 0)
        heap = [(0, atom) for atom in sorted(atoms)]
        heapq.heapify(heap)
        missing = [len(pre) for pre, _, _ in self.operators]
        reached = [0] * len(self.operators)

        def fire(index):
            _, add, action_cost = self.operators[index]
            value = reached[index] + action_cost
            for atom in add:
                if value < cost.get(atom, math.inf):
                    cost[atom] = value
                    heapq.heappush(heap, (value, atom))

        for index in self.free:
            fire(index)
        pending = set(self.goal_pos)
        done = set()
        while heap and pending:
            value, atom = heapq.heappop(heap)
            if atom in done or value > cost[atom]:
                continue
            done.add(atom)
            pending.discard(atom)
            for index in self.waiting.get(atom, ()):
                missing[index] -= 1
                reached[index] += value
                if missing[index] == 0:
                    fire(index)
        if pending:
            return math.inf
        return sum(cost[atom] for atom in self.goal_pos) + negative


def _extract(node, parents):
    actions = []
    while parents[node] is not None:
        node, action = parents[node]
        actions.append(action)
    return list(reversed(actions))


def search_plan(task, timeout=None, uniform_cost=None):
    """Finds a plan for a grounded task.

    Greedy best-first on the additive heuristic, ordering the open list by
    (h, g, action index, insertion order). With `uniform_cost` the order is
    (g, action index, insertion order) and the heuristic only prunes dead
    ends.

    Args:
        task (GroundedTask): The task to solve.
        timeout (float): Wall-clock seconds before giving up.
        uniform_cost (bool): Search by accumulated cost alone.

    Returns:
        (PlanOutcome)

    """
    timeout = config["planner"]["timeout"] if timeout is None else timeout
    if uniform_cost is None:
        uniform_cost = config["planner"]["uniform_cost"]
    start = time.monotonic()

    def outcome(status, actions=(), expanded=0):
        plan = MidLevelPlan(
            tuple(MidLevelAction.from_grounded(a) for a in actions),
            sum(a.cost for a in actions),
        )
        return PlanOutcome(status, plan, time.monotonic() - start, expanded)

    init = task.init.atoms
    if not task.goal_possible:
        return outcome(PlanStatus.NO_SOLUTION)
    if task.goal_reached(init):
        return outcome(PlanStatus.GOAL_ALREADY_SATISFIED)

    heuristic = AdditiveHeuristic(task)
    h0 = heuristic(init)
    if h0 == math.inf:
        return outcome(PlanStatus.NO_SOLUTION)

    counter = itertools.count()
    parents = {init: None}
    best_g = {init: 0}
    if uniform_cost:
        open_list = [(0, -1, next(counter), init)]
    else:
        open_list = [(h0, 0, -1, next(counter), init)]
    closed = set()
    expanded = 0

    while open_list:
        if time.monotonic() - start > timeout:
            logger.info(f"Search timed out after {expanded} expansions")
            return outcome(PlanStatus.TIMEOUT, expanded=expanded)
        entry = heapq.heappop(open_list)
        atoms = entry[-1]
        g = entry[0] if uniform_cost else entry[1]
        if atoms in closed:
            continue
        closed.add(atoms)
        if task.goal_reached(atoms):
            return outcome(PlanStatus.SOLVED, _extract(atoms, parents), expanded)
        expanded += 1
        for action in task.actions:
            if not is_applicable(action, atoms):
                continue
            successor = frozenset(successor_atoms(action, atoms))
            if successor in closed:
                continue
            cost = g + action.cost
            if uniform_cost:
                if cost >= best_g.get(successor, math.inf):
                    continue
                best_g[successor] = cost
                parents[successor] = (atoms, action)
                heapq.heappush(open_list, (cost, action.index, next(counter), successor))
                continue
            if successor in parents:
                continue
            h = heuristic(successor)
            if h == math.inf:
                continue
            parents[successor] = (atoms, action)
            heapq.heappush(open_list, (h, cost, action.index, next(counter), successor))
    return outcome(PlanStatus.NO_SOLUTION, expanded=expanded)
