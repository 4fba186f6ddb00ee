"""Plans one subgoal against the current belief."""
import json
import time
from functools import lru_cache
from pathlib import Path

from delib_agent import config, logger
from delib_agent.pddl import ground, parse_domain, serialize_problem
from delib_agent.planner.errors import InvalidRequest
from delib_agent.planner.plans import PlanOutcome, PlanStatus
from delib_agent.planner.problem import (
    bind_subgoal,
    build_problem,
    inject_unobserved,
    prune_scene,
)
from delib_agent.planner.relevance import RelevanceTable
from delib_agent.planner.search import search_plan
from delib_agent.sim.affordances import AffordanceTable

DOMAIN_FILE = Path(__file__).resolve().parent / "household_domain.pddl"


@lru_cache(maxsize=None)
def load_household_domain(search_cost=None):
    """Parses the packaged household domain, Search costing `search_cost`."""
    search_cost = config["planner"]["search_cost"] if search_cost is None else search_cost
    return parse_domain(DOMAIN_FILE.read_text(), costs={"Search": search_cost})


def check_config(domain=None, affordances=None, relevance=None):
    """Raises when configured categories are not domain types."""
    domain = domain or load_household_domain()
    affordances = affordances or AffordanceTable.from_config()
    relevance = relevance or RelevanceTable.from_config()
    relevance.check(domain.hierarchy)
    for category in sorted(affordances.categories):
        domain.hierarchy.check(category)


def _dump(dump_dir, problem, outcome, tag):
    directory = Path(dump_dir)
    directory.mkdir(parents=True, exist_ok=True)
    stem = tag or problem.name
    (directory / f"{stem}.pddl").write_text(serialize_problem(problem))
    (directory / f"{stem}.plan").write_text("\n".join(outcome.plan.to_lines()) + "\n")
    (directory / f"{stem}.json").write_text(json.dumps(outcome.to_dict(), indent=1))


def plan_subgoal(
    subgoal,
    belief,
    domain=None,
    affordances=None,
    relevance=None,
    timeout=None,
    pruning=True,
    allow_unobserved=True,
    exclusions=(),
    uniform_cost=None,
    dump_dir=None,
    tag=None,
):
    """Prune, build, inject placeholders, ground and search.

    Args:
        subgoal (Subgoal): What to achieve.
        belief (BeliefSnapshot): What the agent believes.
        domain (DomainModel): Defaults to the household domain.
        affordances (AffordanceTable): Category semantics.
        relevance (RelevanceTable): Predicate to relevant categories.
        timeout (float): Seconds for grounding and search together.
        pruning (bool): Keep only the relevant part of the scene.
        allow_unobserved (bool): Add placeholders for unseen categories.
        exclusions (iterable): Instances the patient may not bind to.
        uniform_cost (bool): Use uniform-cost search.
        dump_dir (str): Write the problem, plan and outcome here.
        tag (str): File stem for the dumped artifacts.

    Returns:
        (PlanOutcome) With NEEDS_SUBGOAL and a prerequisite subgoal when
        the patient only comes into being by slicing something.

    Raises:
        InvalidRequest: Non-positive timeout or a category outside the domain.

    """
    start = time.monotonic()
    domain = domain or load_household_domain()
    affordances = affordances or AffordanceTable.from_config()
    relevance = relevance or RelevanceTable.from_config()
    timeout = config["planner"]["timeout"] if timeout is None else timeout
    if timeout <= 0:
        raise InvalidRequest(f"Timeout must be positive, got {timeout}")
    for category in (subgoal.patient, subgoal.destination):
        if category is not None and category not in domain.hierarchy.categories:
            raise InvalidRequest(f"{category} is not a category of {domain.name}")

    binding = bind_subgoal(subgoal, belief, affordances, exclusions)
    if binding.prerequisite is not None:
        logger.info(f"{subgoal} needs {binding.prerequisite} first")
        return PlanOutcome(
            PlanStatus.NEEDS_SUBGOAL,
            elapsed=time.monotonic() - start,
            prerequisite=binding.prerequisite,
        )

    if pruning:
        kept = prune_scene(belief, subgoal, relevance)
    else:
        kept = [i.id for i in belief.instances]
    problem = build_problem(belief, subgoal, kept, binding, affordances, domain.hierarchy)
    if allow_unobserved:
        problem = inject_unobserved(problem, subgoal, relevance, affordances, binding)

    task = ground(domain, problem, simplify_static=True)
    remaining = max(timeout - (time.monotonic() - start), 1e-3)
    outcome = search_plan(task, remaining, uniform_cost)
    outcome.elapsed = time.monotonic() - start
    outcome.bindings = binding.to_dict()
    outcome.problem = problem
    logger.info(
        f"Planned {subgoal}: {outcome.status.value}, {len(outcome.plan)} actions, "
        f"{len(problem.objects)} objects, {outcome.elapsed:.3f}s"
    )
    if dump_dir is not None:
        _dump(dump_dir, problem, outcome, tag)
    return outcome
