"""Belief + subgoal -> PDDL problem.

The problem covers the pruned scene only. Categories a subgoal needs but
the agent has not seen yet get a placeholder object, ``<Category>_u0``,
flagged ``unobserved`` so the plan starts with a Search for it.
"""
import math
from dataclasses import dataclass
from typing import Optional

import networkx as nx

from delib_agent import config, logger
from delib_agent.monitor.progress import instance_satisfies
from delib_agent.monitor.subgoals import Subgoal
from delib_agent.pddl.model import And, Atom, Not, ProblemModel
from delib_agent.world.effects import water_sink

DYNAMIC_STATES = (
    "isToggled",
    "isClosed",
    "isCooked",
    "isClean",
    "isFilledWithLiquid",
    "simbotIsFilledWithCoffee",
    "isSliced",
)

# States that count as progress towards most subgoals when ranking candidates.
PROGRESS_STATES = ("isCooked", "isClean", "isFilledWithLiquid", "isSliced")


def dummy_id(category, suffix=None):
    suffix = suffix or config["planner"]["dummy_suffix"]
    return f"{category}_{suffix}"


@dataclass(frozen=True)
class Binding:
    """Instances a subgoal's patient and destination stand for.

    Either id may be a placeholder. `prerequisite` is set instead when the
    patient cannot exist yet.
    """

    patient: Optional[str] = None
    destination: Optional[str] = None
    prerequisite: Optional[Subgoal] = None

    def to_dict(self):
        record = {"patient": self.patient}
        if self.destination is not None:
            record["destination"] = self.destination
        return record


def _xy_distance(instance, pose):
    if pose is None:
        return 0.0
    return math.hypot(instance.centroid[0] - pose.x, instance.centroid[1] - pose.y)


def _pinned(belief, instance_id, category):
    if instance_id is None:
        return None
    if instance_id in belief and belief.get(instance_id).category == category:
        return instance_id
    logger.info(f"Pinned instance {instance_id} is not in the belief, binding by category")
    return None


def prune_scene(belief, subgoal, relevance):
    """The ids a problem for this subgoal keeps.

    Instances of the patient, destination and relevant categories are kept,
    then every container or support above them, their direct contents and
    whatever the agent holds.

    Args:
        belief (BeliefSnapshot): The agent's belief.
        subgoal (Subgoal): The subgoal to plan for.
        relevance (RelevanceTable): Predicate to relevant categories.

    Returns:
        (list) Sorted instance ids.

    Raises:
        UnknownPredicate: The predicate has no relevance entry.

    """
    categories = set(relevance.categories(subgoal.predicate)) | {subgoal.patient}
    if subgoal.destination is not None:
        categories.add(subgoal.destination)
    seed = {i.id for i in belief.instances if i.category in categories}
    seed |= {p for p in (subgoal.patient_id, subgoal.destination_id) if p and p in belief}

    # Edges run from an instance to its support, so descendants are ancestors.
    supports = nx.DiGraph()
    supports.add_edges_from(
        (i.id, i.parent) for i in belief.instances if i.parent is not None and i.parent in belief
    )
    kept = set(seed)
    for instance_id in seed:
        if instance_id in supports:
            kept |= nx.descendants(supports, instance_id)
    kept |= {i.id for i in belief.instances if i.parent in seed}
    kept |= {i.id for i in belief.instances if i.held}
    return sorted(kept)


def _rank_patients(candidates, subgoal, belief, affordances):
    def key(instance):
        satisfied = instance_satisfies(instance, subgoal, belief, affordances)
        progress = sum(instance.state(p) for p in PROGRESS_STATES)
        return (
            not satisfied,
            -progress,
            _xy_distance(instance, belief.pose),
            instance.ordinal,
        )

    return sorted(candidates, key=key)


def _rank_destinations(candidates, patient_category, belief, affordances):
    def key(instance):
        children = belief.children(instance.id)
        full = instance.reported_full or len(children) >= affordances[instance.category].capacity
        same = sum(1 for c in children if c.category == patient_category)
        return (full, -same, _xy_distance(instance, belief.pose), instance.ordinal)

    return sorted(candidates, key=key)


def bind_subgoal(subgoal, belief, affordances, exclusions=()):
    """Picks the instances a subgoal is about.

    Patients already satisfying the subgoal come first, then the ones with
    the most progress states, then the nearest, then the lowest ordinal.
    Destinations prefer room, then the most objects of the patient's
    category, then nearness and ordinal. Pins on the subgoal win over
    ranking; excluded instances are never bound.

    Returns:
        (Binding)

    """
    exclusions = set(exclusions)
    patient = _pinned(belief, subgoal.patient_id, subgoal.patient)
    if patient is None:
        candidates = [i for i in belief.of_category(subgoal.patient) if i.id not in exclusions]
        if candidates:
            patient = _rank_patients(candidates, subgoal, belief, affordances)[0].id
        else:
            source = affordances.slice_source(subgoal.patient)
            if affordances[subgoal.patient].sliced and source is not None:
                return Binding(prerequisite=Subgoal(source, "isSliced"))
            patient = dummy_id(subgoal.patient)

    destination = None
    if subgoal.destination is not None:
        destination = _pinned(belief, subgoal.destination_id, subgoal.destination)
        if destination is None and patient in belief:
            parent = belief.get(patient).parent
            if parent is not None and belief.get(parent).category == subgoal.destination:
                destination = parent
        if destination is None:
            candidates = [i for i in belief.of_category(subgoal.destination) if i.id != patient]
            if candidates:
                destination = _rank_destinations(
                    candidates, subgoal.patient, belief, affordances
                )[0].id
            else:
                destination = dummy_id(subgoal.destination)
    return Binding(patient, destination)


def translate_goal(subgoal, binding, objects, affordances):
    """The subgoal as a conjunction of literals over bound objects."""
    p = binding.patient
    if subgoal.predicate == "isPlacedTo":
        return And((Atom("isPlacedTo", (p, binding.destination)),))
    if subgoal.predicate == "isEmptied":
        contents = [
            Not(Atom("parentReceptacles", (z, p)))
            for z, category in objects
            if z != p and affordances[category].pickupable
        ]
        return And(tuple(contents))
    return And((Atom(subgoal.predicate, (p,)),))


def _is_full(instance, belief, affordances):
    capacity = affordances[instance.category].capacity
    if not affordances[instance.category].receptacle:
        return False
    return instance.reported_full or len(belief.children(instance.id)) >= capacity


def _containment_atoms(objects, affordances):
    receptacles = [o for o, c in objects if affordances[c].receptacle]
    atoms = set()
    categories = dict(objects)
    for r in receptacles:
        for x, category in objects:
            if affordances.can_hold(categories[r], category):
                atoms.add(("canContain", r, x))
    return atoms


def build_problem(belief, subgoal, kept, binding, affordances, hierarchy=None):
    """Writes the known-true atoms of the kept instances into a problem.

    Physical states the belief does not assert are false. Relations only
    appear when both ends are kept. Placeholders named by the binding are
    added later by `inject_unobserved`.

    Args:
        belief (BeliefSnapshot): The agent's belief.
        subgoal (Subgoal): The subgoal to plan for.
        kept (iterable): Instance ids from `prune_scene`.
        binding (Binding): Output of `bind_subgoal`.
        affordances (AffordanceTable): Category semantics.
        hierarchy (CategoryHierarchy): Domain categories; instances of other
            categories are left out.

    Returns:
        (ProblemModel)

    """
    instances = [belief.get(i) for i in sorted(set(kept)) if i in belief]
    if hierarchy is not None:
        dropped = [i.id for i in instances if i.category not in hierarchy.categories]
        if dropped:
            logger.debug(f"Left out of the problem, no domain type: {dropped}")
        instances = [i for i in instances if i.category in hierarchy.categories]
    ids = {i.id for i in instances}
    objects = tuple((i.id, i.category) for i in instances)

    init = set(_containment_atoms(objects, affordances))
    for instance in instances:
        init.update(affordances.static_atoms(instance.id, instance.category))
        if _is_full(instance, belief, affordances):
            init.add(("isFull", instance.id))
        if instance.category == "Faucet":
            sink = water_sink(belief, instance)
            if sink is not None and sink.id in ids:
                init.add(("waterSource", instance.id, sink.id))
        for predicate in DYNAMIC_STATES:
            if instance.state(predicate):
                init.add((predicate, instance.id))
        if instance.inside_closed:
            init.add(("isInsideClosed", instance.id))
        if instance.parent in ids:
            init.add(("parentReceptacles", instance.id, instance.parent))
            init.add(("isPlacedTo", instance.id, instance.parent))
        if instance.held:
            init.add(("isPickedUp", instance.id))
        if instance.visible:
            init.add(("isVisible", instance.id))
        if instance.near:
            init.add(("isNear", instance.id))

    goal = translate_goal(subgoal, binding, objects, affordances)
    name = f"{subgoal.patient}-{subgoal.predicate}".lower()
    return ProblemModel(
        name=name,
        domain_name="household",
        objects=objects,
        init=frozenset(init),
        goal=goal,
        metric=True,
    )


def inject_unobserved(problem, subgoal, relevance, affordances, binding=None):
    """Adds one unobserved placeholder per required category with no object.

    Required are the patient, the destination and the categories of the
    tool route with the fewest missing categories. A placeholder faucet or
    sink is wired to every sink or faucet of the problem.

    Returns:
        (ProblemModel) `problem` itself when nothing is missing.

    """
    present = {c for _, c in problem.objects}
    route = relevance.choose_route(subgoal.predicate, subgoal.patient, present)
    required = [subgoal.patient] + list(route)
    if subgoal.destination is not None:
        required.append(subgoal.destination)
    names = {o for o, _ in problem.objects}
    if binding is not None:
        wanted = [(binding.patient, subgoal.patient)]
        if binding.destination is not None:
            wanted.append((binding.destination, subgoal.destination))
    else:
        wanted = []
    for category in required:
        if category not in present:
            wanted.append((dummy_id(category), category))
    added = []
    for name, category in wanted:
        if name not in names and name not in [a for a, _ in added]:
            added.append((name, category))
    if not added:
        return problem

    objects = problem.objects + tuple(added)
    init = set(problem.init)
    for name, category in added:
        init.add(("unobserved", name))
        init.update(affordances.static_atoms(name, category))
        if category == "Faucet":
            init.update(("waterSource", name, s) for s, c in objects if c == "Sink")
        if category == "Sink":
            init.update(("waterSource", f, name) for f, c in objects if c == "Faucet")
    init |= _containment_atoms(objects, affordances)
    logger.debug(f"Unobserved placeholders: {[n for n, _ in added]}")
    return ProblemModel(
        name=problem.name,
        domain_name=problem.domain_name,
        objects=objects,
        init=frozenset(init),
        goal=problem.goal,
        metric=problem.metric,
    )
