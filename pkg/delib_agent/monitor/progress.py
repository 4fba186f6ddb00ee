"""Belief-relative completion checks for subgoals."""
from delib_agent.sim.affordances import AffordanceTable


def instance_satisfies(instance, subgoal, belief, affordances):
    """Whether one believed instance meets the subgoal's literal."""
    predicate = subgoal.predicate
    if predicate == "isPlacedTo":
        if instance.parent is None or instance.parent not in belief:
            return False
        if subgoal.destination_id is not None:
            return instance.parent == subgoal.destination_id
        return belief.get(instance.parent).category == subgoal.destination
    if predicate == "isPickedUp":
        return instance.held
    if predicate == "isEmptied":
        return not belief.children(instance.id)
    if predicate == "isSliced":
        return affordances[instance.category].sliced or instance.state("isSliced")
    return instance.state(predicate)


def satisfying_instances(subgoal, belief, affordances=None, exclusions=()):
    """Ids of the believed instances that satisfy a subgoal, sorted.

    A sliceable patient counts as sliced once pieces of its slice category
    exist.
    """
    affordances = affordances or AffordanceTable.from_config()
    exclusions = set(exclusions)
    if subgoal.patient_id is not None:
        candidates = [i for i in belief.instances if i.id == subgoal.patient_id]
    else:
        candidates = [i for i in belief.of_category(subgoal.patient) if i.id not in exclusions]
    found = [i.id for i in candidates if instance_satisfies(i, subgoal, belief, affordances)]
    pieces = affordances[subgoal.patient].slice_into
    if subgoal.predicate == "isSliced" and pieces and subgoal.patient_id is None:
        found += [i.id for i in belief.of_category(pieces) if i.id not in exclusions]
    return sorted(found)


def check_completed(subgoal, belief, affordances=None, exclusions=()):
    """True iff some instance binding satisfies the subgoal in the belief.

    Args:
        subgoal (Subgoal): The subgoal to check.
        belief (BeliefSnapshot): The agent's belief (or ground truth).
        affordances (AffordanceTable): Category semantics.
        exclusions (iterable): Instances claimed by earlier identical
            subgoals; they do not count.

    Returns:
        (bool)

    """
    return bool(satisfying_instances(subgoal, belief, affordances, exclusions))
