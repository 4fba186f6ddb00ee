"""Truth of formulas and successor states under closed-world semantics."""
from delib_agent.pddl.errors import PDDLError, PreconditionViolated, UnboundVariable
from delib_agent.pddl.model import And, Atom, Equal, Forall, Not, SymState, is_variable


def _resolve(term, binding):
    if is_variable(term):
        if term not in binding:
            raise UnboundVariable(term)
        return binding[term]
    return term


def holds(formula, state, binding=None, objects=None):
    """Evaluates a formula in a state.

    Args:
        formula: A condition built from Atom, Not, And, Equal and Forall.
        state (SymState): Atoms not listed are false.
        binding (dict): Values of free variables.
        objects (TypedObjects): Needed only to expand Forall.

    Returns:
        (bool)

    Raises:
        UnboundVariable: A variable with no value in the binding.

    """
    binding = binding or {}
    if isinstance(formula, Atom):
        atom = (formula.predicate,) + tuple(_resolve(t, binding) for t in formula.terms)
        return atom in state.atoms
    if isinstance(formula, Not):
        return not holds(formula.arg, state, binding, objects)
    if isinstance(formula, And):
        return all(holds(arg, state, binding, objects) for arg in formula.args)
    if isinstance(formula, Equal):
        return _resolve(formula.left, binding) == _resolve(formula.right, binding)
    if isinstance(formula, Forall):
        if objects is None:
            raise PDDLError("Evaluating forall needs the task objects")
        for obj in objects.of_category(formula.category):
            inner = dict(binding)
            inner[formula.variable] = obj
            if not holds(formula.body, state, inner, objects):
                return False
        return True
    raise PDDLError(f"Not a condition: {formula!r}")


def is_applicable(action, atoms):
    return action.pre_pos <= atoms and atoms.isdisjoint(action.pre_neg)


def successor_atoms(action, atoms):
    """Successor atom set; conditions are read on the pre-state and all
    deletes happen before all adds."""
    deletes, adds = set(action.delete), set(action.add)
    for effect in action.conditional:
        if effect.cond_pos <= atoms and atoms.isdisjoint(effect.cond_neg):
            deletes |= effect.delete
            adds |= effect.add
    return (atoms - deletes) | adds


def apply(action, state):
    """Applies a grounded action.

    Args:
        action (GroundedAction)
        state (SymState)

    Returns:
        (SymState)

    Raises:
        PreconditionViolated: With the literals that do not hold.

    """
    atoms = state.atoms
    if not is_applicable(action, atoms):
        failed = [(a, True) for a in sorted(action.pre_pos - atoms)]
        failed += [(a, False) for a in sorted(action.pre_neg & atoms)]
        raise PreconditionViolated(str(action), failed)
    return SymState(frozenset(successor_atoms(action, atoms)))
