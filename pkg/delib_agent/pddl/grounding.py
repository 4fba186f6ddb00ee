"""Instantiates action schemas over the objects of a problem."""
from dataclasses import dataclass
from typing import FrozenSet, Tuple

from delib_agent import config, logger
from delib_agent.pddl.errors import GroundingExplosion, PDDLError, UnboundVariable
from delib_agent.pddl.model import (
    And,
    Atom,
    Equal,
    Forall,
    Not,
    SymState,
    TypedObjects,
    When,
    conjuncts,
    effect_predicates,
    is_variable,
)

EMPTY = frozenset()


@dataclass(frozen=True)
class ConditionalEffect:
    cond_pos: FrozenSet[tuple]
    cond_neg: FrozenSet[tuple]
    add: FrozenSet[tuple]
    delete: FrozenSet[tuple]


@dataclass(frozen=True)
class GroundedAction:
    index: int
    name: str
    args: Tuple[str, ...]
    pre_pos: FrozenSet[tuple]
    pre_neg: FrozenSet[tuple]
    add: FrozenSet[tuple]
    delete: FrozenSet[tuple]
    conditional: Tuple[ConditionalEffect, ...] = ()
    cost: int = 1

    def __str__(self):
        return "(" + " ".join((self.name,) + self.args) + ")"


@dataclass(frozen=True)
class GroundedTask:
    domain_name: str
    problem_name: str
    objects: TypedObjects
    init: SymState
    goal_pos: FrozenSet[tuple]
    goal_neg: FrozenSet[tuple]
    actions: Tuple[GroundedAction, ...]
    static_predicates: FrozenSet[str] = EMPTY
    goal_possible: bool = True

    def goal_reached(self, atoms):
        return self.goal_pos <= atoms and atoms.isdisjoint(self.goal_neg)


class _Unsatisfiable(Exception):
    """A condition is false whatever the state."""


def _term(term, binding):
    if is_variable(term):
        if term not in binding:
            raise UnboundVariable(term)
        return binding[term]
    return term


def _ground_atom(atom, binding):
    return (atom.predicate,) + tuple(_term(t, binding) for t in atom.terms)


class _Instantiator:
    def __init__(self, objects, init, static, simplify):
        self.objects = objects
        self.init = init
        self.static = static
        self.simplify = simplify

    def condition(self, formula, binding, pos, neg):
        """Adds the literals of a condition to pos/neg.

        Raises:
            _Unsatisfiable: When an equality or a static literal is false.

        """
        if isinstance(formula, And):
            for arg in formula.args:
                self.condition(arg, binding, pos, neg)
        elif isinstance(formula, Atom):
            atom = _ground_atom(formula, binding)
            if self.simplify and atom[0] in self.static:
                if atom not in self.init:
                    raise _Unsatisfiable()
            else:
                pos.add(atom)
        elif isinstance(formula, Equal):
            if _term(formula.left, binding) != _term(formula.right, binding):
                raise _Unsatisfiable()
        elif isinstance(formula, Not):
            inner = formula.arg
            if isinstance(inner, Equal):
                if _term(inner.left, binding) == _term(inner.right, binding):
                    raise _Unsatisfiable()
            elif isinstance(inner, Atom):
                atom = _ground_atom(inner, binding)
                if self.simplify and atom[0] in self.static:
                    if atom in self.init:
                        raise _Unsatisfiable()
                else:
                    neg.add(atom)
            else:
                raise PDDLError("Only atoms and equalities can be negated")
        elif isinstance(formula, Forall):
            for obj in self.objects.of_category(formula.category):
                inner = dict(binding)
                inner[formula.variable] = obj
                self.condition(formula.body, inner, pos, neg)
        else:
            raise PDDLError(f"Unsupported condition {formula!r}")

    def effect(self, formula, binding, cond_pos, cond_neg, out):
        """Collects (cond_pos, cond_neg, add, delete) entries into out."""
        if isinstance(formula, And):
            for arg in formula.args:
                self.effect(arg, binding, cond_pos, cond_neg, out)
        elif isinstance(formula, Atom):
            out.append((cond_pos, cond_neg, _ground_atom(formula, binding), True))
        elif isinstance(formula, Not):
            out.append((cond_pos, cond_neg, _ground_atom(formula.arg, binding), False))
        elif isinstance(formula, Forall):
            for obj in self.objects.of_category(formula.category):
                inner = dict(binding)
                inner[formula.variable] = obj
                self.effect(formula.body, inner, cond_pos, cond_neg, out)
        elif isinstance(formula, When):
            pos, neg = set(cond_pos), set(cond_neg)
            try:
                self.condition(formula.condition, binding, pos, neg)
            except _Unsatisfiable:
                return
            if not pos.isdisjoint(neg):
                return
            self.effect(formula.effect, binding, frozenset(pos), frozenset(neg), out)
        else:
            raise PDDLError(f"Unsupported effect {formula!r}")


def _merge_effects(entries):
    """Groups effect literals by condition; deletes lose to adds."""
    groups = {}
    for cond_pos, cond_neg, atom, is_add in entries:
        adds, deletes = groups.setdefault((cond_pos, cond_neg), (set(), set()))
        (adds if is_add else deletes).add(atom)
    add, delete = EMPTY, EMPTY
    conditional = []
    for (cond_pos, cond_neg), (adds, deletes) in groups.items():
        deletes = frozenset(deletes - adds)
        if not cond_pos and not cond_neg:
            add, delete = frozenset(adds), deletes
        else:
            conditional.append(
                ConditionalEffect(cond_pos, cond_neg, frozenset(adds), deletes)
            )
    return add, delete, tuple(conditional)


def _binding_checks(schema, static, simplify):
    """Literals of a precondition checkable as soon as their variables are bound.

    Returns:
        (list): For each parameter depth, the literals whose last variable
            is the parameter at that depth.

    """
    position = {var: i for i, (var, _) in enumerate(schema.parameters)}
    checks = [[] for _ in schema.parameters]
    for literal in conjuncts(schema.precondition):
        inner = literal.arg if isinstance(literal, Not) else literal
        if isinstance(inner, Equal):
            terms = (inner.left, inner.right)
        elif isinstance(inner, Atom) and simplify and inner.predicate in static:
            terms = inner.terms
        else:
            continue
        variables = [t for t in terms if is_variable(t)]
        if not variables or any(v not in position for v in variables):
            continue
        checks[max(position[v] for v in variables)].append(literal)
    return checks


def _passes(literal, binding, init):
    negated = isinstance(literal, Not)
    inner = literal.arg if negated else literal
    if isinstance(inner, Equal):
        value = _term(inner.left, binding) == _term(inner.right, binding)
    else:
        value = _ground_atom(inner, binding) in init
    return value != negated


def ground(domain, problem, cap=None, simplify_static=False):
    """Instantiates every action schema with every type-compatible binding.

    Args:
        domain (DomainModel): Parsed domain.
        problem (ProblemModel): Parsed problem.
        cap (int): Maximum number of grounded actions.
        simplify_static (bool): Evaluate predicates that no action changes
            against the initial state and drop them from the task.

    Returns:
        (GroundedTask)

    Raises:
        GroundingExplosion: More grounded actions than the cap.

    """
    cap = config["pddl"]["max_grounded_actions"] if cap is None else cap
    objects = TypedObjects(problem.objects, domain.hierarchy)
    fluent = set()
    for schema in domain.actions:
        fluent |= effect_predicates(schema.effect)
    static = frozenset(d.name for d in domain.predicates) - fluent
    init = problem.init
    inst = _Instantiator(objects, init, static, simplify_static)

    actions = []
    for schema in domain.actions:
        domains = [objects.of_category(c) for _, c in schema.parameters]
        checks = _binding_checks(schema, static, simplify_static)
        names = [v for v, _ in schema.parameters]

        def bindings(depth, binding):
            if depth == len(names):
                yield dict(binding)
                return
            for obj in domains[depth]:
                binding[names[depth]] = obj
                if all(_passes(lit, binding, init) for lit in checks[depth]):
                    yield from bindings(depth + 1, binding)
                del binding[names[depth]]

        for binding in bindings(0, {}):
            pos, neg = set(), set()
            try:
                inst.condition(schema.precondition, binding, pos, neg)
            except _Unsatisfiable:
                continue
            if not pos.isdisjoint(neg):
                continue
            entries = []
            inst.effect(schema.effect, binding, EMPTY, EMPTY, entries)
            add, delete, conditional = _merge_effects(entries)
            actions.append(
                GroundedAction(
                    index=len(actions),
                    name=schema.name,
                    args=tuple(binding[v] for v in names),
                    pre_pos=frozenset(pos),
                    pre_neg=frozenset(neg),
                    add=add,
                    delete=delete,
                    conditional=conditional,
                    cost=schema.cost,
                )
            )
            if len(actions) > cap:
                raise GroundingExplosion(len(actions), cap)

    goal_pos, goal_neg, goal_possible = set(), set(), True
    try:
        inst.condition(problem.goal, {}, goal_pos, goal_neg)
    except _Unsatisfiable:
        goal_possible = False
    if not goal_pos.isdisjoint(goal_neg):
        goal_possible = False

    if simplify_static:
        init = frozenset(a for a in init if a[0] not in static)
    logger.debug(
        f"Grounded {problem.name}: {len(actions)} actions over "
        f"{len(problem.objects)} objects"
    )
    return GroundedTask(
        domain_name=domain.name,
        problem_name=problem.name,
        objects=objects,
        init=SymState(frozenset(init)),
        goal_pos=frozenset(goal_pos),
        goal_neg=frozenset(goal_neg),
        actions=tuple(actions),
        static_predicates=static,
        goal_possible=goal_possible,
    )
