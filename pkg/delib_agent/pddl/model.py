"""Typed first-order model of a planning domain and problem.

Formulas are immutable trees. Ground atoms are plain tuples of the form
``(predicate, arg1, arg2, ...)`` so that states can be hashed and compared
cheaply during search.
"""
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Tuple

import networkx as nx

from delib_agent.pddl.errors import CyclicHierarchy, UnknownCategory

ROOT = "Object"


def canonical_category(name):
    """Maps both spellings of the root category to a single name."""
    return ROOT if name.lower() == "object" else name


def is_variable(term):
    return term.startswith("?")


@dataclass(frozen=True)
class Atom:
    predicate: str
    terms: Tuple[str, ...] = ()

    def ground(self, binding):
        return (self.predicate,) + tuple(binding.get(t, t) for t in self.terms)


@dataclass(frozen=True)
class Not:
    arg: object


@dataclass(frozen=True)
class And:
    args: Tuple[object, ...] = ()


@dataclass(frozen=True)
class Forall:
    variable: str
    category: str
    body: object


@dataclass(frozen=True)
class When:
    condition: object
    effect: object


@dataclass(frozen=True)
class Equal:
    left: str
    right: str


def conjuncts(formula):
    """Flattens nested conjunctions into a tuple of their members."""
    if isinstance(formula, And):
        out = []
        for arg in formula.args:
            out.extend(conjuncts(arg))
        return tuple(out)
    return (formula,)


def formula_predicates(formula):
    """Names of every predicate mentioned in a formula."""
    if isinstance(formula, Atom):
        return {formula.predicate}
    if isinstance(formula, Not):
        return formula_predicates(formula.arg)
    if isinstance(formula, And):
        names = set()
        for arg in formula.args:
            names |= formula_predicates(arg)
        return names
    if isinstance(formula, Forall):
        return formula_predicates(formula.body)
    if isinstance(formula, When):
        return formula_predicates(formula.condition) | formula_predicates(
            formula.effect
        )
    return set()


def effect_predicates(effect):
    """Names of predicates an effect can add or delete."""
    if isinstance(effect, When):
        return effect_predicates(effect.effect)
    if isinstance(effect, Forall):
        return effect_predicates(effect.body)
    if isinstance(effect, And):
        names = set()
        for arg in effect.args:
            names |= effect_predicates(arg)
        return names
    return formula_predicates(effect)


@dataclass(frozen=True)
class CategoryHierarchy:
    """Single-inheritance tree of categories rooted at ``Object``.

    Args:
        parents (:obj:`tuple` of :obj:`tuple`): Sorted (child, parent) pairs.

    """

    parents: Tuple[Tuple[str, str], ...] = ()
    _parent_of: Dict[str, str] = field(
        default=None, compare=False, repr=False, hash=False
    )

    def __post_init__(self):
        object.__setattr__(self, "_parent_of", dict(self.parents))

    @classmethod
    def from_parents(cls, parents):
        """Builds a hierarchy, adding undeclared parents as children of the root.

        Args:
            parents (dict): Category name to parent category name.

        Returns:
            (CategoryHierarchy)

        """
        parents = {
            canonical_category(c): canonical_category(p) for c, p in parents.items()
        }
        parents.pop(ROOT, None)
        for parent in list(parents.values()):
            if parent != ROOT and parent not in parents:
                parents[parent] = ROOT

        graph = nx.DiGraph()
        graph.add_node(ROOT)
        graph.add_edges_from(parents.items())
        if not nx.is_directed_acyclic_graph(graph):
            cycle = [edge[0] for edge in nx.find_cycle(graph)]
            raise CyclicHierarchy(cycle)
        return cls(tuple(sorted(parents.items())))

    @property
    def categories(self):
        return frozenset(self._parent_of) | {ROOT}

    def parent(self, category):
        return self._parent_of.get(category)

    def check(self, category):
        if category not in self._parent_of and category != ROOT:
            raise UnknownCategory(category)
        return category

    def ancestors(self, category):
        """The category itself followed by its ancestors up to the root."""
        self.check(category)
        chain = [category]
        while chain[-1] != ROOT:
            chain.append(self._parent_of[chain[-1]])
        return chain

    def is_subtype(self, category, ancestor):
        return canonical_category(ancestor) in self.ancestors(category)

    def subtypes(self, ancestor):
        ancestor = self.check(canonical_category(ancestor))
        return frozenset(c for c in self.categories if self.is_subtype(c, ancestor))


@dataclass(frozen=True)
class PredicateDecl:
    name: str
    parameters: Tuple[Tuple[str, str], ...] = ()

    @property
    def arity(self):
        return len(self.parameters)


@dataclass(frozen=True)
class ActionSchema:
    name: str
    parameters: Tuple[Tuple[str, str], ...]
    precondition: object
    effect: object
    cost: int = 1


@dataclass(frozen=True)
class DomainModel:
    name: str
    requirements: FrozenSet[str]
    hierarchy: CategoryHierarchy
    predicates: Tuple[PredicateDecl, ...]
    actions: Tuple[ActionSchema, ...]

    def predicate(self, name):
        for decl in self.predicates:
            if decl.name == name:
                return decl
        return None

    def action(self, name):
        for schema in self.actions:
            if schema.name.lower() == name.lower():
                return schema
        return None

    @property
    def uses_costs(self):
        return any(a.cost != 1 for a in self.actions)


@dataclass(frozen=True)
class ProblemModel:
    name: str
    domain_name: str
    objects: Tuple[Tuple[str, str], ...]
    init: FrozenSet[tuple]
    goal: object
    metric: bool = False


@dataclass(frozen=True)
class TypedObjects:
    """Objects of a task with their categories, queried by category."""

    objects: Tuple[Tuple[str, str], ...]
    hierarchy: CategoryHierarchy
    _cache: Dict[str, tuple] = field(
        default=None, compare=False, repr=False, hash=False
    )

    def __post_init__(self):
        object.__setattr__(self, "_cache", {})

    def category_of(self, name):
        for obj, category in self.objects:
            if obj == name:
                return category
        return None

    def of_category(self, category):
        category = canonical_category(category)
        if category not in self._cache:
            wanted = self.hierarchy.subtypes(category)
            self._cache[category] = tuple(o for o, c in self.objects if c in wanted)
        return self._cache[category]


@dataclass(frozen=True)
class SymState:
    """A closed-world state: exactly the listed ground atoms are true."""

    atoms: FrozenSet[tuple] = frozenset()

    def __contains__(self, atom):
        return atom in self.atoms

    def __len__(self):
        return len(self.atoms)

    def with_atoms(self, added=(), deleted=()):
        return SymState((self.atoms - frozenset(deleted)) | frozenset(added))

    def true_of(self, predicate) -> Tuple[tuple, ...]:
        return tuple(sorted(a for a in self.atoms if a[0] == predicate))


def format_atom(atom):
    """Prints a ground atom the way it appears in a problem file."""
    return "(" + " ".join(atom) + ")"
