"""Which object categories matter for a subgoal predicate."""
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Tuple

from delib_agent import config
from delib_agent.monitor.subgoals import PREDICATES
from delib_agent.pddl.errors import UnknownCategory, UnknownPredicate


@dataclass(frozen=True)
class RelevanceTable:
    """Predicate to the categories kept by scene pruning.

    `routes` lists, per predicate and optionally per patient category,
    alternative tool sets that achieve the predicate. They decide which
    unseen categories get a placeholder instance.
    """

    relevant: Dict[str, FrozenSet[str]] = field(default_factory=dict)
    routes: Dict[str, Dict[str, Tuple[Tuple[str, ...], ...]]] = field(default_factory=dict)

    @classmethod
    def from_config(cls, section=None):
        section = section or config["planner"]
        relevant = {p: frozenset(c) for p, c in section["relevance"].items()}
        routes = {
            predicate: {
                patient: tuple(tuple(route) for route in options)
                for patient, options in table.items()
            }
            for predicate, table in section.get("tool_routes", {}).items()
        }
        return cls(relevant, routes)

    def categories(self, predicate):
        try:
            return self.relevant[predicate]
        except KeyError:
            raise UnknownPredicate(predicate)

    def tool_routes(self, predicate, patient):
        table = self.routes.get(predicate, {})
        return table.get(patient, table.get("default", ((),)))

    def choose_route(self, predicate, patient, present):
        """The route missing the fewest categories, earliest on ties."""
        present = set(present)
        options = self.tool_routes(predicate, patient)
        return min(options, key=lambda r: (len(set(r) - present), options.index(r)))

    def check(self, hierarchy):
        """Raises when a predicate lacks an entry or names unknown categories."""
        missing: List[str] = [p for p in PREDICATES if p not in self.relevant]
        if missing:
            raise UnknownPredicate(missing[0])
        for categories in self.relevant.values():
            for category in sorted(categories):
                if category not in hierarchy.categories:
                    raise UnknownCategory(category)
        for table in self.routes.values():
            for options in table.values():
                for route in options:
                    for category in route:
                        if category not in hierarchy.categories:
                            raise UnknownCategory(category)
