"""What each object category can do, shared by the simulator and the agent."""
from dataclasses import dataclass, field
from typing import Optional, Tuple

from delib_agent import config

SURFACE = "surface"
INTERIOR = "interior"
STACK = "stack"

HEATS_OPEN = "heats_open"
HEATS_CLOSED = "heats_closed"
HEATS_VIA = "heats_via"
BREWS_COFFEE = "brews_coffee"
WATER_SOURCE = "water_source"

APPLIANCE_PREDICATES = {
    HEATS_OPEN: "heatsOpen",
    HEATS_CLOSED: "heatsClosed",
    HEATS_VIA: "heatsVia",
    BREWS_COFFEE: "brewsCoffee",
}


@dataclass(frozen=True)
class CategoryAffordance:
    name: str
    type: str = "Object"
    pickupable: bool = False
    receptacle: Optional[str] = None
    capacity: int = 0
    size: Tuple[int, int, int] = (1, 1, 1)
    slots: Tuple[int, ...] = ()
    openable: bool = False
    toggleable: bool = False
    fillable: bool = False
    cookable: bool = False
    dirtiable: bool = False
    sliced: bool = False
    slicer: bool = False
    slice_into: Optional[str] = None
    slice_count: int = 0
    appliance: Optional[str] = None
    accepts: Tuple[str, ...] = ()

    @property
    def sliceable(self):
        return self.slice_into is not None

    @property
    def state_labels(self):
        """State predicates perception reports for this category."""
        labels = []
        if self.cookable:
            labels.append("isCooked")
        if self.dirtiable:
            labels.append("isClean")
        if self.fillable:
            labels += ["isFilledWithLiquid", "simbotIsFilledWithCoffee"]
        if self.sliced:
            labels.append("isSliced")
        if self.openable:
            labels.append("isClosed")
        if self.toggleable:
            labels.append("isToggled")
        return tuple(labels)


@dataclass
class AffordanceTable:
    """Category name to affordance lookup with a permissive default.

    Args:
        categories (dict): Affordances keyed by category name.

    """

    categories: dict = field(default_factory=dict)

    @classmethod
    def from_config(cls, section=None):
        section = section or config["sim"]
        pickupable_types = set(section["pickupable_types"])
        default_capacity = section["default_capacity"]
        categories = {}
        for name, spec in section["categories"].items():
            receptacle = spec.get("receptacle")
            slice_into, slice_count = spec.get("slice", (None, 0))
            categories[name] = CategoryAffordance(
                name=name,
                type=spec.get("type", "Object"),
                pickupable=spec.get("type") in pickupable_types,
                receptacle=receptacle,
                capacity=spec.get("capacity", default_capacity) if receptacle else 0,
                size=tuple(spec.get("size", (1, 1, 1))),
                slots=tuple(spec.get("slots", ())),
                openable=spec.get("openable", False),
                toggleable=spec.get("toggleable", False),
                fillable=spec.get("fillable", False),
                cookable=spec.get("cookable", False),
                dirtiable=spec.get("dirtiable", False),
                sliced=spec.get("sliced", False),
                slicer=spec.get("slicer", False),
                slice_into=slice_into,
                slice_count=slice_count,
                appliance=spec.get("appliance"),
                accepts=tuple(spec.get("accepts", ())),
            )
        return cls(categories)

    def __getitem__(self, category):
        if category not in self.categories:
            return CategoryAffordance(category)
        return self.categories[category]

    def __contains__(self, category):
        return category in self.categories

    def can_hold(self, receptacle, item):
        """Whether an object of category `item` may be put into `receptacle`."""
        holder, held = self[receptacle], self[item]
        if not holder.receptacle or not held.pickupable or receptacle == item:
            return False
        return not holder.accepts or item in holder.accepts or held.type in holder.accepts

    def slice_source(self, category):
        """The category whose slicing yields `category`, or None."""
        for name, affordance in self.categories.items():
            if affordance.slice_into == category:
                return name
        return None

    def with_appliance(self, appliance):
        return sorted(n for n, a in self.categories.items() if a.appliance == appliance)

    def static_atoms(self, obj, category):
        """Static planning facts about one object."""
        affordance = self[category]
        atoms = []
        if affordance.receptacle:
            atoms.append(("receptacle", obj))
        for flag in ("openable", "toggleable", "fillable", "cookable"):
            if getattr(affordance, flag):
                atoms.append((flag, obj))
        if affordance.sliceable:
            atoms.append(("sliceable", obj))
        if affordance.appliance in APPLIANCE_PREDICATES:
            atoms.append((APPLIANCE_PREDICATES[affordance.appliance], obj))
        return atoms
