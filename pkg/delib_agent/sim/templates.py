"""Household task templates and the scripted receptacle-full scene."""
from dataclasses import dataclass, field
from typing import Dict, Tuple

from delib_agent.sim.errors import UnknownTemplate
from delib_agent.sim.scene import GoalCondition, InstanceSpec, SceneSpec, TaskSpec

# Every generated kitchen has these; the cabinet is where hidden objects go.
BASE_FIXTURES = ("CounterTop", "Cabinet")
# Fixtures that start closed.
CLOSED = ("Cabinet", "Fridge", "Microwave")


@dataclass(frozen=True)
class ObjectSpec:
    """Pickupable objects a template needs.

    Args:
        category (str): Object category.
        where (tuple): Receptacle categories it may start on, in preference order.
        count (int): How many to create.
        states (dict): Initial states.
        hideable (bool): May start inside a closed container.

    """

    category: str
    where: Tuple[str, ...] = ("CounterTop",)
    count: int = 1
    states: Dict[str, bool] = field(default_factory=dict)
    hideable: bool = True


@dataclass(frozen=True)
class TaskTemplate:
    name: str
    fixtures: Tuple[str, ...]
    objects: Tuple[ObjectSpec, ...]
    conditions: Tuple[GoalCondition, ...]
    subgoals: Tuple[tuple, ...]
    dialog: Tuple[str, ...]

    def all_fixtures(self):
        names = list(BASE_FIXTURES)
        names += [f for f in self.fixtures if f not in names]
        return names

    def canonical_subgoals(self):
        records = []
        for subgoal in self.subgoals:
            record = {"patient": subgoal[0], "predicate": subgoal[1]}
            if len(subgoal) > 2:
                record["destination"] = subgoal[2]
            records.append(record)
        return records

    def task(self, reference_length=None):
        return TaskSpec(
            name=self.name,
            conditions=list(self.conditions),
            subgoals=self.canonical_subgoals(),
            dialog=list(self.dialog),
            reference_length=reference_length,
        )


DIRTY = {"isClean": False}
CLEAN = {"isClean": True}

TEMPLATES = {
    t.name: t
    for t in (
        TaskTemplate(
            "WaterPlant",
            fixtures=("Sink", "Faucet", "HousePlant"),
            objects=(ObjectSpec("Mug", states=CLEAN),),
            conditions=(GoalCondition("HousePlant", "isFilledWithLiquid"),),
            subgoals=(("HousePlant", "isFilledWithLiquid"),),
            dialog=("Hi, what should I do today?", "Please water the plant."),
        ),
        TaskTemplate(
            "Coffee",
            fixtures=("Sink", "Faucet", "CoffeeMachine"),
            objects=(ObjectSpec("Mug", ("CounterTop", "DiningTable"), states=DIRTY),),
            conditions=(
                GoalCondition("Mug", "isClean"),
                GoalCondition("Mug", "simbotIsFilledWithCoffee"),
            ),
            subgoals=(("Mug", "isClean"), ("Mug", "simbotIsFilledWithCoffee")),
            dialog=("Can you make me a cup of coffee?", "The mug is dirty, rinse it first."),
        ),
        TaskTemplate(
            "Toast",
            fixtures=("Toaster",),
            objects=(ObjectSpec("Bread"), ObjectSpec("Knife")),
            conditions=(GoalCondition("BreadSlice", "isCooked"),),
            subgoals=(("Bread", "isSliced"), ("BreadSlice", "isCooked")),
            dialog=("Make a slice of toast.", "The knife is on the counter."),
        ),
        TaskTemplate(
            "Boil",
            fixtures=("StoveBurner", "Sink", "Faucet"),
            objects=(
                ObjectSpec("Potato"),
                ObjectSpec("Pot", ("StoveBurner",), hideable=False),
            ),
            conditions=(GoalCondition("Potato", "isCooked"),),
            subgoals=(("Potato", "isCooked"),),
            dialog=("Boil a potato.", "There is a pot on the stove."),
        ),
        TaskTemplate(
            "PutAll",
            fixtures=("DiningTable",),
            objects=(ObjectSpec("Fork", count=2),),
            conditions=(GoalCondition("Fork", "isPlacedTo", "DiningTable", count=2),),
            subgoals=(("Fork", "isPlacedTo", "DiningTable"),) * 2,
            dialog=("Put all the forks on the table.",),
        ),
        TaskTemplate(
            "PutAllInOne",
            fixtures=("DiningTable",),
            objects=(
                ObjectSpec("Apple", ("CounterTop", "DiningTable"), count=2),
                ObjectSpec("Bowl", ("CounterTop", "DiningTable"), count=2, states=CLEAN),
            ),
            conditions=(
                GoalCondition("Apple", "isPlacedTo", "Bowl", count=2, same_destination=True),
            ),
            subgoals=(("Apple", "isPlacedTo", "Bowl"),) * 2,
            dialog=("Put all the apples in one bowl.",),
        ),
        TaskTemplate(
            "CleanAll",
            fixtures=("Sink", "Faucet", "DiningTable"),
            objects=(ObjectSpec("Plate", ("CounterTop", "DiningTable"), count=2, states=DIRTY),),
            conditions=(GoalCondition("Plate", "isClean", count=2),),
            subgoals=(("Plate", "isClean"),) * 2,
            dialog=("Clean all the plates.",),
        ),
        TaskTemplate(
            "Slices",
            fixtures=("DiningTable",),
            objects=(ObjectSpec("Lettuce", ("DiningTable", "CounterTop")), ObjectSpec("Knife")),
            conditions=(GoalCondition("LettuceSlice", "isSliced"),),
            subgoals=(("Lettuce", "isSliced"),),
            dialog=("Slice the lettuce.",),
        ),
        TaskTemplate(
            "CookedSlices",
            fixtures=("Microwave",),
            objects=(ObjectSpec("Potato"), ObjectSpec("Knife")),
            conditions=(GoalCondition("PotatoSlice", "isCooked", count=2),),
            subgoals=(
                ("Potato", "isSliced"),
                ("PotatoSlice", "isCooked"),
                ("PotatoSlice", "isCooked"),
            ),
            dialog=("Slice a potato.", "Cook two potato slices."),
        ),
        TaskTemplate(
            "Sandwich",
            fixtures=("Toaster", "DiningTable"),
            objects=(
                ObjectSpec("Bread"),
                ObjectSpec("Lettuce"),
                ObjectSpec("Knife"),
                ObjectSpec("Plate", ("DiningTable", "CounterTop"), states=CLEAN),
            ),
            conditions=(
                GoalCondition("BreadSlice", "isCooked", count=2),
                GoalCondition("BreadSlice", "isPlacedTo", "Plate", count=2, same_destination=True),
                GoalCondition("LettuceSlice", "isPlacedTo", "Plate"),
            ),
            subgoals=(
                ("Bread", "isSliced"),
                ("BreadSlice", "isCooked"),
                ("BreadSlice", "isCooked"),
                ("BreadSlice", "isPlacedTo", "Plate"),
                ("BreadSlice", "isPlacedTo", "Plate"),
                ("Lettuce", "isSliced"),
                ("LettuceSlice", "isPlacedTo", "Plate"),
            ),
            dialog=(
                "Toast two slices of bread.",
                "Slice the lettuce.",
                "Put the toast on a plate.",
                "Put the lettuce slice on the plate.",
            ),
        ),
        TaskTemplate(
            "Salad",
            fixtures=("DiningTable",),
            objects=(
                ObjectSpec("Lettuce"),
                ObjectSpec("Tomato"),
                ObjectSpec("Knife"),
                ObjectSpec("Bowl", ("DiningTable", "CounterTop"), states=CLEAN),
            ),
            conditions=(
                GoalCondition("LettuceSlice", "isPlacedTo", "Bowl"),
                GoalCondition("TomatoSlice", "isPlacedTo", "Bowl"),
            ),
            subgoals=(
                ("Lettuce", "isSliced"),
                ("LettuceSlice", "isPlacedTo", "Bowl"),
                ("Tomato", "isSliced"),
                ("TomatoSlice", "isPlacedTo", "Bowl"),
            ),
            dialog=(
                "Slice the lettuce.",
                "Put a lettuce slice in the bowl.",
                "Slice a tomato.",
                "Put a tomato slice in the bowl.",
            ),
        ),
        TaskTemplate(
            "Breakfast",
            fixtures=("CoffeeMachine", "Toaster", "DiningTable"),
            objects=(
                ObjectSpec("Mug", states=CLEAN),
                ObjectSpec("Bread"),
                ObjectSpec("Knife"),
                ObjectSpec("Plate", ("DiningTable", "CounterTop"), states=CLEAN),
            ),
            conditions=(
                GoalCondition("Mug", "simbotIsFilledWithCoffee"),
                GoalCondition("BreadSlice", "isCooked"),
                GoalCondition("BreadSlice", "isPlacedTo", "Plate"),
            ),
            subgoals=(
                ("Mug", "simbotIsFilledWithCoffee"),
                ("Bread", "isSliced"),
                ("BreadSlice", "isCooked"),
                ("BreadSlice", "isPlacedTo", "Plate"),
            ),
            dialog=("Make me a coffee.", "Then make some toast.", "Put the toast on a plate."),
        ),
    )
}


def get_template(name):
    if name not in TEMPLATES:
        raise UnknownTemplate(name)
    return TEMPLATES[name]


def receptacle_full_scene():
    """A shelf that takes fewer objects than the agent expects.

    The shelf already holds a book and the scene caps it at one object, so
    placing the key chain there fails until the book is moved off.

    Returns:
        (tuple) SceneSpec, TaskSpec.

    """
    walls = [(x, y) for x in range(10) for y in range(10) if x in (0, 9) or y in (0, 9)]
    scene = SceneSpec(
        name="receptacle_full",
        dims=(10, 10, 8),
        walls=walls,
        instances=[
            InstanceSpec("CounterTop_0", "CounterTop", (1, 1, 0)),
            InstanceSpec("Shelf_0", "Shelf", (6, 8, 0), capacity=1),
            InstanceSpec("KeyChain_0", "KeyChain", parent="CounterTop_0"),
            InstanceSpec("Book_0", "Book", parent="Shelf_0"),
        ],
        agent={"x": 4, "y": 4, "heading": 0, "pitch": 0},
    )
    task = TaskSpec(
        name="ReceptacleFull",
        conditions=[GoalCondition("KeyChain", "isPlacedTo", "Shelf")],
        subgoals=[{"patient": "KeyChain", "predicate": "isPlacedTo", "destination": "Shelf"}],
        dialog=["Put the key chain on the shelf."],
    )
    return scene, task
