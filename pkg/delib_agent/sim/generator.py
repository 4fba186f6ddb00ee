"""Seeded generation of solvable household scenes from task templates."""
import math
from collections import Counter
from dataclasses import dataclass, replace

import networkx as nx
import numpy as np

from delib_agent import config, logger
from delib_agent.executor.episode import oracle_length
from delib_agent.sim.affordances import AffordanceTable
from delib_agent.sim.errors import GenerationFailure, SimulationError
from delib_agent.sim.household import Household
from delib_agent.sim.scene import InstanceSpec, SceneSpec
from delib_agent.sim.templates import CLOSED, get_template
from delib_agent.world.geometry import HEADINGS

NEIGHBOURS = ((1, 0), (-1, 0), (0, 1), (0, -1))


@dataclass
class GeneratedEpisode:
    scene: SceneSpec
    task: object

    @property
    def reference_length(self):
        return self.task.reference_length


class _Room:
    """Walls, fixture footprints and floor items of a scene being built."""

    def __init__(self, side, height, affordances, elevation):
        self.side = side
        self.height = height
        self.affordances = affordances
        self.elevation = elevation
        self.walls = [
            (x, y) for x in range(side) for y in range(side)
            if x in (0, side - 1) or y in (0, side - 1)
        ]
        self.blocked = set(self.walls)
        self.fixtures = {}
        self.instances = []
        self.children = Counter()
        self.ordinals = Counter()
        self.floor_items = set()
        self.agent = None

    def new_id(self, category):
        ordinal = self.ordinals[category]
        self.ordinals[category] += 1
        return f"{category}_{ordinal}"

    def interior(self):
        return [(x, y) for x in range(1, self.side - 1) for y in range(1, self.side - 1)]

    def free_cells(self):
        return [c for c in self.interior() if c not in self.blocked]

    def _footprint(self, anchor, category):
        sx, sy, _ = self.affordances[category].size
        return [(anchor[0] + i, anchor[1] + j) for i in range(sx) for j in range(sy)]

    def _margin(self):
        cells = set()
        for footprint in self.fixtures.values():
            for x, y in footprint:
                cells.update((x + dx, y + dy) for dx in (-1, 0, 1) for dy in (-1, 0, 1))
        return cells

    def anchors(self, category, beside=None):
        """Anchors where a fixture fits against a wall, clear of other fixtures.

        With `beside`, the fixture must instead touch that fixture's footprint.
        """
        low, high = 1, self.side - 2
        margin = self._margin()
        if beside is not None:
            near = {
                (x + dx, y + dy) for x, y in self.fixtures[beside] for dx, dy in NEIGHBOURS
            }
        taken = self.blocked | self.floor_items | {self.agent}
        found = []
        for anchor in self.interior():
            footprint = self._footprint(anchor, category)
            if any(not (low <= x <= high and low <= y <= high) for x, y in footprint):
                continue
            if taken.intersection(footprint):
                continue
            if beside is not None:
                if not near.intersection(footprint):
                    continue
            elif margin.intersection(footprint):
                continue
            xs = [x for x, _ in footprint]
            ys = [y for _, y in footprint]
            if min(xs) == low or max(xs) == high or min(ys) == low or max(ys) == high:
                found.append(anchor)
        return found

    def add_fixture(self, category, anchor):
        instance_id = self.new_id(category)
        footprint = self._footprint(anchor, category)
        self.fixtures[instance_id] = footprint
        self.blocked.update(footprint)
        states = {"isClosed": True} if category in CLOSED else {}
        voxel = (anchor[0], anchor[1], self.elevation.get(category, 0))
        self.instances.append(InstanceSpec(instance_id, category, voxel, states))
        return instance_id

    def place_fixture(self, category, rng, beside=None):
        candidates = self.anchors(category, beside)
        if not candidates:
            return None
        return self.add_fixture(category, candidates[int(rng.integers(len(candidates)))])

    def receptacles(self, categories, item):
        """Fixtures of the given categories that accept `item` and have room."""
        found = []
        for spec in self.instances:
            if spec.category not in categories or spec.id not in self.fixtures:
                continue
            capacity = self.affordances[spec.category].capacity
            if self.affordances.can_hold(spec.category, item) and self.children[spec.id] < capacity:
                found.append(spec)
        return found

    def add_object(self, category, parent, states):
        instance_id = self.new_id(category)
        self.instances.append(
            InstanceSpec(instance_id, category, states=dict(states), parent=parent)
        )
        if parent is not None:
            self.children[parent] += 1
        return instance_id

    def connected(self):
        free = set(self.free_cells())
        graph = nx.Graph()
        graph.add_nodes_from(free)
        graph.add_edges_from(
            (c, (c[0] + dx, c[1] + dy))
            for c in free
            for dx, dy in ((1, 0), (0, 1))
            if (c[0] + dx, c[1] + dy) in free
        )
        if not free or not nx.is_connected(graph):
            return False
        # Every fixture needs a free cell next to it.
        return all(
            any((x + dx, y + dy) in free for x, y in footprint for dx, dy in NEIGHBOURS)
            for footprint in self.fixtures.values()
        )


def room_side(distractors, section=None):
    """Edge length of the room, grown so distractors have floor to stand on."""
    section = section or config["sim"]
    need = section["generator"]["room_per_distractor"] * distractors
    return max(section["grid_size"], math.isqrt(need) + 7)


def _place_objects(room, template, rng, p_hidden):
    for spec in template.objects:
        for _ in range(spec.count):
            parent = None
            if spec.hideable and p_hidden > 0 and rng.random() < p_hidden:
                hidden = room.receptacles(("Cabinet", "Fridge"), spec.category)
                if hidden:
                    parent = hidden[0].id
            if parent is None:
                for where in spec.where:
                    options = room.receptacles((where,), spec.category)
                    if options:
                        parent = options[int(rng.integers(len(options)))].id
                        break
            if parent is None:
                raise ValueError(f"no receptacle with room for {spec.category}")
            room.add_object(spec.category, parent, spec.states)


def _place_distractors(room, distractors, rng, section):
    items = section["distractors"]["items"]
    furniture = section["distractors"]["furniture"]
    every = section["generator"]["furniture_every"]
    for index in range(distractors):
        if every and (index + 1) % every == 0:
            category = furniture[int(rng.integers(len(furniture)))]
            if room.place_fixture(category, rng) is not None:
                continue
        free = [c for c in room.free_cells() if c not in room.floor_items and c != room.agent]
        if not free:
            raise ValueError("no floor left for distractors")
        cell = free[int(rng.integers(len(free)))]
        room.floor_items.add(cell)
        category = items[int(rng.integers(len(items)))]
        instance_id = room.new_id(category)
        room.instances.append(InstanceSpec(instance_id, category, (cell[0], cell[1], 0)))


def _attempt(template, seed, distractors, p_hidden, rng, affordances, section):
    side = room_side(distractors, section)
    elevation = section["generator"]["elevation"]
    room = _Room(side, config["world"]["map_height"], affordances, elevation)
    for category in template.all_fixtures():
        beside = None
        if category == "Faucet":
            sinks = [s.id for s in room.instances if s.category == "Sink"]
            beside = sinks[0] if sinks else None
        if room.place_fixture(category, rng, beside) is None:
            raise ValueError(f"no room for {category}")
    if not room.connected():
        raise ValueError("fixtures cut the floor apart")
    _place_objects(room, template, rng, p_hidden)
    free = room.free_cells()
    room.agent = free[int(rng.integers(len(free)))]
    _place_distractors(room, distractors, rng, section)
    if not room.connected():
        raise ValueError("furniture cuts the floor apart")
    scene = SceneSpec(
        name=f"{template.name}_{seed}",
        dims=(side, side, room.height),
        walls=room.walls,
        instances=room.instances,
        agent={
            "x": room.agent[0],
            "y": room.agent[1],
            "heading": HEADINGS[int(rng.integers(len(HEADINGS)))],
            "pitch": 0,
        },
    )
    Household(scene, affordances)
    return scene


def _layouts(spec, seed, distractors, p_hidden, affordances):
    """Yields (attempt, scene, reason) per layout attempt; scene is None on failure."""
    section = config["sim"]
    rng = np.random.default_rng(seed)
    for attempt in range(section["generator"]["max_attempts"]):
        try:
            scene = _attempt(spec, seed, distractors, p_hidden, rng, affordances, section)
        except (ValueError, SimulationError) as e:
            logger.debug(f"{spec.name} seed {seed} attempt {attempt}: {e}")
            yield attempt, None, str(e)
            continue
        yield attempt, scene, None


def draw_scene(template, seed=0, distractors=0, p_hidden=0.0, affordances=None):
    """The first valid layout for a template, without a ground-truth run.

    Raises:
        UnknownTemplate: No such template.
        GenerationFailure: No valid layout within the attempt limit.

    """
    spec = get_template(template)
    affordances = affordances or AffordanceTable.from_config()
    reason = "no attempt made"
    for _, scene, failure in _layouts(spec, seed, distractors, p_hidden, affordances):
        if scene is not None:
            return scene
        reason = failure
    raise GenerationFailure(template, seed, reason)


def generate_scene(template, seed=0, distractors=0, p_hidden=0.0, affordances=None):
    """Builds a scene for a task template and measures its reference length.

    Fixtures stand against the walls with an aisle between them, objects
    start on the receptacles the template names or, with probability
    `p_hidden`, inside the closed cabinet. The reference length is the
    number of steps the agent takes with ground-truth belief; a layout on
    which that run fails is discarded and another one drawn.

    Args:
        template (str): Template name.
        seed (int): Seed of the layout.
        distractors (int): Extra objects that no goal mentions.
        p_hidden (float): Chance for each hideable object to start hidden.
        affordances (AffordanceTable): Category semantics.

    Returns:
        (GeneratedEpisode) Scene plus task with its reference length set.

    Raises:
        UnknownTemplate: No such template.
        GenerationFailure: No solvable layout within the attempt limit.

    """
    spec = get_template(template)
    affordances = affordances or AffordanceTable.from_config()
    reason = "no attempt made"
    for attempt, scene, failure in _layouts(spec, seed, distractors, p_hidden, affordances):
        if scene is None:
            reason = failure
            continue
        task = spec.task()
        length = oracle_length(scene, task, affordances)
        if length is None:
            reason = "the ground-truth run did not succeed"
            logger.debug(f"{template} seed {seed} attempt {attempt}: {reason}")
            continue
        logger.info(f"Generated {scene.name}: {len(scene.instances)} objects, reference {length}")
        return GeneratedEpisode(scene, replace(task, reference_length=max(length, 1)))
    raise GenerationFailure(template, seed, reason)
