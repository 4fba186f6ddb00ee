"""Ground-truth object state of the simulated household and its layout."""
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from delib_agent.sim.affordances import INTERIOR, STACK, SURFACE
from delib_agent.sim.errors import LayoutOverflow, SceneError
from delib_agent.utils.raycast import EMPTY, WALL


@dataclass
class SimObject:
    id: str
    category: str
    affordance: object
    voxel: Tuple[int, int, int]
    states: Dict[str, bool] = field(default_factory=dict)
    parent: Optional[str] = None
    children: List[str] = field(default_factory=list)
    capacity: int = 0
    handle: int = 0
    slot: int = 0

    @property
    def fixed(self):
        return not self.affordance.pickupable

    @property
    def size(self):
        return self.affordance.size if self.fixed else (1, 1, 1)

    def voxels(self):
        x0, y0, z0 = self.voxel
        sx, sy, sz = self.size
        return [
            (x0 + i, y0 + j, z0 + k)
            for i in range(sx)
            for j in range(sy)
            for k in range(sz)
        ]

    def footprint(self):
        x0, y0, _ = self.voxel
        sx, sy, _ = self.size
        return [(x0 + i, y0 + j) for i in range(sx) for j in range(sy)]

    def centroid(self, voxel_size):
        return (np.mean(np.array(self.voxels(), dtype=float), axis=0) + 0.5) * voxel_size


class Household:
    """Objects, walls and the agent's hand.

    Fixed objects keep the voxel they were given. Everything else is laid
    out from the parent relation: a child keeps the slot position it was
    given on arrival, so siblings never move when one leaves, and piles
    upwards when that position is taken.

    Args:
        scene (SceneSpec): Initial scene.
        affordances (AffordanceTable): Category semantics.

    """

    def __init__(self, scene, affordances):
        self.dims = tuple(scene.dims)
        self.voxel_size = scene.voxel_size
        self.walls = {tuple(c) for c in scene.walls}
        self.affordances = affordances
        self.objects = {}
        self.held = None
        self.retired = []
        self._ordinals = {}
        for spec in scene.instances:
            self._add(spec.id, spec.category, spec.voxel, spec.states, spec.capacity)
        for spec in scene.instances:
            if spec.parent is not None:
                if spec.parent not in self.objects:
                    raise SceneError(f"{spec.id} sits in unknown {spec.parent}")
                parent = self.objects[spec.parent]
                if not parent.affordance.receptacle:
                    raise SceneError(f"{spec.parent} is not a receptacle")
                self.attach(spec.id, spec.parent)
        self._check_fixed()
        self._blocked = frozenset(self.blocked_cells())
        self.layout()

    def _add(self, obj_id, category, voxel, states=None, capacity=None):
        affordance = self.affordances[category]
        obj = SimObject(
            id=obj_id,
            category=category,
            affordance=affordance,
            voxel=tuple(voxel),
            states=dict(states or {}),
            capacity=affordance.capacity if capacity is None else capacity,
            handle=len(self.objects) + len(self.retired),
        )
        self.objects[obj_id] = obj
        prefix, _, ordinal = obj_id.rpartition("_")
        if ordinal.isdigit():
            self._ordinals[prefix] = max(self._ordinals.get(prefix, 0), int(ordinal) + 1)
        return obj

    def new_object(self, category, voxel, states=None):
        ordinal = self._ordinals.get(category, 0)
        return self._add(f"{category}_{ordinal}", category, voxel, states)

    def _check_fixed(self):
        seen = {}
        for obj in self.fixed_objects():
            for v in obj.voxels():
                if not self.in_bounds(v):
                    raise SceneError(f"{obj.id} leaves the map at {v}")
                if v[:2] in self.walls:
                    raise SceneError(f"{obj.id} overlaps a wall at {v[:2]}")
                if v in seen:
                    raise SceneError(f"{obj.id} overlaps {seen[v]} at {v}")
                seen[v] = obj.id

    def in_bounds(self, voxel):
        return all(0 <= v < d for v, d in zip(voxel, self.dims))

    def fixed_objects(self):
        return [o for o in self.objects.values() if o.fixed]

    def of_category(self, category):
        return [o for o in self.objects.values() if o.category == category]

    def capacity(self, obj_id):
        return self.objects[obj_id].capacity

    def ancestors(self, obj_id):
        chain = []
        parent = self.objects[obj_id].parent
        while parent is not None:
            chain.append(parent)
            parent = self.objects[parent].parent
        return chain

    def subtree(self, obj_id):
        nodes = [obj_id]
        for child in self.objects[obj_id].children:
            nodes += self.subtree(child)
        return nodes

    def is_held(self, obj_id):
        return self.held is not None and obj_id in self.subtree(self.held)

    def hidden(self, obj_id):
        """Inside a closed container."""
        return any(
            self.objects[a].affordance.openable and self.objects[a].states.get("isClosed")
            for a in self.ancestors(obj_id)
        )

    def attach(self, child_id, parent_id):
        """Puts a child into the lowest slot its new parent has free."""
        parent = self.objects[parent_id]
        used = {self.objects[c].slot for c in parent.children}
        child = self.objects[child_id]
        child.parent = parent_id
        child.slot = min(s for s in range(len(used) + 1) if s not in used)
        parent.children.append(child_id)

    def detach(self, child_id):
        parent_id = self.objects[child_id].parent
        if parent_id is not None:
            self.objects[parent_id].children.remove(child_id)
        self.objects[child_id].parent = None

    def retire(self, obj_id):
        self.detach(obj_id)
        self.retired.append(self.objects.pop(obj_id))

    def blocked_cells(self):
        cells = set(self.walls)
        for obj in self.fixed_objects():
            cells.update(obj.footprint())
        return cells

    def walkable(self, cell):
        return (
            0 <= cell[0] < self.dims[0]
            and 0 <= cell[1] < self.dims[1]
            and cell not in self._blocked
        )

    def _bases(self, obj):
        x0, y0, z0 = obj.voxel
        sx, sy, sz = obj.size
        kind = obj.affordance.receptacle
        if kind == SURFACE:
            return [(x0 + i, y0 + j, z0 + sz) for i in range(sx) for j in range(sy)]
        if kind == INTERIOR:
            return [
                (x0 + i, y0 + j, z0 + s)
                for s in obj.affordance.slots
                for i in range(sx)
                for j in range(sy)
            ]
        if kind == STACK:
            return [(x0, y0, z0 + 1)]
        return []

    def _settle(self, obj, voxel, taken):
        obj.voxel = voxel
        taken[voxel] = obj.id
        self._lay_children(obj, taken)

    def _lay_children(self, obj, taken):
        bases = self._bases(obj)
        for child_id in sorted(obj.children, key=lambda c: self.objects[c].slot):
            if not bases:
                raise SceneError(f"{obj.id} cannot hold {child_id}")
            x, y, z = bases[self.objects[child_id].slot % len(bases)]
            while (x, y, z) in taken and taken[(x, y, z)] != obj.id:
                z += 1
            if z >= self.dims[2]:
                raise LayoutOverflow(child_id)
            self._settle(self.objects[child_id], (x, y, z), taken)

    def layout(self):
        """Recomputes the voxel of every object that is not fixed.

        Raises:
            LayoutOverflow: A pile reaches the ceiling.

        """
        taken = {}
        for obj in self.fixed_objects():
            for v in obj.voxels():
                taken[v] = obj.id
        self.placed = {}
        loose = [
            o for o in self.objects.values()
            if not o.fixed and o.parent is None and o.id != self.held
        ]
        for obj in loose:
            if obj.voxel in taken:
                raise SceneError(f"{obj.id} collides with {taken[obj.voxel]}")
            self._settle(obj, obj.voxel, taken)
        for obj in self.fixed_objects():
            self._lay_children(obj, taken)
        self.placed = {
            v: i for v, i in taken.items() if not self.objects[i].fixed
        }

    def owner_grid(self):
        """int32 grid of render handles; walls are full-height."""
        grid = np.full(self.dims, EMPTY, dtype=np.int32)
        for x, y in self.walls:
            grid[x, y, :] = WALL
        for obj in self.fixed_objects():
            for v in obj.voxels():
                grid[v] = obj.handle
        for v, obj_id in sorted(self.placed.items()):
            if not self.hidden(obj_id):
                grid[v] = self.objects[obj_id].handle
        return grid

    def by_handle(self):
        return {o.handle: o.id for o in self.objects.values()}

    def nearest(self, category, point):
        """Instance of `category` whose centroid is closest to `point` in xy."""
        candidates = self.of_category(category)
        if not candidates:
            return None
        return min(
            candidates,
            key=lambda o: (
                float(np.hypot(*(o.centroid(self.voxel_size)[:2] - np.asarray(point[:2])))),
                o.id,
            ),
        )

    def atoms(self):
        """Ground atoms of the current state, in the planner's vocabulary."""
        atoms = set()
        held = set(self.subtree(self.held)) if self.held else set()
        for obj in self.objects.values():
            if obj.id in held:
                atoms.add(("isPickedUp", obj.id))
            if obj.parent is not None:
                atoms.add(("parentReceptacles", obj.id, obj.parent))
                atoms.add(("isPlacedTo", obj.id, obj.parent))
            for predicate, value in obj.states.items():
                if value:
                    atoms.add((predicate, obj.id))
            if self.hidden(obj.id):
                atoms.add(("isInsideClosed", obj.id))
        return frozenset(atoms)
