"""Where to look next when the plan needs an object nobody has seen."""
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from delib_agent import config, logger
from delib_agent.navigation.errors import NoFrontier
from delib_agent.navigation.primitives import pitch_steps
from delib_agent.sim import actions as act
from delib_agent.sim.affordances import AffordanceTable
from delib_agent.world.instances import farthest_instances

OPEN = "open"
INSTANCE = "instance"
FRONTIER = "frontier"


@dataclass(frozen=True)
class ExplorationTarget:
    kind: str
    instance_id: Optional[str] = None
    cell: Optional[Tuple[int, int]] = None

    def __str__(self):
        return f"{self.kind}:{self.instance_id or self.cell}"


def scan_primitives(pitch=0, turns=None, scan_pitch=None):
    """A full turn in place at the scan pitch, used on arrival and at episode start.

    Returns to `pitch` afterwards.
    """
    turns = config["navigation"]["scan_turns"] if turns is None else turns
    scan_pitch = config["navigation"]["scan_pitch"] if scan_pitch is None else scan_pitch
    return (
        pitch_steps(pitch, scan_pitch) + [act.TURN_LEFT] * turns + pitch_steps(scan_pitch, pitch)
    )


def closed_containers(belief, affordances=None, skip=()):
    """Believed-closed openable receptacles, nearest first."""
    affordances = affordances or AffordanceTable.from_config()
    found = [
        i for i in belief.instances
        if affordances[i.category].openable
        and affordances[i.category].receptacle
        and i.state("isClosed")
        and i.id not in skip
    ]
    pose = belief.pose
    return sorted(
        found,
        key=lambda i: ((i.centroid[0] - pose.x) ** 2 + (i.centroid[1] - pose.y) ** 2, i.id),
    )


def select_search_target(
    belief, grid, rng, previous=None, k=None, open_first=True, affordances=None, opened=()
):
    """Picks the next exploration target.

    Known closed containers are opened first. Otherwise one of the `k`
    farthest known instances is sampled, or a frontier cell when fewer than
    two instances are known. The previous target is not repeated while
    alternatives exist.

    Args:
        belief (BeliefSnapshot): The agent's belief.
        grid (OccupancyGrid): Traversability, for frontier cells.
        rng (`np.random.Generator`): Seeded sampler.
        previous (ExplorationTarget): Last target chosen.
        k (int): Size of the farthest set.
        open_first (bool): Try closed containers before anything else.
        affordances (AffordanceTable): Which categories open.
        opened (iterable): Containers already tried.

    Returns:
        (ExplorationTarget)

    Raises:
        NoFrontier: No instance is known and no frontier is left.

    """
    if open_first:
        closed = closed_containers(belief, affordances, skip=opened)
        if closed:
            return ExplorationTarget(OPEN, instance_id=closed[0].id)

    if len(belief) >= 2:
        candidates = [
            i for i in farthest_instances(belief.instances, belief.pose, k)
            if previous is None or i.id != previous.instance_id
        ]
        if candidates:
            choice = candidates[int(rng.integers(len(candidates)))]
            return ExplorationTarget(INSTANCE, instance_id=choice.id)

    cells = [
        c for c in grid.frontier() if previous is None or c != previous.cell
    ] or grid.frontier()
    if not cells:
        raise NoFrontier()
    cell = cells[int(rng.integers(len(cells)))]
    logger.debug(f"Exploring frontier cell {cell}")
    return ExplorationTarget(FRONTIER, cell=tuple(cell))


def make_rng(seed):
    return np.random.default_rng(seed)
