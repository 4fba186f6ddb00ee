"""Belief updates for the agent's own actions.

Each successful mid-level action writes the state changes the household
domain models for it, marked authoritative so noisy perception labels do
not undo them.
"""
import math

from delib_agent import config, logger
from delib_agent.sim.affordances import (
    BREWS_COFFEE,
    HEATS_CLOSED,
    HEATS_OPEN,
    HEATS_VIA,
    INTERIOR,
    WATER_SOURCE,
)
from delib_agent.world.errors import UnknownAction

NAVIGATION_ACTIONS = ("GoTo", "Search")


def water_sink(table, faucet):
    """The believed sink a faucet pours into: the nearest one."""
    sinks = table.of_category("Sink")
    if not sinks:
        return None
    fx, fy = faucet.centroid[:2]
    return min(
        sinks,
        key=lambda s: (math.hypot(s.centroid[0] - fx, s.centroid[1] - fy), s.ordinal),
    )


def _cook(record, affordances):
    if affordances[record.category].cookable:
        record.assert_state("isCooked", True)


def _rinse(record, affordances):
    record.assert_state("isClean", True)
    if affordances[record.category].fillable:
        record.assert_state("isFilledWithLiquid", True)


def _brew(record, affordances):
    if affordances[record.category].fillable:
        record.assert_state("simbotIsFilledWithCoffee", True)
        record.assert_state("isFilledWithLiquid", True)


def _resting_voxels(table, receptacle, affordances):
    """A guess of where something placed into `receptacle` ends up."""
    voxels = sorted(receptacle.voxels)
    cx, cy, _ = receptacle.centroid / config["world"]["voxel_size"]
    column = min(voxels, key=lambda v: (abs(v[0] + 0.5 - cx) + abs(v[1] + 0.5 - cy), v))
    if affordances[receptacle.category].receptacle == INTERIOR:
        return {column}
    top = max(v[2] for v in voxels if v[:2] == column[:2])
    return {(column[0], column[1], min(top + 1, config["world"]["map_height"] - 1))}


def _pickup(table, args, affordances, step):
    record = table.get(args[0])
    if record.parent is not None and record.parent in table:
        table.get(record.parent).reported_full = False
    record.parent = None
    record.relation_authoritative = True
    table.held = record.id


def _place(table, args, affordances, step):
    record, receptacle = table.get(args[0]), table.get(args[1])
    record.parent = receptacle.id
    record.relation_authoritative = True
    table.held = None
    estimate = _resting_voxels(table, receptacle, affordances)
    for member in table.subtree(record.id):
        item = table.get(member)
        item.voxels = set(estimate)
        item.stale = True

    kind = affordances[receptacle.category].appliance
    toggled = receptacle.state("isToggled")
    if kind == HEATS_OPEN and toggled:
        _cook(record, affordances)
    if kind == HEATS_VIA and toggled:
        for child in table.children(record.id):
            _cook(child, affordances)
    if receptacle.parent in table:
        support = table.get(receptacle.parent)
        if affordances[support.category].appliance == HEATS_VIA and support.state("isToggled"):
            _cook(record, affordances)
    if kind == BREWS_COFFEE and toggled:
        _brew(record, affordances)
    for faucet in table.of_category("Faucet"):
        if faucet.state("isToggled") and water_sink(table, faucet) is receptacle:
            _rinse(record, affordances)


def _slice(table, args, affordances, step):
    whole = table.get(args[0])
    affordance = affordances[whole.category]
    table.remove(whole.id)
    pieces = []
    for _ in range(affordance.slice_count):
        piece = table.register(affordance.slice_into, whole.voxels, step)
        piece.assert_state("isSliced", True)
        piece.parent = whole.parent
        piece.relation_authoritative = whole.parent is not None
        piece.stale = True
        pieces.append(piece.id)
    logger.debug(f"Sliced {whole.id} into {pieces}")


def _toggleon(table, args, affordances, step):
    record = table.get(args[0])
    record.assert_state("isToggled", True)
    kind = affordances[record.category].appliance
    if kind == HEATS_OPEN or (kind == HEATS_CLOSED and record.state("isClosed")):
        for child in table.children(record.id):
            _cook(child, affordances)
    elif kind == HEATS_VIA:
        for container in table.children(record.id):
            for child in table.children(container.id):
                _cook(child, affordances)
    elif kind == BREWS_COFFEE:
        for child in table.children(record.id):
            _brew(child, affordances)
    elif kind == WATER_SOURCE:
        sink = water_sink(table, record)
        if sink is not None:
            for child in table.children(sink.id):
                _rinse(child, affordances)


def _toggleoff(table, args, affordances, step):
    table.get(args[0]).assert_state("isToggled", False)


def _open(table, args, affordances, step):
    table.get(args[0]).assert_state("isClosed", False)


def _close(table, args, affordances, step):
    record = table.get(args[0])
    record.assert_state("isClosed", True)
    if affordances[record.category].appliance == HEATS_CLOSED and record.state("isToggled"):
        for child in table.children(record.id):
            _cook(child, affordances)


def _pour(table, args, affordances, step):
    source, target = table.get(args[0]), table.get(args[1])
    source.assert_state("isFilledWithLiquid", False)
    source.assert_state("simbotIsFilledWithCoffee", False)
    target.assert_state("isFilledWithLiquid", True)


EFFECTS = {
    "PickUp": _pickup,
    "Place": _place,
    "Slice": _slice,
    "ToggleOn": _toggleon,
    "ToggleOff": _toggleoff,
    "Open": _open,
    "Close": _close,
    "Pour": _pour,
}


def apply_action_effect(table, name, args, success, affordances, step=-1):
    """Writes the modelled outcome of an executed mid-level action.

    Args:
        table (InstanceTable): Updated in place.
        name (str): Action name of the household domain.
        args (tuple): Instance ids the action was applied to.
        success (bool): Whether the environment reported success. Failed
            actions leave the table unchanged.
        affordances (AffordanceTable): Category semantics.
        step (int): Step index for newly registered instances.

    Returns:
        (InstanceTable)

    Raises:
        UnknownAction: The action has no modelled effect.

    """
    if name not in EFFECTS and name not in NAVIGATION_ACTIONS:
        raise UnknownAction(name)
    if success and name in EFFECTS:
        EFFECTS[name](table, tuple(args), affordances, step)
    return table
