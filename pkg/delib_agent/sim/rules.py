"""Appliance behaviour, applied after every environment step."""
from delib_agent.sim.affordances import (
    BREWS_COFFEE,
    HEATS_CLOSED,
    HEATS_OPEN,
    HEATS_VIA,
    WATER_SOURCE,
)


def _cook(obj):
    if obj.affordance.cookable:
        obj.states["isCooked"] = True


def _fill_with_coffee(obj):
    if obj.affordance.fillable:
        obj.states["simbotIsFilledWithCoffee"] = True
        obj.states["isFilledWithLiquid"] = True


def _rinse(obj):
    obj.states["isClean"] = True
    if obj.affordance.fillable:
        obj.states["isFilledWithLiquid"] = True


def water_target(house, faucet):
    """The sink a faucet pours into: the nearest one."""
    return house.nearest("Sink", faucet.centroid(house.voxel_size))


def fire_appliance_rules(house):
    """Applies the effect of every switched-on appliance to its contents.

    Toasters cook what they hold, microwaves only while closed, stove
    burners cook the contents of the pans and pots standing on them, coffee
    machines fill the containers they hold and a running faucet rinses and
    fills everything in its sink.
    """
    objects = house.objects
    for obj in list(objects.values()):
        if not obj.states.get("isToggled"):
            continue
        kind = obj.affordance.appliance
        if kind == HEATS_OPEN:
            for child in obj.children:
                _cook(objects[child])
        elif kind == HEATS_CLOSED and obj.states.get("isClosed"):
            for child in obj.children:
                _cook(objects[child])
        elif kind == HEATS_VIA:
            for container in obj.children:
                for child in objects[container].children:
                    _cook(objects[child])
        elif kind == BREWS_COFFEE:
            for child in obj.children:
                _fill_with_coffee(objects[child])
        elif kind == WATER_SOURCE:
            sink = water_target(house, obj)
            if sink is not None:
                for child in sink.children:
                    _rinse(objects[child])
