class SimulationError(Exception):
    """Base class for errors raised by the simulated household."""


class SceneError(SimulationError):
    """A scene description breaks a layout rule."""


class LayoutOverflow(SimulationError):
    """A pile of objects would leave the map."""

    def __init__(self, obj):
        self.obj = obj
        super().__init__(f"No room left to place {obj}")


class GenerationFailure(SimulationError):
    """Scene generation could not satisfy its constraints."""

    def __init__(self, template, seed, reason):
        self.template = template
        self.seed = seed
        self.reason = reason
        super().__init__(f"Cannot generate {template} (seed {seed}): {reason}")


class UnknownTemplate(SimulationError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"Unknown task template {name}")
