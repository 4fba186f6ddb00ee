class NavigationError(Exception):
    """Base class for navigation and grounding failures."""


class Unreachable(NavigationError):
    def __init__(self, start, goals=()):
        self.start = start
        self.goals = tuple(goals)
        super().__init__(f"No free path from {start} to any of {len(self.goals)} goal cells")


class NotVisible(NavigationError):
    def __init__(self, instance_id):
        self.instance_id = instance_id
        super().__init__(f"{instance_id} has no pixels in the current frame")


class NoFrontier(NavigationError):
    def __init__(self):
        super().__init__("Nothing left to explore and no known instances")


class NoGoalRegion(NavigationError):
    """No known cell is close enough to act on an instance."""

    def __init__(self, instance_id):
        self.instance_id = instance_id
        super().__init__(f"No cell within reach of {instance_id}")
