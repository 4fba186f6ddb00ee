class WorldModelError(Exception):
    """Base class for errors of the agent's world representation."""


class UnknownAction(WorldModelError):
    def __init__(self, action):
        self.action = action
        super().__init__(f"No modelled effect for action {action}")


class UnknownInstance(WorldModelError):
    def __init__(self, instance_id):
        self.instance_id = instance_id
        super().__init__(f"No instance {instance_id} in the table")
