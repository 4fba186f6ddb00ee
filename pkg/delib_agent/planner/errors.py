class PlanningError(Exception):
    """Base class for subgoal planning errors."""


class InvalidRequest(PlanningError):
    def __init__(self, message):
        super().__init__(message)


class UnknownPlanAction(PlanningError):
    def __init__(self, action):
        self.action = action
        super().__init__(f"{action} is not an action of the grounded task")
