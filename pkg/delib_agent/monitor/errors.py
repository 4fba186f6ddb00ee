class MonitorError(Exception):
    """Base class for subgoal and trajectory errors."""


class InvalidSubgoal(MonitorError):
    def __init__(self, message):
        super().__init__(message)


class EmptyResult(MonitorError):
    """No lexicon pattern matched any dialog turn."""

    def __init__(self, turns):
        self.turns = list(turns)
        super().__init__(f"No subgoal found in {len(self.turns)} dialog turns")


class InconsistentTrajectory(MonitorError):
    def __init__(self, step, detail):
        self.step = step
        self.detail = detail
        super().__init__(f"Step {step}: {detail}")


class InvalidTransition(MonitorError):
    def __init__(self, current, requested):
        self.current = current
        self.requested = requested
        super().__init__(f"Subgoal status cannot go from {current} to {requested}")
