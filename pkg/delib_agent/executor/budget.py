"""Step, failure and replanning caps of an episode."""
from dataclasses import asdict, dataclass

from delib_agent import config
from delib_agent.executor.errors import BudgetExhausted, InvalidRunConfig


@dataclass(frozen=True)
class Budget:
    max_steps: int = 1000
    max_failed_actions: int = 30
    max_subgoal_steps: int = 200
    max_replans: int = 5

    def __post_init__(self):
        for name, value in asdict(self).items():
            if value <= 0:
                raise InvalidRunConfig(f"{name} must be positive, got {value}")

    @classmethod
    def from_config(cls, overrides=None):
        section = config["executor"]
        values = {k: section[k] for k in asdict(cls()) if k in section}
        values.update({k: v for k, v in (overrides or {}).items() if v is not None})
        return cls(**values)


class BudgetTracker:
    """Counts steps against a budget; raises as soon as a cap is reached.

    The subgoal counter is shared by a subgoal and every recovery subgoal
    pushed on top of it.
    """

    def __init__(self, budget):
        self.budget = budget
        self.steps = 0
        self.failed = 0
        self.subgoal_steps = 0

    def start_subgoal(self):
        self.subgoal_steps = 0

    def check(self):
        """Raises when no further step may be taken."""
        if self.steps >= self.budget.max_steps:
            raise BudgetExhausted("max_steps", "episode", self.steps)
        if self.failed >= self.budget.max_failed_actions:
            raise BudgetExhausted("max_failed_actions", "episode", self.failed)
        if self.subgoal_steps >= self.budget.max_subgoal_steps:
            raise BudgetExhausted("max_subgoal_steps", "subgoal", self.subgoal_steps)

    def record(self, success):
        self.steps += 1
        self.subgoal_steps += 1
        if not success:
            self.failed += 1

    def fail(self):
        """Counts the last recorded step as failed after all.

        For actions the simulator accepted but the next frame shows had no
        effect.
        """
        self.failed += 1

    def to_dict(self):
        return {"steps": self.steps, "failed_actions": self.failed}
