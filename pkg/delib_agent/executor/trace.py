"""Episode traces: one JSON line per step, plus a separate timing table."""
import json
from pathlib import Path

import pandas as pd


class EpisodeTrace:
    """Step records and planner timings of one episode.

    Records hold nothing wall-clock dependent, so two runs with the same
    seeds write identical trace files. Timings go to their own CSV.
    """

    def __init__(self):
        self.records = []
        self.timings = []

    def __len__(self):
        return len(self.records)

    def record(
        self,
        step,
        pose,
        action=None,
        result=None,
        subgoal=None,
        plan_remaining=(),
        belief_digest=None,
        exception=None,
        recovery=None,
    ):
        entry = {
            "step": step,
            "pose": pose.to_dict() if pose is not None else None,
            "action": action,
            "result": result.to_dict() if result is not None else None,
            "active_subgoal": str(subgoal) if subgoal is not None else None,
            "plan_remaining": [str(a) for a in plan_remaining],
            "belief_digest": belief_digest,
        }
        if exception is not None:
            entry["exception"] = exception.to_dict()
        if recovery is not None:
            entry["recovery"] = recovery.to_dict()
        self.records.append(entry)
        return entry

    def time_plan(self, subgoal, outcome, pruning):
        self.timings.append(
            {
                "subgoal": str(subgoal),
                "status": outcome.status.value,
                "objects": len(outcome.problem.objects) if outcome.problem else 0,
                "plan_length": len(outcome.plan),
                "expanded": outcome.expanded,
                "pruning": pruning,
                "seconds": outcome.elapsed,
            }
        )

    def finish(self, metrics):
        self.records.append({"metrics": metrics})

    def exceptions(self):
        return [r["exception"] for r in self.records if "exception" in r]

    def write(self, path):
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w") as f:
            for entry in self.records:
                f.write(json.dumps(entry, sort_keys=True) + "\n")

    def write_timings(self, path):
        columns = ["subgoal", "status", "objects", "plan_length", "expanded", "pruning", "seconds"]
        pd.DataFrame(self.timings, columns=columns).to_csv(path, index=False)


def read_trace(path):
    with open(path) as f:
        return [json.loads(line) for line in f if line.strip()]
