"""Symbolic subgoals, their status ledger and their file format."""
import json
import re
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Optional

from delib_agent import logger
from delib_agent.monitor.errors import InvalidSubgoal, InvalidTransition

PREDICATES = (
    "isCooked",
    "isClean",
    "isPickedUp",
    "isFilledWithLiquid",
    "isEmptied",
    "isSliced",
    "simbotIsFilledWithCoffee",
    "isPlacedTo",
    "isToggled",
)


@dataclass(frozen=True)
class Subgoal:
    """(patient, predicate, destination).

    `patient_id` and `destination_id` pin the binding to specific
    instances; recovery subgoals use them.
    """

    patient: str
    predicate: str
    destination: Optional[str] = None
    completed: bool = False
    patient_id: Optional[str] = None
    destination_id: Optional[str] = None

    def __post_init__(self):
        if self.predicate not in PREDICATES:
            raise InvalidSubgoal(f"Unknown subgoal predicate {self.predicate}")
        if (self.predicate == "isPlacedTo") != (self.destination is not None):
            raise InvalidSubgoal("Only isPlacedTo takes a destination")

    @property
    def key(self):
        return (self.patient, self.predicate, self.destination)

    def __str__(self):
        parts = [self.patient_id or self.patient, self.predicate]
        if self.destination is not None:
            parts.append(self.destination_id or self.destination)
        return "(" + ", ".join(parts) + ")"

    def to_dict(self):
        record = {"patient": self.patient, "predicate": self.predicate}
        if self.destination is not None:
            record["destination"] = self.destination
        if self.completed:
            record["completed"] = True
        return record

    @classmethod
    def from_dict(cls, record):
        return cls(
            patient=record["patient"],
            predicate=record["predicate"],
            destination=record.get("destination"),
            completed=bool(record.get("completed", False)),
        )


class SubgoalStatus(Enum):
    PENDING = "Pending"
    IN_PROGRESS = "InProgress"
    COMPLETED = "Completed"
    ABANDONED = "Abandoned"


_TRANSITIONS = {
    SubgoalStatus.PENDING: {SubgoalStatus.IN_PROGRESS},
    SubgoalStatus.IN_PROGRESS: {SubgoalStatus.COMPLETED, SubgoalStatus.ABANDONED},
    SubgoalStatus.COMPLETED: set(),
    SubgoalStatus.ABANDONED: set(),
}


class StatusLedger:
    """Status and step of last transition for each subgoal of an episode."""

    def __init__(self, subgoals):
        self.subgoals = list(subgoals)
        self.entries = [(SubgoalStatus.PENDING, 0) for _ in self.subgoals]

    def __len__(self):
        return len(self.subgoals)

    def status(self, index):
        return self.entries[index][0]

    def advance(self, index, status, step):
        current = self.entries[index][0]
        if status not in _TRANSITIONS[current]:
            raise InvalidTransition(current.value, status.value)
        self.entries[index] = (status, step)
        logger.debug(f"Subgoal {self.subgoals[index]} -> {status.value} at step {step}")

    def start(self, index, step):
        self.advance(index, SubgoalStatus.IN_PROGRESS, step)

    def complete(self, index, step):
        self.advance(index, SubgoalStatus.COMPLETED, step)

    def abandon(self, index, step):
        self.advance(index, SubgoalStatus.ABANDONED, step)

    def count(self, status):
        return sum(1 for s, _ in self.entries if s == status)

    @property
    def settled(self):
        return all(
            s in (SubgoalStatus.COMPLETED, SubgoalStatus.ABANDONED) for s, _ in self.entries
        )

    def to_list(self):
        return [
            dict(subgoal.to_dict(), status=status.value, step=step)
            for subgoal, (status, step) in zip(self.subgoals, self.entries)
        ]


def load_subgoals(path):
    """Reads a JSON list of {patient, predicate, destination?, completed?}."""
    text = Path(path).read_text()
    if not text.strip():
        return []
    records = json.loads(text)
    if not isinstance(records, list):
        raise InvalidSubgoal(f"{path} does not hold a list of subgoals")
    return [Subgoal.from_dict(r) for r in records]


def save_subgoals(subgoals, path):
    Path(path).write_text(json.dumps([s.to_dict() for s in subgoals], indent=1))


_PHRASES = {
    "isCooked": "Cook the {patient}.",
    "isClean": "Clean the {patient}.",
    "isPickedUp": "Pick up the {patient}.",
    "isFilledWithLiquid": "Fill the {patient} with water.",
    "isEmptied": "Empty the {patient}.",
    "isSliced": "Slice the {patient}.",
    "simbotIsFilledWithCoffee": "Fill the {patient} with coffee.",
    "isPlacedTo": "Put the {patient} on the {destination}.",
    "isToggled": "Turn on the {patient}.",
}


def _words(category):
    return re.sub(r"(?<=[a-z])(?=[A-Z])", " ", category).lower()


def render_subgoals(subgoals):
    """One English sentence per subgoal."""
    return [
        _PHRASES[s.predicate].format(
            patient=_words(s.patient),
            destination=_words(s.destination) if s.destination else "",
        )
        for s in subgoals
    ]
