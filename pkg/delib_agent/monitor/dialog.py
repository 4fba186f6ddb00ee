"""Rule-based subgoal extraction from dialog turns."""
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Tuple

import yaml

from delib_agent import config, logger
from delib_agent.monitor.errors import EmptyResult
from delib_agent.monitor.subgoals import Subgoal


@dataclass(frozen=True)
class LexiconEntry:
    pattern: object
    subgoals: Tuple[Tuple[str, ...], ...]


@dataclass
class Lexicon:
    """Compiled phrase patterns plus the word forms they may mention.

    `{object}` inside a pattern stands for any vocabulary word form,
    longest forms first; named groups then map back to categories.
    """

    vocabulary: Dict[str, str]
    entries: List[LexiconEntry]

    @classmethod
    def from_dict(cls, table):
        vocabulary = {k.lower(): v for k, v in table["vocabulary"].items()}
        forms = sorted(vocabulary, key=lambda w: (-len(w), w))
        alternation = "(?:" + "|".join(re.escape(w) for w in forms) + r")\b"
        entries = []
        for item in table["lexicon"]:
            text = item["pattern"].replace("{object}", alternation)
            entries.append(
                LexiconEntry(
                    re.compile(text, re.IGNORECASE),
                    tuple(tuple(s) for s in item["subgoals"]),
                )
            )
        return cls(vocabulary, entries)

    @classmethod
    def from_config(cls):
        return cls.from_dict(config["monitor"])

    @classmethod
    def load(cls, path):
        """Reads a YAML or JSON file with `vocabulary` and `lexicon` keys."""
        return cls.from_dict(yaml.safe_load(Path(path).read_text()))

    def _expand(self, template, match):
        groups = {
            k: self.vocabulary[v.lower()] for k, v in match.groupdict().items() if v is not None
        }
        values = [part.format(**groups) if "{" in part else part for part in template]
        return Subgoal(*values)

    def matches(self, turn):
        """Non-overlapping matches in one turn, leftmost first.

        Where two patterns start at the same place the earlier entry wins.
        """
        found = []
        for order, entry in enumerate(self.entries):
            for match in entry.pattern.finditer(turn):
                found.append((match.start(), order, match.end(), entry, match))
        found.sort(key=lambda f: (f[0], f[1]))
        chosen, end = [], -1
        for start, _, stop, entry, match in found:
            if start >= end:
                chosen.append((entry, match))
                end = stop
        return chosen


def parse_subgoals(turns, lexicon=None):
    """Ordered, deduplicated subgoals mentioned in a dialog.

    Args:
        turns (list): Dialog turns as text.
        lexicon (Lexicon): Patterns to apply; defaults to the configured one.

    Returns:
        (list) Subgoals in order of first mention.

    Raises:
        EmptyResult: Nothing in the dialog matched.

    """
    lexicon = lexicon or Lexicon.from_config()
    subgoals, seen = [], set()
    for turn in turns:
        text = " ".join(turn.split())
        for entry, match in lexicon.matches(text):
            for template in entry.subgoals:
                subgoal = lexicon._expand(template, match)
                if subgoal.key not in seen:
                    seen.add(subgoal.key)
                    subgoals.append(subgoal)
    if not subgoals:
        logger.info(f"No subgoal recognised in {len(turns)} turns")
        raise EmptyResult(turns)
    return subgoals
